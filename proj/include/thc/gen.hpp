// Copyright 2026 The thc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Instance generators. Every random choice is a counter-based coin keyed by
// (seed, stream, item rank), where items are enumerated in colex order:
// triple {a<b<c} has rank C(c,3) + C(b,2) + a, pair {a<b} has rank
// C(b,2) + a. Output therefore does not depend on evaluation order.

#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "thc/hypergraph.hpp"
#include "thc/rng.hpp"

namespace thc::gen {

enum class Kind { kRandom, kPlanted, kComplete, kCounterexample };

struct GenSpec {
  Kind kind = Kind::kRandom;
  std::size_t n = 0;
  double p = 0.5;
  std::uint64_t seed = 0;
};

inline std::uint64_t triple_rank(Vertex a, Vertex b, Vertex c) {
  const std::uint64_t C = c, B = b;
  return C * (C - 1) * (C - 2) / 6 + B * (B - 1) / 2 + a;
}
inline std::uint64_t pair_rank(Vertex a, Vertex b) {
  const std::uint64_t B = b;
  return B * (B - 1) / 2 + a;
}

inline void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("probability must lie in [0,1]");
}

/// Binomial random 3-graph: each of the C(n,3) triples independently with
/// probability p.
inline Hypergraph3 random(std::size_t n, double p, std::uint64_t seed) {
  check_probability(p);
  std::vector<Triple> ts;
  for (Vertex c = 2; c < n; ++c)
    for (Vertex b = 1; b < c; ++b)
      for (Vertex a = 0; a < b; ++a)
        if (counter_uniform(seed, streams::kGenTriples, triple_rank(a, b, c)) < p)
          ts.push_back({a, b, c});
  return Hypergraph3::from_triples(n, ts);
}

inline Hypergraph3 complete(std::size_t n) { return Hypergraph3::complete(n); }

struct Planted {
  Hypergraph3 h;
  std::vector<Vertex> order;  ///< planted cyclic order
};

/// Tight Hamilton cycle along a random cyclic order, plus every other
/// triple with probability p_noise.
inline Planted planted(std::size_t n, double p_noise, std::uint64_t seed) {
  check_probability(p_noise);
  if (n < 4) throw Error("planted instances need n >= 4");
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), Vertex{0});
  Rng rng(seed, streams::kGenOrder);
  rng.shuffle(std::span<Vertex>(order));
  std::vector<Triple> ts;
  for (std::size_t i = 0; i < n; ++i)
    ts.push_back(sorted({order[i], order[(i + 1) % n], order[(i + 2) % n]}));
  for (Vertex c = 2; c < n; ++c)
    for (Vertex b = 1; b < c; ++b)
      for (Vertex a = 0; a < b; ++a)
        if (counter_uniform(seed, streams::kGenTriples, triple_rank(a, b, c)) < p_noise)
          ts.push_back({a, b, c});
  return {Hypergraph3::from_triples(n, ts), std::move(order)};
}

/// Real root of p^3 + p - 1 = 0 by bisection on [0,1].
inline double counterexample_p() {
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200 && hi - lo > 0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (mid * mid * mid + mid - 1.0 < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct Counterexample {
  Hypergraph3 h;
  Graph2 g;                ///< the underlying random graph G(n,p)
  std::vector<Vertex> x;   ///< |X| = 2n/3 + 1
  std::vector<Vertex> y;   ///< |Y| = n/3 - 1
  double p = 0.0;
};

/// Dense 3-graph without a tight Hamilton cycle. V = X + Y with
/// X = {0..2n/3}, Y the rest; G ~ G(n,p) with p^3 = 1 - p. A triple e is an
/// edge iff either |e & X| != 2 and e spans a triangle of G, or
/// |e & X| == 2 and its two X-vertices are non-adjacent in G.
inline Counterexample counterexample(std::size_t n, std::uint64_t seed) {
  if (n % 3 != 0) throw Error("counterexample requires 3 | n");
  if (n < 9) throw Error("counterexample requires n >= 9");
  Counterexample out;
  out.p = counterexample_p();
  const std::size_t nx = 2 * n / 3 + 1;
  out.g = Graph2(n);
  for (Vertex b = 1; b < n; ++b)
    for (Vertex a = 0; a < b; ++a)
      if (counter_uniform(seed, streams::kGenPairs, pair_rank(a, b)) < out.p) out.g.add_edge(a, b);
  for (Vertex v = 0; v < n; ++v) (v < nx ? out.x : out.y).push_back(v);
  std::vector<Triple> ts;
  for (Vertex c = 2; c < n; ++c)
    for (Vertex b = 1; b < c; ++b)
      for (Vertex a = 0; a < b; ++a) {
        const int in_x = (a < nx) + (b < nx) + (c < nx);
        bool take;
        if (in_x == 2) {
          // X-vertices of a sorted triple with exactly two in X are a and b.
          take = !out.g.has_edge(a, b);
        } else {
          take = out.g.has_edge(a, b) && out.g.has_edge(a, c) && out.g.has_edge(b, c);
        }
        if (take) ts.push_back({a, b, c});
      }
  out.h = Hypergraph3::from_triples(n, ts);
  return out;
}

inline Kind parse_kind(const std::string& s) {
  if (s == "random") return Kind::kRandom;
  if (s == "planted") return Kind::kPlanted;
  if (s == "complete") return Kind::kComplete;
  if (s == "counterexample") return Kind::kCounterexample;
  throw Error("unknown generator kind '" + s + "'");
}

inline std::string kind_name(Kind k) {
  switch (k) {
    case Kind::kRandom: return "random";
    case Kind::kPlanted: return "planted";
    case Kind::kComplete: return "complete";
    case Kind::kCounterexample: return "counterexample";
  }
  return "?";
}

}  // namespace thc::gen
