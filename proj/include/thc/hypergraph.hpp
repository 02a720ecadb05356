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

#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "thc/vertex_set.hpp"

namespace thc {

/// Raised on contract violations (bad input, violated preconditions).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a randomized step fails on every allowed retry.
class RetriesExhausted : public Error {
 public:
  using Error::Error;
};

using Triple = std::array<Vertex, 3>;
using Pair = std::pair<Vertex, Vertex>;

inline Triple sorted(Triple t) {
  std::sort(t.begin(), t.end());
  return t;
}

/// True iff count < fraction * n. Products such as 0.3 * 10 land a hair
/// above the intended integer in binary floating point; a relative slack
/// keeps exact ties on the "not low" side.
inline bool below_threshold(double count, double fraction, double n) {
  const double t = fraction * n;
  return count < t - 1e-9 * std::max(1.0, t);
}

/// 3-uniform hypergraph on vertices 0..n-1. Immutable after construction.
///
/// Edges are kept as a sorted vector of canonical (ascending) triples and,
/// for each ordered pair (u,v), as a bitset N(u,v) of completing vertices,
/// so codegrees and co-neighbourhood intersections are word-parallel.
/// Memory is n*n*ceil(n/64) words.
class Hypergraph3 {
 public:
  Hypergraph3() = default;

  static Hypergraph3 from_triples(std::size_t n, std::span<const Triple> triples) {
    Hypergraph3 h(n);
    std::vector<Triple> canon;
    canon.reserve(triples.size());
    for (const Triple& t : triples) {
      for (Vertex v : t)
        if (v >= n)
          throw Error("vertex " + std::to_string(v) + " out of range for n=" +
                      std::to_string(n));
      if (t[0] == t[1] || t[0] == t[2] || t[1] == t[2])
        throw Error("triple repeats a vertex: " + std::to_string(t[0]) + " " +
                    std::to_string(t[1]) + " " + std::to_string(t[2]));
      canon.push_back(sorted(t));
    }
    std::sort(canon.begin(), canon.end());
    canon.erase(std::unique(canon.begin(), canon.end()), canon.end());
    for (const Triple& t : canon) h.add_unchecked(t);
    h.edges_ = std::move(canon);
    return h;
  }

  static Hypergraph3 from_triples(std::size_t n, std::initializer_list<Triple> triples) {
    return from_triples(n, std::span<const Triple>(triples.begin(), triples.size()));
  }

  static Hypergraph3 complete(std::size_t n) {
    std::vector<Triple> ts;
    for (Vertex c = 2; c < n; ++c)
      for (Vertex b = 1; b < c; ++b)
        for (Vertex a = 0; a < b; ++a) ts.push_back({a, b, c});
    return from_triples(n, ts);
  }

  std::size_t n() const { return n_; }
  std::size_t num_edges() const { return edges_.size(); }
  std::size_t words() const { return words_; }
  /// Sorted canonical triples.
  const std::vector<Triple>& edges() const { return edges_; }

  bool has_edge(Vertex a, Vertex b, Vertex c) const {
    if (a == b || a == c || b == c) return false;
    return bits::test(neighbors(a, b), c);
  }
  bool has_edge(const Triple& t) const { return has_edge(t[0], t[1], t[2]); }

  /// N(u,v) as a bitset over 0..n-1. Empty when u == v.
  Bits neighbors(Vertex u, Vertex v) const {
    return Bits(nbr_.data() + (static_cast<std::size_t>(u) * n_ + v) * words_, words_);
  }
  std::size_t codegree(Vertex u, Vertex v) const {
    return codeg_[static_cast<std::size_t>(u) * n_ + v];
  }
  std::size_t degree(Vertex v) const { return deg_[v]; }

  /// Induced sub-hypergraph H[keep], vertices keep their ids.
  Hypergraph3 induced(const VertexSet& keep) const {
    std::vector<Triple> ts;
    for (const Triple& t : edges_)
      if (keep.contains(t[0]) && keep.contains(t[1]) && keep.contains(t[2])) ts.push_back(t);
    return from_triples(n_, ts);
  }

 private:
  explicit Hypergraph3(std::size_t n)
      : n_(n),
        words_(words_for(n)),
        nbr_(n * n * words_for(n), 0),
        codeg_(n * n, 0),
        deg_(n, 0) {}

  void set_bit(Vertex u, Vertex v, Vertex w) {
    nbr_[(static_cast<std::size_t>(u) * n_ + v) * words_ + (w >> 6)] |= Word{1} << (w & 63);
    ++codeg_[static_cast<std::size_t>(u) * n_ + v];
  }
  void add_unchecked(const Triple& t) {
    const auto [a, b, c] = t;
    set_bit(a, b, c);
    set_bit(b, a, c);
    set_bit(a, c, b);
    set_bit(c, a, b);
    set_bit(b, c, a);
    set_bit(c, b, a);
    ++deg_[a];
    ++deg_[b];
    ++deg_[c];
  }

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  std::vector<Word> nbr_;
  std::vector<std::uint32_t> codeg_;
  std::vector<std::size_t> deg_;
  std::vector<Triple> edges_;
};

struct DegreeStats {
  std::size_t delta1 = 0;  ///< minimum vertex degree
  std::size_t delta2 = 0;  ///< minimum codegree over all pairs
  /// Minimum codegree over pairs lying in some edge; absent without edges.
  std::optional<std::size_t> delta2_star;
  std::vector<std::size_t> vertex_degree;
  /// Row-major n x n; diagonal is 0.
  std::vector<std::size_t> pair_codegree;
};

inline DegreeStats degree_stats(const Hypergraph3& h) {
  const std::size_t n = h.n();
  DegreeStats s;
  s.vertex_degree.resize(n);
  s.pair_codegree.assign(n * n, 0);
  s.delta1 = n ? std::numeric_limits<std::size_t>::max() : 0;
  s.delta2 = n >= 2 ? std::numeric_limits<std::size_t>::max() : 0;
  for (Vertex v = 0; v < n; ++v) {
    s.vertex_degree[v] = h.degree(v);
    s.delta1 = std::min(s.delta1, h.degree(v));
  }
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v) {
      if (u == v) continue;
      const std::size_t c = h.codegree(u, v);
      s.pair_codegree[u * n + v] = c;
      if (u < v) {
        s.delta2 = std::min(s.delta2, c);
        if (c > 0) s.delta2_star = std::min(s.delta2_star.value_or(c), c);
      }
    }
  return s;
}

struct BetaFilter {
  Hypergraph3 filtered;           ///< H_beta
  std::vector<Pair> low_pairs;    ///< B_beta: u < v, codegree < beta*n
  std::vector<Pair> relevant;     ///< pairs (u < v) inside an H_beta edge
};

/// H_beta keeps the edges all of whose three pairs have codegree >= beta*n.
inline BetaFilter filter_beta(const Hypergraph3& h, double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) throw Error("beta must lie in (0,1]");
  const std::size_t n = h.n();
  auto low = [&](Vertex u, Vertex v) {
    return below_threshold(static_cast<double>(h.codegree(u, v)), beta, static_cast<double>(n));
  };
  BetaFilter out;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (low(u, v)) out.low_pairs.emplace_back(u, v);
  std::vector<Triple> kept;
  for (const Triple& t : h.edges())
    if (!low(t[0], t[1]) && !low(t[0], t[2]) && !low(t[1], t[2])) kept.push_back(t);
  out.filtered = Hypergraph3::from_triples(n, kept);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (out.filtered.codegree(u, v) > 0) out.relevant.emplace_back(u, v);
  return out;
}

/// Simple undirected graph with bitset adjacency.
class Graph2 {
 public:
  Graph2() = default;
  explicit Graph2(std::size_t n) : n_(n), adj_(n, VertexSet(n)) {}

  std::size_t n() const { return n_; }
  void add_edge(Vertex a, Vertex b) {
    if (a == b || adj_[a].contains(b)) return;
    adj_[a].insert(b);
    adj_[b].insert(a);
    ++m_;
  }
  bool has_edge(Vertex a, Vertex b) const { return adj_[a].contains(b); }
  const VertexSet& neighbors(Vertex v) const { return adj_[v]; }
  std::size_t degree(Vertex v) const { return adj_[v].size(); }
  std::size_t num_edges() const { return m_; }
  std::vector<Pair> edge_list() const {
    std::vector<Pair> out;
    for (Vertex a = 0; a < n_; ++a)
      adj_[a].for_each([&](Vertex b) {
        if (a < b) out.emplace_back(a, b);
      });
    return out;
  }

 private:
  std::size_t n_ = 0;
  std::size_t m_ = 0;
  std::vector<VertexSet> adj_;
};

/// Link graph of v: xy is an edge iff {x,y,v} is an edge. Vertex v itself
/// stays in the universe as an isolated vertex so ids are unchanged.
inline Graph2 link_graph(const Hypergraph3& h, Vertex v) {
  if (v >= h.n()) throw Error("vertex out of range");
  Graph2 g(h.n());
  for (Vertex x = 0; x < h.n(); ++x) {
    if (x == v) continue;
    bits::for_each(h.neighbors(v, x), [&](Vertex y) {
      if (x < y) g.add_edge(x, y);
    });
  }
  return g;
}

/// L_{beta,v}: link graph of v in H_beta.
inline Graph2 link_graph(const Hypergraph3& h, Vertex v, double beta) {
  return link_graph(filter_beta(h, beta).filtered, v);
}

/// The hypergraph (H - U)_beta as a view over H, without copying edges.
///
/// `alive` is V(H) \ U. beta is applied relative to m = |alive|, the order
/// of H - U. beta == 0 gives the plain vertex-deleted view H - U.
class MaskedView {
 public:
  MaskedView(const Hypergraph3& h, VertexSet alive, double beta = 0.0)
      : h_(&h), alive_(std::move(alive)), beta_(beta), m_(alive_.size()) {
    const std::size_t n = h.n();
    codeg_.assign(n * n, 0);
    good_.assign(n, VertexSet(n));
    for (Vertex u = 0; u < n; ++u) {
      if (!alive_.contains(u)) continue;
      for (Vertex v = u + 1; v < n; ++v) {
        if (!alive_.contains(v)) continue;
        const auto c = static_cast<std::uint32_t>(bits::count_and(h.neighbors(u, v), alive_.bits()));
        codeg_[u * n + v] = codeg_[v * n + u] = c;
        if (c > 0 && !below_threshold(c, beta_, static_cast<double>(m_))) {
          good_[u].insert(v);
          good_[v].insert(u);
        }
      }
    }
  }

  const Hypergraph3& base() const { return *h_; }
  std::size_t n() const { return h_->n(); }
  std::size_t order() const { return m_; }
  double beta() const { return beta_; }
  const VertexSet& alive() const { return alive_; }

  /// Codegree in H - U (before beta filtering).
  std::size_t masked_codegree(Vertex u, Vertex v) const { return codeg_[u * h_->n() + v]; }

  /// True iff {u,v} passes the codegree threshold in H - U.
  bool pair_ok(Vertex u, Vertex v) const { return good_[u].contains(v); }

  /// Co-neighbourhood of {u,v} in (H - U)_beta.
  VertexSet neighbors(Vertex u, Vertex v) const {
    VertexSet s(h_->n());
    if (!pair_ok(u, v)) return s;
    auto out = s.mutable_bits();
    const Bits nb = h_->neighbors(u, v);
    const Bits a = alive_.bits(), gu = good_[u].bits(), gv = good_[v].bits();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = nb[i] & a[i] & gu[i] & gv[i];
    return s;
  }

  bool has_edge(Vertex a, Vertex b, Vertex c) const {
    return h_->has_edge(a, b, c) && pair_ok(a, b) && pair_ok(a, c) && pair_ok(b, c);
  }

  /// Pair lies in at least one edge of the view.
  bool relevant(Vertex u, Vertex v) const { return !neighbors(u, v).empty(); }

 private:
  const Hypergraph3* h_;
  VertexSet alive_;
  double beta_;
  std::size_t m_;
  std::vector<std::uint32_t> codeg_;
  std::vector<VertexSet> good_;
};

}  // namespace thc
