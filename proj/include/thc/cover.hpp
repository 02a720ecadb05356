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

// Covering almost all vertices with few vertex-disjoint tight paths.
//
// Two backends:
//   regularity  equitable partition tested for weak regularity, reduced
//               graph, greedy matching of cluster triples, then path packing
//               inside each matched triple;
//   greedy      grow paths from the lowest-ranked vertex, extend at both
//               ends, rotate a path end when stuck, splice leftovers into
//               gaps and join paths whose ends fit.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "thc/hypergraph.hpp"
#include "thc/parallel.hpp"
#include "thc/rng.hpp"
#include "thc/tight.hpp"

namespace thc::cover {

using ClusterTriple = std::array<std::size_t, 3>;

struct RegularityPartition {
  std::vector<std::vector<Vertex>> clusters;
  double epsilon = 0.0;
  std::vector<ClusterTriple> irregular_triples;
  /// |irregular_triples| <= epsilon t^3.
  bool certified = false;
  std::size_t refinements = 0;

  std::size_t t() const { return clusters.size(); }
};

/// e_H(A,B,C) for pairwise disjoint A, B, C.
inline std::uint64_t crossing_edges(const Hypergraph3& h, std::span<const Vertex> a, std::span<const Vertex> b,
                                    const VertexSet& c) {
  std::uint64_t e = 0;
  for (Vertex x : a)
    for (Vertex y : b) e += bits::count_and(h.neighbors(x, y), c.bits());
  return e;
}

namespace detail {

/// Splits `order` into t consecutive chunks whose sizes differ by at most 1.
inline std::vector<std::vector<Vertex>> equitable_chunks(std::span<const Vertex> order, std::size_t t) {
  std::vector<std::vector<Vertex>> out(t);
  const std::size_t n = order.size(), q = n / t, r = n % t;
  std::size_t at = 0;
  for (std::size_t i = 0; i < t; ++i) {
    const std::size_t len = q + (i < r ? 1 : 0);
    out[i].assign(order.begin() + static_cast<std::ptrdiff_t>(at),
                  order.begin() + static_cast<std::ptrdiff_t>(at + len));
    std::sort(out[i].begin(), out[i].end());
    at += len;
  }
  return out;
}

struct TripleTest {
  bool regular = true;
  /// Sub-clusters of the first violating witness.
  std::array<std::vector<Vertex>, 3> witness;
};

/// Looks for X' in V_i, Y' in V_j, Z' in V_k with
/// |e(X',Y',Z') - dens |X'||Y'||Z'|| > eps m^3, m = |V_i|+|V_j|+|V_k|.
/// Witness sizes are uniform in [1, |part|], members uniform.
inline TripleTest test_triple(const Hypergraph3& h, const std::array<const std::vector<Vertex>*, 3>& parts,
                              double eps, std::size_t witnesses, Rng& rng) {
  TripleTest out;
  const std::size_t n = h.n();
  const auto& [p0, p1, p2] = parts;
  if (p0->empty() || p1->empty() || p2->empty()) return out;
  const VertexSet all2 = VertexSet::of(n, *p2);
  const double dens = static_cast<double>(crossing_edges(h, *p0, *p1, all2)) /
                      (static_cast<double>(p0->size()) * static_cast<double>(p1->size()) *
                       static_cast<double>(p2->size()));
  const double m = static_cast<double>(p0->size() + p1->size() + p2->size());
  const double slack = eps * m * m * m;
  std::array<std::vector<Vertex>, 3> sub;
  for (std::size_t w = 0; w < witnesses; ++w) {
    for (int s = 0; s < 3; ++s) {
      sub[s] = *parts[s];
      const std::size_t k = 1 + rng.below(sub[s].size());
      rng.partial_shuffle(std::span<Vertex>(sub[s]), k);
      sub[s].resize(k);
    }
    const double e = static_cast<double>(crossing_edges(h, sub[0], sub[1], VertexSet::of(n, sub[2])));
    const double expect = dens * static_cast<double>(sub[0].size() * sub[1].size() * sub[2].size());
    if (std::abs(e - expect) > slack) {
      out.regular = false;
      out.witness = sub;
      return out;
    }
  }
  return out;
}

inline std::vector<ClusterTriple> all_triples(std::size_t t) {
  std::vector<ClusterTriple> out;
  for (std::size_t i = 0; i < t; ++i)
    for (std::size_t j = i + 1; j < t; ++j)
      for (std::size_t k = j + 1; k < t; ++k) out.push_back({i, j, k});
  return out;
}

}  // namespace detail

struct PartitionParams {
  double epsilon = 0.1;
  std::size_t t0 = 4;
  std::size_t t_cap = 16;
  std::uint64_t seed = 0;
  std::size_t witnesses = 200;
  std::size_t threads = 1;
};

/// Equitable partition of *restrict_to (all of V if null) into t clusters with
/// t0 <= t <= t_cap. Too many irregular triples double t (capped at t_cap),
/// re-chunking so that each failing witness set stays together; the last
/// partition tried is returned, certified or not.
inline RegularityPartition weak_regularity_partition(const Hypergraph3& h, const PartitionParams& p,
                                                     const VertexSet* restrict_to = nullptr) {
  std::vector<Vertex> order;
  for (Vertex v = 0; v < h.n(); ++v)
    if (!restrict_to || restrict_to->contains(v)) order.push_back(v);
  if (p.t0 == 0 || p.t0 > p.t_cap) throw Error("need 1 <= t0 <= T_cap");
  if (order.size() < p.t_cap) throw Error("fewer vertices than T_cap clusters");
  const std::uint64_t base = substream_seed(p.seed, streams::kPartition);
  Rng shuffle_rng(base, 0);
  shuffle_rng.shuffle(std::span<Vertex>(order));

  RegularityPartition part;
  part.epsilon = p.epsilon;
  std::size_t t = p.t0;
  for (std::size_t round = 0;; ++round) {
    part.clusters = detail::equitable_chunks(order, t);
    const auto triples = detail::all_triples(t);
    std::vector<detail::TripleTest> tests(triples.size());
    parallel_for(triples.size(), p.threads, [&](std::size_t i) {
      Rng rng(base, (round + 1) * 1'000'003 + i);
      const auto& [a, b, c] = triples[i];
      tests[i] = detail::test_triple(h, {&part.clusters[a], &part.clusters[b], &part.clusters[c]}, p.epsilon,
                                     p.witnesses, rng);
    });
    part.irregular_triples.clear();
    for (std::size_t i = 0; i < triples.size(); ++i)
      if (!tests[i].regular) part.irregular_triples.push_back(triples[i]);
    const double td = static_cast<double>(t);
    part.certified = static_cast<double>(part.irregular_triples.size()) <= p.epsilon * td * td * td;
    part.refinements = round;
    if (part.certified || t >= p.t_cap) return part;

    // Refine: within each cluster, vertices of failing witnesses first, then
    // chunk into the larger number of clusters.
    VertexSet flagged(h.n());
    for (const auto& tt : tests)
      if (!tt.regular)
        for (const auto& s : tt.witness)
          for (Vertex v : s) flagged.insert(v);
    order.clear();
    for (const auto& cl : part.clusters) {
      for (Vertex v : cl)
        if (flagged.contains(v)) order.push_back(v);
      for (Vertex v : cl)
        if (!flagged.contains(v)) order.push_back(v);
    }
    t = std::min(p.t_cap, 2 * t);
  }
}

struct ReducedGraph {
  std::size_t t = 0;
  double d_prime = 0.0;
  std::vector<ClusterTriple> edges;  ///< ascending
  std::vector<double> density;       ///< crossing density per edge
  Hypergraph3 as_hypergraph() const {
    std::vector<Triple> ts;
    for (const auto& e : edges)
      ts.push_back({static_cast<Vertex>(e[0]), static_cast<Vertex>(e[1]), static_cast<Vertex>(e[2])});
    return Hypergraph3::from_triples(t, ts);
  }
};

/// Triples i<j<k that passed the regularity test with crossing density at
/// least d_prime.
inline ReducedGraph reduced_graph(const Hypergraph3& h, const RegularityPartition& part, double d_prime) {
  ReducedGraph r;
  r.t = part.t();
  r.d_prime = d_prime;
  std::vector<VertexSet> sets;
  for (const auto& cl : part.clusters) sets.push_back(VertexSet::of(h.n(), cl));
  for (const ClusterTriple& tr : detail::all_triples(r.t)) {
    if (std::binary_search(part.irregular_triples.begin(), part.irregular_triples.end(), tr)) continue;
    const auto& a = part.clusters[tr[0]];
    const auto& b = part.clusters[tr[1]];
    const auto& c = part.clusters[tr[2]];
    if (a.empty() || b.empty() || c.empty()) continue;
    const double dens = static_cast<double>(crossing_edges(h, a, b, sets[tr[2]])) /
                        (static_cast<double>(a.size()) * static_cast<double>(b.size()) * static_cast<double>(c.size()));
    if (below_threshold(dens, 1.0, d_prime)) continue;
    r.edges.push_back(tr);
    r.density.push_back(dens);
  }
  return r;
}

struct Matching {
  std::vector<Triple> edges;
  std::vector<Vertex> leftover;
};

/// Greedy maximal matching over edges in ascending lexicographic order. The
/// leftover spans no edge.
inline Matching near_perfect_matching(const Hypergraph3& r) {
  Matching m;
  VertexSet used(r.n());
  for (const Triple& e : r.edges()) {
    if (used.contains(e[0]) || used.contains(e[1]) || used.contains(e[2])) continue;
    m.edges.push_back(e);
    for (Vertex v : e) used.insert(v);
  }
  used.complement().for_each([&](Vertex v) { m.leftover.push_back(v); });
  return m;
}

struct Packing {
  std::vector<TightPath> paths;
  std::size_t covered = 0;
  double coverage = 0.0;  ///< covered / (|V_i|+|V_j|+|V_k|)
  std::size_t min_length = 0;
};

/// Packs tight paths into the tripartite graph H[V_i,V_j,V_k], the t-th
/// vertex of every path taken from part t mod 3. Paths shorter than
/// max(3, eps (d - eps) m / 3) are dissolved and their starting pair is not
/// retried; packing stops when some part has fewer unused vertices than that
/// or no path can start.
inline Packing pack_paths_regular_triple(const Hypergraph3& h, const std::array<std::vector<Vertex>, 3>& parts,
                                         double eps, double d) {
  const std::size_t n = h.n();
  Packing out;
  const std::size_t m = parts[0].size() + parts[1].size() + parts[2].size();
  const double lmin = std::max(3.0, eps * (d - eps) * static_cast<double>(m) / 3.0);
  out.min_length = static_cast<std::size_t>(std::ceil(lmin - 1e-9));
  if (m == 0) return out;
  std::array<VertexSet, 3> unused;
  for (int s = 0; s < 3; ++s) unused[s] = VertexSet::of(n, parts[s]);
  std::vector<Pair> dead;
  auto is_dead = [&](Vertex a, Vertex b) { return std::find(dead.begin(), dead.end(), Pair{a, b}) != dead.end(); };

  while (true) {
    if (std::any_of(unused.begin(), unused.end(),
                    [&](const VertexSet& u) { return static_cast<double>(u.size()) + 1e-9 < lmin; }))
      break;
    std::optional<std::vector<Vertex>> path;
    unused[0].for_each([&](Vertex a) {
      if (path) return;
      unused[1].for_each([&](Vertex b) {
        if (path || is_dead(a, b)) return;
        VertexSet c(n, h.neighbors(a, b));
        c &= unused[2];
        if (!c.empty()) path = std::vector<Vertex>{a, b, static_cast<Vertex>(c.first())};
      });
    });
    if (!path) break;
    auto& p = *path;
    for (int s = 0; s < 3; ++s) unused[s].erase(p[s]);
    while (true) {
      const std::size_t s = p.size() % 3;
      VertexSet c(n, h.neighbors(p[p.size() - 2], p.back()));
      c &= unused[s];
      if (c.empty()) break;
      const auto v = static_cast<Vertex>(c.first());
      p.push_back(v);
      unused[s].erase(v);
    }
    if (static_cast<double>(p.size()) + 1e-9 < lmin) {
      dead.emplace_back(p[0], p[1]);
      for (std::size_t i = 0; i < p.size(); ++i) unused[i % 3].insert(p[i]);
      continue;
    }
    out.covered += p.size();
    out.paths.push_back(TightPath{std::move(p)});
  }
  out.coverage = static_cast<double>(out.covered) / static_cast<double>(m);
  return out;
}

enum class Backend { kGreedy, kRegularity };

inline Backend parse_backend(const std::string& s) {
  if (s == "greedy") return Backend::kGreedy;
  if (s == "regularity") return Backend::kRegularity;
  throw Error("unknown cover backend '" + s + "'");
}
inline std::string backend_name(Backend b) { return b == Backend::kGreedy ? "greedy" : "regularity"; }

struct CoverParams {
  Backend backend = Backend::kGreedy;
  PartitionParams partition{};
  /// Reduced-graph density threshold; <= 0 means d/2.
  double d_prime = 0.0;
  /// Greedy restarts after the first (identity order) run.
  std::size_t restarts = 8;
  std::uint64_t seed = 0;
};

struct CoverResult {
  std::vector<TightPath> paths;
  std::size_t covered = 0;
  std::size_t order = 0;  ///< number of vertices to be covered
  Backend backend = Backend::kGreedy;
  /// Regularity backend: whether the partition was certified.
  std::optional<bool> certified;
  /// covered < (1 - zeta) * order.
  bool shortfall = false;

  std::size_t count() const { return paths.size(); }
  double coverage() const { return order ? static_cast<double>(covered) / static_cast<double>(order) : 0.0; }
};

namespace detail {

/// Vertex of S with the smallest rank.
inline std::optional<Vertex> min_rank(const VertexSet& s, const std::vector<std::uint32_t>& rank) {
  std::optional<Vertex> best;
  s.for_each([&](Vertex v) {
    if (!best || rank[v] < rank[*best]) best = v;
  });
  return best;
}

class GreedyRun {
 public:
  GreedyRun(const Hypergraph3& h, const VertexSet& allowed, std::vector<std::uint32_t> rank)
      : h_(h), unused_(allowed), rank_(std::move(rank)) {}

  std::vector<std::vector<Vertex>> run() {
    VertexSet stuck(h_.n());
    while (true) {
      VertexSet cand = unused_;
      cand.subtract(stuck);
      const auto v = min_rank(cand, rank_);
      if (!v) break;
      auto p = start_at(*v);
      if (!p) {
        stuck.insert(*v);
        continue;
      }
      grow(*p);
      paths_.push_back(std::move(*p));
    }
    join_paths();
    insert_leftovers();
    join_paths();
    return std::move(paths_);
  }

 private:
  std::optional<std::vector<Vertex>> start_at(Vertex v) {
    std::vector<Vertex> others;
    unused_.for_each([&](Vertex u) {
      if (u != v) others.push_back(u);
    });
    std::sort(others.begin(), others.end(), [&](Vertex a, Vertex b) { return rank_[a] < rank_[b]; });
    for (Vertex u : others) {
      VertexSet w(h_.n(), h_.neighbors(v, u));
      w &= unused_;
      if (const auto x = min_rank(w, rank_)) {
        for (Vertex y : {v, u, *x}) unused_.erase(y);
        return std::vector<Vertex>{v, u, *x};
      }
    }
    return std::nullopt;
  }

  std::optional<Vertex> extension(Vertex a, Vertex b) const {
    VertexSet s(h_.n(), h_.neighbors(a, b));
    s &= unused_;
    return min_rank(s, rank_);
  }

  bool extend_back(std::vector<Vertex>& p) {
    const auto x = extension(p[p.size() - 2], p.back());
    if (!x) return false;
    p.push_back(*x);
    unused_.erase(*x);
    return true;
  }

  /// p = p_0..p_k. If {p_{i-1},p_i,p_k} and {p_i,p_k,p_{k-1}} are edges,
  /// reversing p_{i+1..k} keeps the path tight with new end (p_{i+2},p_{i+1}).
  /// Only rotations after which the path extends are taken.
  bool rotate_back(std::vector<Vertex>& p) {
    const std::size_t k = p.size() - 1;
    if (k < 4) return false;
    for (std::size_t i = k - 2; i >= 1; --i) {
      if (h_.has_edge(p[i - 1], p[i], p[k]) && h_.has_edge(p[i], p[k], p[k - 1]) &&
          extension(p[i + 2], p[i + 1])) {
        std::reverse(p.begin() + static_cast<std::ptrdiff_t>(i + 1), p.end());
        return true;
      }
      if (i == 1) break;
    }
    return false;
  }

  void grow(std::vector<Vertex>& p) {
    while (true) {
      if (extend_back(p)) continue;
      std::reverse(p.begin(), p.end());
      if (extend_back(p)) continue;
      if (rotate_back(p) && extend_back(p)) continue;
      std::reverse(p.begin(), p.end());
      if (rotate_back(p) && extend_back(p)) continue;
      return;
    }
  }

  /// Joins two paths when an end pair of one continues into an end pair of
  /// the other, in any orientation.
  void join_paths() {
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t a = 0; a < paths_.size() && !changed; ++a)
        for (std::size_t b = 0; b < paths_.size() && !changed; ++b) {
          if (a == b) continue;
          for (int o = 0; o < 4 && !changed; ++o) {
            std::vector<Vertex> pa = paths_[a], pb = paths_[b];
            if (o & 1) std::reverse(pa.begin(), pa.end());
            if (o & 2) std::reverse(pb.begin(), pb.end());
            const std::size_t k = pa.size();
            if (h_.has_edge(pa[k - 2], pa[k - 1], pb[0]) && h_.has_edge(pa[k - 1], pb[0], pb[1])) {
              pa.insert(pa.end(), pb.begin(), pb.end());
              paths_[a] = std::move(pa);
              paths_.erase(paths_.begin() + static_cast<std::ptrdiff_t>(b));
              changed = true;
            }
          }
        }
    }
  }

  /// Places an uncovered u between p_{j-1} and p_j when every new triple
  /// through u is an edge. Repeats while something moves.
  void insert_leftovers() {
    for (bool changed = true; changed;) {
      changed = false;
      std::vector<Vertex> left = unused_.to_vector();
      std::sort(left.begin(), left.end(), [&](Vertex a, Vertex b) { return rank_[a] < rank_[b]; });
      for (Vertex u : left)
        for (auto& p : paths_) {
          if (try_insert(p, u)) {
            unused_.erase(u);
            changed = true;
            break;
          }
        }
    }
  }

  bool try_insert(std::vector<Vertex>& p, Vertex u) const {
    const std::size_t k = p.size();
    for (std::size_t j = 0; j <= k; ++j) {
      // New sequence: p_0..p_{j-1}, u, p_j..p_{k-1}.
      auto at = [&](std::ptrdiff_t i) -> std::optional<Vertex> {
        const std::ptrdiff_t jj = static_cast<std::ptrdiff_t>(j);
        if (i == jj) return u;
        const std::ptrdiff_t src = i < jj ? i : i - 1;
        if (src < 0 || src >= static_cast<std::ptrdiff_t>(k)) return std::nullopt;
        return p[static_cast<std::size_t>(src)];
      };
      bool ok = true;
      for (std::ptrdiff_t s = static_cast<std::ptrdiff_t>(j) - 2; s <= static_cast<std::ptrdiff_t>(j) && ok; ++s) {
        const auto a = at(s), b = at(s + 1), c = at(s + 2);
        if (a && b && c && !h_.has_edge(*a, *b, *c)) ok = false;
      }
      if (ok) {
        p.insert(p.begin() + static_cast<std::ptrdiff_t>(j), u);
        return true;
      }
    }
    return false;
  }

  const Hypergraph3& h_;
  VertexSet unused_;
  std::vector<std::uint32_t> rank_;
  std::vector<std::vector<Vertex>> paths_;
};

inline std::size_t covered_by(const std::vector<std::vector<Vertex>>& ps) {
  std::size_t c = 0;
  for (const auto& p : ps) c += p.size();
  return c;
}

}  // namespace detail

/// Greedy backend. Run 0 ranks vertices by id; each restart ranks them by a
/// seeded shuffle. Keeps the run with most vertices covered, then fewest
/// paths; stops early on a single spanning path.
inline std::vector<TightPath> greedy_cover(const Hypergraph3& h, const VertexSet& allowed, std::size_t restarts,
                                           std::uint64_t seed) {
  const std::size_t n = h.n();
  std::vector<std::vector<Vertex>> best;
  bool have = false;
  for (std::size_t run = 0; run <= restarts; ++run) {
    std::vector<std::uint32_t> rank(n);
    std::iota(rank.begin(), rank.end(), 0U);
    if (run > 0) {
      Rng rng(substream_seed(seed, streams::kCover), run);
      rng.shuffle(std::span<std::uint32_t>(rank));
    }
    auto paths = detail::GreedyRun(h, allowed, std::move(rank)).run();
    const std::size_t c = detail::covered_by(paths), bc = detail::covered_by(best);
    if (!have || c > bc || (c == bc && paths.size() < best.size())) {
      best = std::move(paths);
      have = true;
    }
    if (best.size() <= 1 && detail::covered_by(best) == allowed.size()) break;
  }
  std::vector<TightPath> out;
  for (auto& p : best)
    if (p.size() >= 3) out.push_back(TightPath{std::move(p)});
  return out;
}

/// Vertex-disjoint tight paths inside H[allowed]; reports a shortfall when
/// fewer than (1 - zeta)|allowed| vertices are covered.
inline CoverResult cover_with_paths(const Hypergraph3& h, const VertexSet& allowed, double d, double zeta,
                                    const CoverParams& params = {}) {
  CoverResult res;
  res.backend = params.backend;
  res.order = allowed.size();
  if (params.backend == Backend::kGreedy) {
    res.paths = greedy_cover(h, allowed, params.restarts, params.seed);
  } else {
    PartitionParams pp = params.partition;
    pp.seed = params.seed;
    pp.t_cap = std::min(pp.t_cap, res.order);
    pp.t0 = std::min(pp.t0, pp.t_cap);
    if (pp.t0 >= 3) {
      const RegularityPartition part = weak_regularity_partition(h, pp, &allowed);
      res.certified = part.certified;
      const double dp = params.d_prime > 0 ? params.d_prime : d / 2;
      const ReducedGraph rg = reduced_graph(h, part, dp);
      const Matching m = near_perfect_matching(rg.as_hypergraph());
      std::vector<Packing> packs(m.edges.size());
      parallel_for(m.edges.size(), pp.threads, [&](std::size_t i) {
        const Triple& e = m.edges[i];
        packs[i] = pack_paths_regular_triple(
            h, {part.clusters[e[0]], part.clusters[e[1]], part.clusters[e[2]]}, pp.epsilon, dp);
      });
      for (auto& pk : packs)
        for (auto& p : pk.paths) res.paths.push_back(std::move(p));
    } else {
      res.certified = false;
    }
  }
  for (const auto& p : res.paths) res.covered += p.size();
  res.shortfall = below_threshold(static_cast<double>(res.covered), 1.0 - zeta, static_cast<double>(res.order));
  return res;
}

inline CoverResult cover_with_paths(const Hypergraph3& h, double d, double zeta, const CoverParams& params = {}) {
  return cover_with_paths(h, VertexSet::full(h.n()), d, zeta, params);
}

}  // namespace thc::cover
