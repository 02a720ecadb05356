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

// Absorbers and absorbing paths.
//
// An ordered quadruple (x,y,z,w) of distinct vertices is a (beta,v)-absorber
// when v is outside it and
//
//   {x,y,z}, {y,z,w}, {v,x,y}, {v,y,z}, {v,z,w}  are edges of H,
//   {x,y,z}, {y,z,w}                               are edges of H_beta.
//
// On a tight path containing x,y,z,w consecutively, the segment can then be
// rewritten to x,y,v,z,w without touching anything else.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thc/connect.hpp"
#include "thc/hypergraph.hpp"
#include "thc/parallel.hpp"
#include "thc/rng.hpp"
#include "thc/tight.hpp"

namespace thc::absorb {

using Quad = std::array<Vertex, 4>;

struct Absorber {
  Vertex x = 0, y = 0, z = 0, w = 0;
  VertexSet served;  ///< {v : (x,y,z,w) is a (beta,v)-absorber}

  Quad quad() const { return {x, y, z, w}; }
};

struct AbsorberFamily {
  std::size_t n = 0;
  double beta = 0.0;
  std::vector<Absorber> members;
  /// per_vertex[v]: indices of members serving v, ascending.
  std::vector<std::vector<std::size_t>> per_vertex;
  /// used[i]: member i already rewritten.
  std::vector<bool> used;
  /// Size of the raw sample before pruning.
  std::size_t sampled = 0;
  /// min |per_vertex[v]| over v outside the members.
  std::size_t min_coverage = 0;
  std::size_t retries_used = 0;

  std::size_t size() const { return members.size(); }
  VertexSet vertices() const {
    VertexSet s(n);
    for (const Absorber& a : members)
      for (Vertex v : a.quad()) s.insert(v);
    return s;
  }
  /// Recomputes per_vertex, used and min_coverage from members.
  void reindex() {
    per_vertex.assign(n, {});
    used.assign(members.size(), false);
    for (std::size_t i = 0; i < members.size(); ++i)
      members[i].served.for_each([&](Vertex v) { per_vertex[v].push_back(i); });
    const VertexSet own = vertices();
    min_coverage = std::numeric_limits<std::size_t>::max();
    bool any = false;
    for (Vertex v = 0; v < n; ++v) {
      if (own.contains(v)) continue;
      any = true;
      min_coverage = std::min(min_coverage, per_vertex[v].size());
    }
    if (!any) min_coverage = 0;
  }
};

inline bool distinct(const Quad& q) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (q[i] == q[j]) return false;
  return true;
}

/// {v : quad is a (beta,v)-absorber}, given H_beta as a view. Empty if the
/// quadruple itself fails distinctness or the H_beta conditions.
inline VertexSet served_set(const Hypergraph3& h, const MaskedView& hb, const Quad& q) {
  const auto [x, y, z, w] = q;
  VertexSet s(h.n());
  if (!distinct(q)) return s;
  if (!hb.has_edge(x, y, z) || !hb.has_edge(y, z, w)) return s;
  s = VertexSet(h.n(), h.neighbors(x, y));
  s &= h.neighbors(y, z);
  s &= h.neighbors(z, w);
  s.erase(x);
  s.erase(w);
  return s;
}

inline MaskedView beta_view(const Hypergraph3& h, double beta) {
  return MaskedView(h, VertexSet::full(h.n()), beta);
}

inline bool absorber_check(const Hypergraph3& h, double beta, Vertex v, const Quad& q) {
  const auto [x, y, z, w] = q;
  if (!distinct(q) || v == x || v == y || v == z || v == w) return false;
  for (Vertex u : {v, x, y, z, w})
    if (u >= h.n()) return false;
  if (!h.has_edge(x, y, z) || !h.has_edge(y, z, w)) return false;
  if (!h.has_edge(v, x, y) || !h.has_edge(v, y, z) || !h.has_edge(v, z, w)) return false;
  const MaskedView hb = beta_view(h, beta);
  return hb.has_edge(x, y, z) && hb.has_edge(y, z, w);
}

/// Labelled homomorphisms of the path on four vertices into g: the sum over
/// ordered edges (b,c) of deg(b) deg(c).
inline std::uint64_t p4_homomorphisms(const Graph2& g) {
  std::uint64_t total = 0;
  for (Vertex b = 0; b < g.n(); ++b)
    g.neighbors(b).for_each([&](Vertex c) { total += static_cast<std::uint64_t>(g.degree(b)) * g.degree(c); });
  return total;
}

/// |V|^4 (2e/|V|^2)^3, the lower bound on p4_homomorphisms that holds for
/// every graph.
inline double p4_lower_bound(const Graph2& g) {
  const double m = static_cast<double>(g.n());
  if (m == 0) return 0.0;
  const double t = 2.0 * static_cast<double>(g.num_edges()) / (m * m);
  return m * m * m * m * t * t * t;
}

struct AbsorberCount {
  std::uint64_t count = 0;
  bool capped = false;  ///< count stopped at the cap; the true value is >= count
};

/// Number of (beta,v)-absorbers over ordered quadruples, lexicographic in
/// (x,y,z,w). Only middle pairs {y,z} passing the H_beta codegree threshold
/// contribute; for each such pair the admissible x and w are intersections
/// of co-neighbourhoods, so the total is exact in O(n^3/64) word operations.
inline AbsorberCount count_absorbers(const Hypergraph3& h, double beta, Vertex v,
                                     std::optional<std::uint64_t> cap = std::nullopt,
                                     std::size_t threads = 1) {
  const std::size_t n = h.n();
  if (v >= n) throw Error("vertex out of range");
  const MaskedView hb = beta_view(h, beta);
  auto for_y = [&](Vertex y) {
    std::uint64_t total = 0;
    if (y == v) return total;
    for (Vertex z = 0; z < n; ++z) {
      if (z == y || z == v || !hb.pair_ok(y, z) || !h.has_edge(v, y, z)) continue;
      const VertexSet mid = hb.neighbors(y, z);
      VertexSet xs = mid, ws = mid;
      xs &= h.neighbors(v, y);
      ws &= h.neighbors(v, z);
      for (VertexSet* s : {&xs, &ws}) s->erase(v);
      const std::uint64_t both = bits::count_and(xs.bits(), ws.bits());
      total += static_cast<std::uint64_t>(xs.size()) * ws.size() - both;
      if (cap && total >= *cap) break;
    }
    return total;
  };
  AbsorberCount out;
  if (cap) {
    for (Vertex y = 0; y < n && !out.capped; ++y) {
      out.count += for_y(y);
      if (out.count >= *cap) {
        out.count = *cap;
        out.capped = true;
      }
    }
    return out;
  }
  std::vector<std::uint64_t> part(n, 0);
  parallel_for(n, threads, [&](std::size_t y) { part[y] = for_y(static_cast<Vertex>(y)); });
  for (std::uint64_t c : part) out.count += c;
  return out;
}

struct SampleOptions {
  std::size_t max_retries = 3;
  /// Minimum of |per_vertex[v]| that counts as success; 0 accepts any family.
  std::size_t required_coverage = 1;
  /// Upper bound on gamma_prob * n (the expected raw sample size).
  double family_cap = std::numeric_limits<double>::infinity();
};

/// Random vertex-disjoint absorber family. The raw sample has
/// Binomial(n^4, gamma_prob / n^3) members, each a uniform element of V^4
/// drawn from its own substream. Quadruples serving no vertex are dropped;
/// of two intersecting members the earlier one is kept.
inline AbsorberFamily sample_family(const Hypergraph3& h, double beta, double gamma_prob,
                                    std::uint64_t seed, const SampleOptions& opt = {}) {
  const std::size_t n = h.n();
  const double nd = static_cast<double>(n);
  if (!(gamma_prob >= 0.0)) throw Error("gamma_prob must be non-negative");
  if (gamma_prob * nd > opt.family_cap) throw Error("gamma_prob * n exceeds the family-size cap");
  const MaskedView hb = beta_view(h, beta);
  for (std::size_t attempt = 0;; ++attempt) {
    AbsorberFamily fam;
    fam.n = n;
    fam.beta = beta;
    fam.retries_used = attempt;
    const std::uint64_t base = substream_seed(seed, streams::kFamily + (attempt << 8));
    if (n >= 5 && gamma_prob > 0.0) {
      Rng count_rng(base, 0);
      const double trials = nd * nd * nd * nd;
      fam.sampled = count_rng.binomial(trials, std::min(1.0, gamma_prob / (nd * nd * nd)));
    }
    VertexSet taken(n);
    for (std::size_t i = 0; i < fam.sampled; ++i) {
      Rng r(base, i + 1);
      Quad q;
      for (Vertex& u : q) u = static_cast<Vertex>(r.below(n));
      VertexSet served = served_set(h, hb, q);
      if (served.empty()) continue;
      if (std::any_of(q.begin(), q.end(), [&](Vertex u) { return taken.contains(u); })) continue;
      for (Vertex u : q) taken.insert(u);
      fam.members.push_back({q[0], q[1], q[2], q[3], std::move(served)});
    }
    fam.reindex();
    if (fam.min_coverage >= opt.required_coverage) return fam;
    if (attempt >= opt.max_retries)
      throw RetriesExhausted("absorber family: minimum coverage " + std::to_string(fam.min_coverage) + " below " +
                  std::to_string(opt.required_coverage) + " after " + std::to_string(attempt + 1) +
                  " attempts");
  }
}

struct AbsorbingPath {
  std::optional<TightPath> path;
  /// Junctions built so far; on failure, the index of the failing junction.
  std::size_t junctions = 0;
  std::optional<std::size_t> failed_junction;
  std::vector<connect::ConnectReport> reports;
};

/// Strings the members together in order: F_1, C_1, F_2, ..., F_r where C_i
/// is a 10-path from the rear pair (z_i,w_i) of F_i to the front pair
/// (x_{i+1},y_{i+1}) of F_{i+1}. Junction i is built with relevance beta -
/// kappa inside the vertices not yet used by the path nor by any member,
/// plus its four anchors.
inline AbsorbingPath build_absorbing_path(const Hypergraph3& h, const AbsorberFamily& fam, double beta,
                                          double kappa, const connect::CascadeParams& params = {}) {
  const std::size_t n = h.n();
  const std::size_t r = fam.members.size();
  if (r == 0) throw Error("absorbing path needs at least one absorber");
  const VertexSet family_vertices = fam.vertices();
  if (family_vertices.size() != 4 * r) throw Error("absorber family members are not vertex-disjoint");
  if (static_cast<double>(4 * r) > kappa * static_cast<double>(n) * (1 + 1e-9))
    throw Error("absorber family has more than kappa*n vertices");
  const double junction_beta = beta - kappa;
  if (r > 1 && !(junction_beta > 0.0)) throw Error("junction relevance beta - kappa must be positive");

  AbsorbingPath out;
  std::vector<Vertex> seq;
  VertexSet on_path(n);
  auto append = [&](Vertex v) {
    seq.push_back(v);
    on_path.insert(v);
  };
  for (Vertex v : fam.members[0].quad()) append(v);
  for (std::size_t i = 0; i + 1 < r; ++i) {
    const Absorber& a = fam.members[i];
    const Absorber& b = fam.members[i + 1];
    VertexSet forbidden = on_path | family_vertices;
    for (Vertex v : {a.z, a.w, b.x, b.y}) forbidden.erase(v);
    auto rep = connect::connect_detailed(h, junction_beta, {a.z, a.w}, {b.x, b.y}, forbidden, params);
    const bool ok = rep.path.has_value();
    out.reports.push_back(rep);
    if (!ok) {
      out.failed_junction = i;
      return out;
    }
    const auto& c = rep.path->vertices;
    for (std::size_t k = 2; k < 8; ++k) append(c[k]);
    for (Vertex v : b.quad()) append(v);
    ++out.junctions;
  }
  out.path = TightPath{std::move(seq)};
  return out;
}

/// Picks, for each v in U by ascending id, the lowest-index unused member
/// serving v. Returns the member per vertex, or the first vertex without one.
struct Assignment {
  std::vector<std::pair<Vertex, std::size_t>> servers;
  std::optional<Vertex> unserved;
};

inline Assignment assign_servers(const AbsorberFamily& fam, const VertexSet& u) {
  Assignment out;
  std::vector<bool> used = fam.used;
  u.for_each([&](Vertex v) {
    if (out.unserved) return;
    const auto& cands = fam.per_vertex[v];
    const auto it = std::find_if(cands.begin(), cands.end(), [&](std::size_t i) { return !used[i]; });
    if (it == cands.end()) {
      out.unserved = v;
      return;
    }
    used[*it] = true;
    out.servers.emplace_back(v, *it);
  });
  return out;
}

/// Inserts every vertex of U into `seq`, a path or cyclic sequence in which
/// each absorber used appears as a contiguous run x,y,z,w (or w,z,y,x).
/// Marks the consumed members in fam.used. Throws, leaving everything
/// unchanged, when some vertex of U has no unused server.
inline void absorb_into(std::vector<Vertex>& seq, AbsorberFamily& fam, const VertexSet& u, bool cyclic) {
  const Assignment plan = assign_servers(fam, u);
  if (plan.unserved)
    throw Error("vertex " + std::to_string(*plan.unserved) + " has no unused absorber");
  for (const auto& [v, idx] : plan.servers) {
    const Absorber& a = fam.members[idx];
    const std::size_t len = seq.size();
    std::optional<std::size_t> at;
    for (std::size_t i = 0; i < len && !at; ++i) {
      if (!cyclic && i + 3 >= len) break;
      auto s = [&](std::size_t k) { return seq[(i + k) % len]; };
      if (s(0) == a.x && s(1) == a.y && s(2) == a.z && s(3) == a.w) at = (i + 2) % len;
      else if (s(0) == a.w && s(1) == a.z && s(2) == a.y && s(3) == a.x) at = (i + 2) % len;
    }
    if (!at) throw Error("absorber " + std::to_string(idx) + " does not appear in the sequence");
    // Between positions (i+1, i+2) the middle pair is {y,z} in either
    // orientation, so v goes between them.
    seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(*at == 0 ? len : *at), v);
    fam.used[idx] = true;
  }
}

/// A_U: same ends as A, vertex set V(A) + U.
inline TightPath absorb(const Hypergraph3& h, const TightPath& a, AbsorberFamily& fam, const VertexSet& u) {
  for (Vertex v : a.vertices)
    if (u.contains(v)) throw Error("U meets V(A)");
  TightPath out = a;
  absorb_into(out.vertices, fam, u, false);
  if (const auto verdict = validate_tight(h, out); !verdict.valid)
    throw Error("absorption produced an invalid path: " + verdict.reason);
  return out;
}

}  // namespace thc::absorb
