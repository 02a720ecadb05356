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

// Exact pattern counts behind the four lower-density notions and a witness
// search measuring how far a hypergraph is from meeting each of them.
//
// The deviation of a witness is d * |pattern space| - observed count; the
// audit reports rho_hat = max(0, max deviation) / n^3.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "thc/hypergraph.hpp"
#include "thc/parallel.hpp"
#include "thc/rng.hpp"

namespace thc::audit {

/// Set of ordered pairs, stored as out-neighbourhood bitsets. Pairs (v,v)
/// are allowed.
class PairSet {
 public:
  PairSet() = default;
  explicit PairSet(std::size_t n) : n_(n), out_(n, VertexSet(n)) {}

  static PairSet all(std::size_t n) {
    PairSet p(n);
    for (auto& s : p.out_) s = VertexSet::full(n);
    return p;
  }
  static PairSet all_distinct(std::size_t n) {
    PairSet p = all(n);
    for (Vertex v = 0; v < n; ++v) p.out_[v].erase(v);
    return p;
  }
  /// X x Y.
  static PairSet product(const VertexSet& x, const VertexSet& y) {
    PairSet p(x.universe());
    x.for_each([&](Vertex a) { p.out_[a] = y; });
    return p;
  }

  std::size_t n() const { return n_; }
  void insert(Vertex u, Vertex v) { out_[u].insert(v); }
  bool contains(Vertex u, Vertex v) const { return out_[u].contains(v); }
  const VertexSet& out(Vertex u) const { return out_[u]; }
  std::size_t size() const {
    std::size_t s = 0;
    for (const auto& o : out_) s += o.size();
    return s;
  }
  /// In-neighbourhoods, in[v] = {u : (u,v) in P}.
  std::vector<VertexSet> transpose() const {
    std::vector<VertexSet> in(n_, VertexSet(n_));
    for (Vertex u = 0; u < n_; ++u) out_[u].for_each([&](Vertex v) { in[v].insert(u); });
    return in;
  }
  std::vector<Pair> to_vector() const {
    std::vector<Pair> out;
    for (Vertex u = 0; u < n_; ++u) out_[u].for_each([&](Vertex v) { out.emplace_back(u, v); });
    return out;
  }

 private:
  std::size_t n_ = 0;
  std::vector<VertexSet> out_;
};

/// Ordered triples (x,y,z) in X x Y x Z whose underlying set is an edge.
inline std::uint64_t count_points(const Hypergraph3& h, const VertexSet& x, const VertexSet& y,
                                  const VertexSet& z) {
  std::uint64_t c = 0;
  x.for_each([&](Vertex a) {
    y.for_each([&](Vertex b) { c += bits::count_and(h.neighbors(a, b), z.bits()); });
  });
  return c;
}

struct CherryCount {
  std::uint64_t edges = 0;  ///< members of P2(G1,G2) that are edges
  std::uint64_t p2 = 0;     ///< |P2(G1,G2)|, degenerate tuples included
  friend bool operator==(const CherryCount&, const CherryCount&) = default;
};

/// P2(G1,G2) = {(x,y,z) : (x,y) in G1, (y,z) in G2}.
inline CherryCount count_cherry(const Hypergraph3& h, const PairSet& g1, const PairSet& g2) {
  CherryCount c;
  const auto in1 = g1.transpose();
  for (Vertex y = 0; y < h.n(); ++y) {
    const VertexSet& out2 = g2.out(y);
    c.p2 += static_cast<std::uint64_t>(in1[y].size()) * out2.size();
    in1[y].for_each([&](Vertex x) { c.edges += bits::count_and(h.neighbors(x, y), out2.bits()); });
  }
  return c;
}

struct EdgeCount {
  std::uint64_t edges = 0;  ///< ((u,v),x) in P x X with {u,v,x} an edge
  std::uint64_t space = 0;  ///< |P| * |X|
  friend bool operator==(const EdgeCount&, const EdgeCount&) = default;
};

inline EdgeCount count_edge(const Hypergraph3& h, const PairSet& p, const VertexSet& x) {
  EdgeCount c;
  c.space = static_cast<std::uint64_t>(p.size()) * x.size();
  for (Vertex u = 0; u < h.n(); ++u)
    p.out(u).for_each([&](Vertex v) { c.edges += bits::count_and(h.neighbors(u, v), x.bits()); });
  return c;
}

/// |E(H) & C(X,3)|.
inline std::uint64_t count_set(const Hypergraph3& h, const VertexSet& x) {
  std::uint64_t c = 0;
  x.for_each([&](Vertex a) {
    x.for_each([&](Vertex b) {
      if (a < b) c += bits::count_and(h.neighbors(a, b), x.bits());
    });
  });
  return c / 3;
}

inline double global_density(const Hypergraph3& h) {
  const double n = static_cast<double>(h.n());
  if (h.n() < 3) return 0.0;
  return 6.0 * static_cast<double>(h.num_edges()) / (n * (n - 1) * (n - 2));
}

enum class Notion { kPoints, kEdge, kCherry, kSet };

inline Notion parse_notion(const std::string& s) {
  if (s == "points") return Notion::kPoints;
  if (s == "edge") return Notion::kEdge;
  if (s == "cherry") return Notion::kCherry;
  if (s == "set") return Notion::kSet;
  throw Error("unknown density notion '" + s + "'");
}

inline std::string notion_name(Notion n) {
  switch (n) {
    case Notion::kPoints: return "points";
    case Notion::kEdge: return "edge";
    case Notion::kCherry: return "cherry";
    case Notion::kSet: return "set";
  }
  return "?";
}

struct Strategy {
  bool exhaustive = false;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

/// Largest n for which an exhaustive search is accepted, per notion.
struct ExhaustiveCaps {
  std::size_t points = 12;
  std::size_t edge = 12;
  std::size_t cherry = 12;
  std::size_t set = 20;
  std::size_t of(Notion n) const {
    switch (n) {
      case Notion::kPoints: return points;
      case Notion::kEdge: return edge;
      case Notion::kCherry: return cherry;
      case Notion::kSet: return set;
    }
    return 0;
  }
};

/// Witness sets achieving rho_hat. Fields used depend on the notion:
/// points {x,y,z}, edge {p,x}, cherry {g1,g2}, set {x}.
struct Witness {
  std::vector<Vertex> x = {}, y = {}, z = {};
  std::vector<Pair> p = {}, g1 = {}, g2 = {};
};

struct DensityReport {
  Notion notion = Notion::kSet;
  double d = 0.0;
  double rho_hat = 0.0;
  double global_density = 0.0;
  Witness worst_witness;
  Strategy strategy;
  std::uint64_t witnesses_tested = 0;
};

namespace detail {

inline double binom3(double k) { return k * (k - 1) * (k - 2) / 6.0; }

struct Best {
  double deviation = 0.0;
  Witness witness;
  bool any = false;
  void offer(double dev, auto&& make_witness) {
    if (!any || dev > deviation) {
      deviation = dev;
      witness = make_witness();
      any = true;
    }
  }
};

inline VertexSet mask_to_set(std::size_t n, std::uint64_t mask) {
  VertexSet s(n);
  for (Vertex v = 0; v < n; ++v)
    if ((mask >> v) & 1U) s.insert(v);
  return s;
}

inline Best exhaustive_set(const Hypergraph3& h, double d) {
  const std::size_t n = h.n();
  Best best;
  VertexSet x(n);
  std::int64_t edges = 0;
  std::uint64_t gray = 0;
  best.offer(0.0, [&] { return Witness{}; });
  for (std::uint64_t i = 1; i < (std::uint64_t{1} << n); ++i) {
    const auto v = static_cast<Vertex>(std::countr_zero(i));
    gray ^= std::uint64_t{1} << v;
    const bool adding = (gray >> v) & 1U;
    if (!adding) x.erase(v);
    std::uint64_t pairs = 0;
    x.for_each([&](Vertex a) { pairs += bits::count_and(h.neighbors(a, v), x.bits()); });
    edges += adding ? static_cast<std::int64_t>(pairs / 2) : -static_cast<std::int64_t>(pairs / 2);
    if (adding) x.insert(v);
    const double dev = d * binom3(static_cast<double>(x.size())) - static_cast<double>(edges);
    best.offer(dev, [&] { return Witness{.x = x.to_vector()}; });
  }
  return best;
}

inline Best exhaustive_points(const Hypergraph3& h, double d) {
  const std::size_t n = h.n();
  Best best;
  best.offer(0.0, [&] { return Witness{}; });
  std::vector<std::int64_t> cz(n);
  for (std::uint64_t xm = 1; xm < (std::uint64_t{1} << n); ++xm) {
    const VertexSet x = mask_to_set(n, xm);
    const double nx = static_cast<double>(x.size());
    std::fill(cz.begin(), cz.end(), 0);
    VertexSet y(n);
    std::uint64_t gray = 0;
    for (std::uint64_t i = 1; i < (std::uint64_t{1} << n); ++i) {
      const auto v = static_cast<Vertex>(std::countr_zero(i));
      gray ^= std::uint64_t{1} << v;
      const bool adding = (gray >> v) & 1U;
      const int sign = adding ? 1 : -1;
      for (Vertex z = 0; z < n; ++z)
        cz[z] += sign * static_cast<std::int64_t>(bits::count_and(h.neighbors(v, z), x.bits()));
      adding ? y.insert(v) : y.erase(v);
      const double per_z = d * nx * static_cast<double>(y.size());
      double dev = 0.0;
      for (Vertex z = 0; z < n; ++z) dev += std::max(0.0, per_z - static_cast<double>(cz[z]));
      if (dev > best.deviation) {
        best.offer(dev, [&] {
          Witness w{.x = x.to_vector(), .y = y.to_vector()};
          for (Vertex z = 0; z < n; ++z)
            if (per_z - static_cast<double>(cz[z]) > 0) w.z.push_back(z);
          return w;
        });
      }
    }
  }
  return best;
}

inline Best exhaustive_edge(const Hypergraph3& h, double d) {
  const std::size_t n = h.n();
  Best best;
  best.offer(0.0, [&] { return Witness{}; });
  for (std::uint64_t xm = 1; xm < (std::uint64_t{1} << n); ++xm) {
    const VertexSet x = mask_to_set(n, xm);
    const double per_pair = d * static_cast<double>(x.size());
    double dev = 0.0;
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = 0; v < n; ++v)
        dev += std::max(0.0, per_pair - static_cast<double>(bits::count_and(h.neighbors(u, v), x.bits())));
    if (dev > best.deviation) {
      best.offer(dev, [&] {
        Witness w{.x = x.to_vector()};
        for (Vertex u = 0; u < n; ++u)
          for (Vertex v = 0; v < n; ++v)
            if (per_pair - static_cast<double>(bits::count_and(h.neighbors(u, v), x.bits())) > 0)
              w.p.emplace_back(u, v);
        return w;
      });
    }
  }
  return best;
}

// The cherry deviation splits over the middle vertex y: with A = in-set of
// y in G1 and B = out-set in G2 it is sum_{b in B} (d|A| - |{a in A: ayb in E}|),
// so for each y it suffices to enumerate A and take B = positive terms.
inline Best exhaustive_cherry(const Hypergraph3& h, double d) {
  const std::size_t n = h.n();
  Best best;
  Witness w;
  double total = 0.0;
  for (Vertex y = 0; y < n; ++y) {
    double best_y = 0.0;
    std::uint64_t best_mask = 0;
    for (std::uint64_t am = 1; am < (std::uint64_t{1} << n); ++am) {
      const VertexSet a = mask_to_set(n, am);
      const double per_b = d * static_cast<double>(a.size());
      double dev = 0.0;
      for (Vertex b = 0; b < n; ++b)
        dev += std::max(0.0, per_b - static_cast<double>(bits::count_and(h.neighbors(y, b), a.bits())));
      if (dev > best_y) {
        best_y = dev;
        best_mask = am;
      }
    }
    if (best_mask) {
      const VertexSet a = mask_to_set(n, best_mask);
      a.for_each([&](Vertex x) { w.g1.emplace_back(x, y); });
      const double per_b = d * static_cast<double>(a.size());
      for (Vertex b = 0; b < n; ++b)
        if (per_b - static_cast<double>(bits::count_and(h.neighbors(y, b), a.bits())) > 0)
          w.g2.emplace_back(y, b);
    }
    total += best_y;
  }
  std::sort(w.g1.begin(), w.g1.end());
  best.offer(total, [&] { return w; });
  return best;
}

inline VertexSet random_vertex_set(Rng& rng, std::size_t n) {
  VertexSet s(n);
  for (Vertex v = 0; v < n; ++v)
    if (rng.next() & 1U) s.insert(v);
  return s;
}

inline PairSet random_pair_set(Rng& rng, std::size_t n) {
  PairSet p(n);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v)
      if (rng.next() & 1U) p.insert(u, v);
  return p;
}

struct Sampled {
  double deviation;
  Witness witness;
};

inline Sampled sample_one(const Hypergraph3& h, Notion notion, double d, Rng& rng) {
  const std::size_t n = h.n();
  switch (notion) {
    case Notion::kPoints: {
      VertexSet x = random_vertex_set(rng, n), y = random_vertex_set(rng, n),
                z = random_vertex_set(rng, n);
      const double dev = d * static_cast<double>(x.size() * y.size() * z.size()) -
                         static_cast<double>(count_points(h, x, y, z));
      return {dev, Witness{.x = x.to_vector(), .y = y.to_vector(), .z = z.to_vector()}};
    }
    case Notion::kEdge: {
      PairSet p = random_pair_set(rng, n);
      VertexSet x = random_vertex_set(rng, n);
      const EdgeCount c = count_edge(h, p, x);
      return {d * static_cast<double>(c.space) - static_cast<double>(c.edges),
              Witness{.x = x.to_vector(), .p = p.to_vector()}};
    }
    case Notion::kCherry: {
      PairSet g1 = random_pair_set(rng, n), g2 = random_pair_set(rng, n);
      const CherryCount c = count_cherry(h, g1, g2);
      return {d * static_cast<double>(c.p2) - static_cast<double>(c.edges),
              Witness{.g1 = g1.to_vector(), .g2 = g2.to_vector()}};
    }
    case Notion::kSet: {
      VertexSet x = random_vertex_set(rng, n);
      return {d * binom3(static_cast<double>(x.size())) - static_cast<double>(count_set(h, x)),
              Witness{.x = x.to_vector()}};
    }
  }
  return {0.0, {}};
}

}  // namespace detail

/// Witness search. Exhaustive mode returns the exact minimal rho for which
/// H is (rho, d)-dense in the chosen notion; sampled mode evaluates
/// `samples` random witnesses (each vertex or ordered pair included with
/// probability 1/2) and yields a lower bound on it.
///
/// Sampled witnesses are drawn from per-index substreams of the seed, so
/// the report is identical for any thread count.
inline DensityReport density_audit(const Hypergraph3& h, double d, Notion notion,
                                   const Strategy& strategy, const ExhaustiveCaps& caps = {},
                                   std::size_t threads = 1) {
  DensityReport r;
  r.notion = notion;
  r.d = d;
  r.strategy = strategy;
  r.global_density = global_density(h);
  const double n3 = static_cast<double>(h.n()) * h.n() * h.n();
  if (strategy.exhaustive) {
    if (h.n() > caps.of(notion))
      throw Error("exhaustive " + notion_name(notion) + " audit limited to n <= " +
                  std::to_string(caps.of(notion)));
    detail::Best best;
    switch (notion) {
      case Notion::kPoints: best = detail::exhaustive_points(h, d); break;
      case Notion::kEdge: best = detail::exhaustive_edge(h, d); break;
      case Notion::kCherry: best = detail::exhaustive_cherry(h, d); break;
      case Notion::kSet: best = detail::exhaustive_set(h, d); break;
    }
    r.rho_hat = h.n() ? std::max(0.0, best.deviation) / n3 : 0.0;
    r.worst_witness = std::move(best.witness);
    return r;
  }
  const std::uint64_t k = strategy.samples;
  std::vector<double> dev(k);
  const std::uint64_t base = substream_seed(strategy.seed, streams::kAuditWitness);
  parallel_for(k, threads, [&](std::size_t i) {
    Rng rng(base, i);
    dev[i] = detail::sample_one(h, notion, d, rng).deviation;
  });
  r.witnesses_tested = k;
  std::size_t arg = k;
  double best = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    if (dev[i] > best) {
      best = dev[i];
      arg = i;
    }
  if (arg < k && h.n()) {
    Rng rng(base, arg);
    r.worst_witness = detail::sample_one(h, notion, d, rng).witness;
    r.rho_hat = best / n3;
  }
  return r;
}

struct LowCodegreeReport {
  std::uint64_t b_size = 0;       ///< |B_Delta|
  std::uint64_t e_count = 0;      ///< e_H(G', B_Delta)
  std::uint64_t p2_count = 0;     ///< |P2(G', B_Delta)|
  double upper = 0.0;             ///< 2 |B_Delta| Delta
  double lower = 0.0;             ///< k |B_Delta| / 2
  bool edge_bound_holds = true;   ///< e < 2|B|Delta, vacuous when B is empty
  bool cherry_bound_holds = true; ///< |P2| >= k|B|/2
  std::vector<Pair> b_delta;
};

/// deg_H(u, v, G): vertices z adjacent to u in G with {z,u,v} an edge.
inline std::size_t degree_through(const Hypergraph3& h, Vertex u, Vertex v, const Graph2& g) {
  return bits::count_and(g.neighbors(u).bits(), h.neighbors(u, v));
}

/// Recomputes the two counting inequalities used in the low-codegree pair
/// bound: with G' = {(v,y) : vy in E(G), y in Y} and
/// B = {(y,z) in Y x V : y != z, deg_H(y,z,G) < delta},
/// checks e_H(G',B) < 2|B| delta and |P2(G',B)| >= k|B|/2.
inline LowCodegreeReport low_codegree_check(const Hypergraph3& h, const Graph2& g, const VertexSet& y,
                                   std::size_t k, double delta) {
  const std::size_t n = h.n();
  if (g.n() != n || y.universe() != n) throw Error("universe mismatch");
  for (const auto& [a, b] : g.edge_list())
    if (!y.contains(a) && !y.contains(b))
      throw Error("Y is not a vertex cover of G (edge " + std::to_string(a) + "," +
                  std::to_string(b) + ")");
  y.for_each([&](Vertex v) {
    if (g.degree(v) < k)
      throw Error("degree precondition violated at vertex " + std::to_string(v));
  });
  PairSet gp(n), b(n);
  for (const auto& [u, v] : g.edge_list()) {
    if (y.contains(v)) gp.insert(u, v);
    if (y.contains(u)) gp.insert(v, u);
  }
  LowCodegreeReport r;
  y.for_each([&](Vertex yy) {
    for (Vertex z = 0; z < n; ++z) {
      if (z == yy) continue;
      if (static_cast<double>(degree_through(h, yy, z, g)) < delta) {
        b.insert(yy, z);
        r.b_delta.emplace_back(yy, z);
      }
    }
  });
  const CherryCount c = count_cherry(h, gp, b);
  r.b_size = r.b_delta.size();
  r.e_count = c.edges;
  r.p2_count = c.p2;
  r.upper = 2.0 * static_cast<double>(r.b_size) * delta;
  r.lower = static_cast<double>(k) * static_cast<double>(r.b_size) / 2.0;
  r.edge_bound_holds = r.b_size == 0 || static_cast<double>(r.e_count) < r.upper;
  r.cherry_bound_holds = static_cast<double>(r.p2_count) >= r.lower;
  return r;
}

}  // namespace thc::audit
