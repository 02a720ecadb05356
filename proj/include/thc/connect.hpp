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

// Joining two disjoint pairs by a tight path on 10 vertices.
//
// Around an ordered pair (x,y) a cascade collects three layers of
// co-neighbourhoods in the host H' = (H - forbidden)_beta:
//
//   N1 = N(x,y)
//   G2: z in N1 joined to w when {y,z,w} is an edge; N2 keeps the w with at
//       least omega such z.
//   G3: w in N2 joined to u when at least t_deg vertices z in N1 adjacent
//       to w in G2 satisfy {z,w,u} in E(H'); N3 is the set of such u.
//
// Every G3-edge wu extends to the 5-path x,y,z',w,u for some choice of z'.
// A link (z,u,v,w) pairs a G3-edge zu of one cascade with a G3-edge vw of
// the other such that {z,u,v} and {u,v,w} are edges of H; the two 5-paths
// then glue into x,y,z',z,u,v,w,z'',y',x'.

#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "thc/hypergraph.hpp"
#include "thc/tight.hpp"

namespace thc::connect {

struct CascadeParams {
  /// Minimum G2-degree into N1 for a vertex to enter N2; 0 means
  /// max(1, ceil(log2 m)) with m the order of the host.
  std::size_t omega = 0;
  /// Minimum B_w-degree for a G3 edge.
  std::size_t t_deg = 20;
  /// Links examined before connect gives up; 0 means no limit.
  std::size_t link_budget = 0;
};

inline std::size_t resolve_omega(std::size_t omega, std::size_t order) {
  if (omega) return omega;
  if (order <= 1) return 1;
  return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(order)))));
}

/// Measured counterparts of the cascade size bounds, evaluated with the
/// host's beta and order m.
struct CascadeBounds {
  std::size_t n1 = 0, n2 = 0, n3 = 0, e_g2 = 0, e_g3 = 0, min_g3_degree_on_n2 = 0;
  bool n1_ok = false;         ///< |N1| >= beta m
  bool n2_ok = false;         ///< |N2| >= beta^2 m / 4
  bool g2_ok = false;         ///< e(G2) >= beta^2 m^2 / 4
  bool g3_degree_ok = false;  ///< deg_G3(w) >= beta m / 2 for all w in N2
  bool g3_ok = false;         ///< |N3| >= beta m / 2 and e(G3) >= beta^2 m^2 / 8
};

struct Cascade {
  Vertex x = 0, y = 0;
  VertexSet n1, n2, n3;
  /// For w in N2: its G2-neighbours inside N1 ({z in N1 : {y,z,w} in E}).
  std::vector<VertexSet> g2;
  /// For w in N2: its G3-neighbours (the u with deg_{B_w}(u) >= t_deg).
  std::vector<VertexSet> g3;
  /// Transpose of g3: for u in N3, the w in N2 with wu in G3.
  std::vector<VertexSet> g3_rev;
  std::size_t omega = 1;
  std::size_t t_deg = 1;
  CascadeBounds bounds;
};

/// Builds the (x,y)-cascade in the given view. The view is the host H'.
/// Throws when {x,y} lies in no edge of the view.
inline Cascade build_cascade(const MaskedView& view, Vertex x, Vertex y,
                             const CascadeParams& params = {}) {
  const std::size_t n = view.n();
  const double m = static_cast<double>(view.order());
  const double beta = view.beta();
  Cascade c;
  c.x = x;
  c.y = y;
  c.omega = resolve_omega(params.omega, view.order());
  c.t_deg = std::max<std::size_t>(1, params.t_deg);
  c.n1 = view.neighbors(x, y);
  if (c.n1.empty())
    throw Error("pair {" + std::to_string(x) + "," + std::to_string(y) + "} lies in no edge of the host");
  c.n2 = VertexSet(n);
  c.n3 = VertexSet(n);
  c.g2.assign(n, VertexSet(n));
  c.g3.assign(n, VertexSet(n));
  c.g3_rev.assign(n, VertexSet(n));

  Graph2 g2_graph(n), g3_graph(n);
  // Anchors are never link vertices, so they are kept out of N2 and N3.
  view.alive().for_each([&](Vertex w) {
    if (w == x || w == y) return;
    VertexSet into = view.neighbors(y, w);
    into &= c.n1;
    if (into.size() >= c.omega) {
      c.n2.insert(w);
      into.for_each([&](Vertex z) { g2_graph.add_edge(z, w); });
      c.g2[w] = std::move(into);
    }
  });

  std::vector<std::uint32_t> count(n);
  c.n2.for_each([&](Vertex w) {
    std::fill(count.begin(), count.end(), 0);
    c.g2[w].for_each([&](Vertex z) {
      view.neighbors(z, w).for_each([&](Vertex u) { ++count[u]; });
    });
    for (Vertex u = 0; u < n; ++u)
      if (u != x && u != y && count[u] >= c.t_deg) {
        c.g3[w].insert(u);
        c.g3_rev[u].insert(w);
        c.n3.insert(u);
        g3_graph.add_edge(u, w);
      }
  });

  CascadeBounds& b = c.bounds;
  b.n1 = c.n1.size();
  b.n2 = c.n2.size();
  b.n3 = c.n3.size();
  b.e_g2 = g2_graph.num_edges();
  b.e_g3 = g3_graph.num_edges();
  b.min_g3_degree_on_n2 = b.n2 ? std::numeric_limits<std::size_t>::max() : 0;
  c.n2.for_each([&](Vertex w) { b.min_g3_degree_on_n2 = std::min(b.min_g3_degree_on_n2, c.g3[w].size()); });
  const auto ge = [](double have, double want) { return have >= want - 1e-9 * std::max(1.0, want); };
  b.n1_ok = ge(static_cast<double>(b.n1), beta * m);
  b.n2_ok = b.n2 > 0 && ge(static_cast<double>(b.n2), beta * beta * m / 4);
  b.g2_ok = b.e_g2 > 0 && ge(static_cast<double>(b.e_g2), beta * beta * m * m / 4);
  b.g3_degree_ok = b.n2 > 0 && ge(static_cast<double>(b.min_g3_degree_on_n2), beta * m / 2);
  b.g3_ok = b.e_g3 > 0 && ge(static_cast<double>(b.n3), beta * m / 2) &&
            ge(static_cast<double>(b.e_g3), beta * beta * m * m / 8);
  return c;
}

/// (z,u,v,w) in N2(C) x N3(C) x N3(C') x N2(C').
struct Link {
  Vertex z = 0, u = 0, v = 0, w = 0;
  friend bool operator==(const Link&, const Link&) = default;
};

/// Independent re-check of the three link conditions against H.
inline bool is_link(const Hypergraph3& h, const Cascade& c, const Cascade& c2, const Link& l) {
  const Vertex all[8] = {c.x, c.y, l.z, l.u, l.v, l.w, c2.y, c2.x};
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j)
      if (all[i] == all[j]) return false;
  if (!c.n2.contains(l.z) || !c.n3.contains(l.u) || !c2.n3.contains(l.v) || !c2.n2.contains(l.w))
    return false;
  if (!h.has_edge(l.z, l.u, l.v) || !h.has_edge(l.u, l.v, l.w)) return false;
  return c.g3[l.z].contains(l.u) && c2.g3[l.w].contains(l.v);
}

namespace detail {

/// Vertices of the subgraph of G3 left after repeatedly deleting vertices of
/// degree below half the average degree of G3. That subgraph has minimum
/// degree at least e/|V| and is non-empty whenever G3 has an edge.
inline VertexSet dense_core(const Cascade& c) {
  const std::size_t n = c.n1.universe();
  std::vector<std::size_t> deg(n, 0);
  VertexSet alive(n);
  std::size_t edges = 0;
  c.n2.for_each([&](Vertex w) {
    c.g3[w].for_each([&](Vertex u) {
      if (u == w) return;
      ++deg[w];
      ++deg[u];
      ++edges;
      alive.insert(u);
      alive.insert(w);
    });
  });
  if (edges == 0) return alive;
  // Each undirected edge may be stored once per orientation when both
  // endpoints lie in N2; the peeling threshold tolerates the overcount.
  const double threshold = static_cast<double>(edges) / static_cast<double>(alive.size());
  bool changed = true;
  while (changed) {
    changed = false;
    alive.for_each([&](Vertex v) {
      if (static_cast<double>(deg[v]) < threshold) {
        alive.erase(v);
        changed = true;
        if (c.n2.contains(v))
          c.g3[v].for_each([&](Vertex u) {
            if (alive.contains(u) && u != v) --deg[u];
          });
        c.g3_rev[v].for_each([&](Vertex w) {
          if (alive.contains(w) && w != v) --deg[w];
        });
      }
    });
  }
  return alive;
}

}  // namespace detail

/// Enumerates links between the cascades, calling on_link(link) until it
/// returns true. Candidates inside the dense cores of both G3 graphs are
/// scanned first (ascending u, v, z, w); the remaining candidates follow.
/// Returns true if a callback accepted a link.
template <class OnLink>
bool for_each_link(const Hypergraph3& h, const Cascade& c, const Cascade& c2,
                   const VertexSet& forbidden, OnLink&& on_link) {
  const std::size_t n = h.n();
  VertexSet allowed = forbidden.complement();
  for (Vertex a : {c.x, c.y, c2.x, c2.y}) allowed.erase(a);
  const VertexSet core1 = detail::dense_core(c), core2 = detail::dense_core(c2);

  for (int phase = 0; phase < 2; ++phase) {
    VertexSet us = c.n3 & allowed, vs = c2.n3 & allowed;
    if (phase == 0) {
      us &= core1;
      vs &= core2;
    }
    bool stop = false;
    us.for_each([&](Vertex u) {
      if (stop) return;
      vs.for_each([&](Vertex v) {
        if (stop || u == v) return;
        VertexSet common(n, h.neighbors(u, v));
        common &= allowed;
        if (common.empty()) return;
        VertexSet zs = c.g3_rev[u] & common, ws = c2.g3_rev[v] & common;
        if (phase == 0) {
          zs &= core1;
          ws &= core2;
        }
        zs.for_each([&](Vertex z) {
          if (stop) return;
          ws.for_each([&](Vertex w) {
            if (stop || z == w) return;
            if (phase == 1 && core1.contains(u) && core2.contains(v) && core1.contains(z) &&
                core2.contains(w))
              return;
            if (on_link(Link{z, u, v, w})) stop = true;
          });
        });
      });
    });
    if (stop) return true;
  }
  return false;
}

/// First link avoiding `forbidden`, or nullopt.
inline std::optional<Link> find_link(const Hypergraph3& h, const Cascade& c, const Cascade& c2,
                                     const VertexSet& forbidden) {
  std::optional<Link> found;
  for_each_link(h, c, c2, forbidden, [&](const Link& l) {
    found = l;
    return true;
  });
  return found;
}

struct ConnectReport {
  std::optional<TightPath> path;
  std::optional<CascadeBounds> first, second;
  std::size_t links_tried = 0;
  std::string failure;  ///< empty on success
};

/// Enumerates tight 10-paths starting with (from.first, from.second) and
/// ending with (to.first, to.second), internal vertices outside
/// `forbidden`, passing each to on_path until it returns true. Cascades are
/// built in (H - forbidden)_beta with beta relative to the order of
/// H - forbidden; link edges are edges of H - forbidden. Paths come in link
/// order, then ascending z', then ascending z''. The report's path is the
/// accepted one.
template <class OnPath>
ConnectReport for_each_connection(const Hypergraph3& h, double beta, Pair from, Pair to,
                                  const VertexSet& forbidden, const CascadeParams& params, OnPath&& on_path) {
  const auto [a, b] = from;
  const auto [c, d] = to;
  if (a == b || c == d) throw Error("connect: a pair must have two distinct vertices");
  if (a == c || a == d || b == c || b == d) throw Error("connect: pairs must be disjoint");
  for (Vertex v : {a, b, c, d}) {
    if (v >= h.n()) throw Error("connect: vertex out of range");
    if (forbidden.contains(v)) throw Error("connect: anchor " + std::to_string(v) + " is forbidden");
  }
  ConnectReport report;
  const MaskedView view(h, forbidden.complement(), beta);
  if (!view.relevant(a, b) || !view.relevant(c, d)) {
    report.failure = "pair not relevant in host";
    return report;
  }
  // The second cascade is anchored at (d, c) so that its 5-path ends c, d.
  const Cascade c1 = build_cascade(view, a, b, params);
  const Cascade c2 = build_cascade(view, d, c, params);
  report.first = c1.bounds;
  report.second = c2.bounds;

  bool out_of_budget = false;
  for_each_link(h, c1, c2, forbidden, [&](const Link& l) {
    if (params.link_budget && report.links_tried >= params.link_budget) {
      out_of_budget = true;
      return true;
    }
    ++report.links_tried;
    VertexSet avoid(h.n(), {a, b, c, d, l.z, l.u, l.v, l.w});
    VertexSet z1s = c1.g2[l.z] & view.neighbors(l.z, l.u);
    VertexSet z2s = c2.g2[l.w] & view.neighbors(l.w, l.v);
    z1s.subtract(avoid);
    z2s.subtract(avoid);
    bool done = false;
    z1s.for_each([&](Vertex z1) {
      z2s.for_each([&](Vertex z2) {
        if (done || z1 == z2) return;
        TightPath p{{a, b, z1, l.z, l.u, l.v, l.w, z2, c, d}};
        if (validate_tight(h, p) && on_path(p)) {
          report.path = std::move(p);
          done = true;
        }
      });
    });
    return done;
  });
  if (!report.path)
    report.failure = out_of_budget        ? "link budget exhausted"
                     : report.links_tried ? "no link extends to a 10-path"
                                          : "no link";
  return report;
}

/// First path of for_each_connection, with diagnostics.
inline ConnectReport connect_detailed(const Hypergraph3& h, double beta, Pair from, Pair to,
                                      const VertexSet& forbidden, const CascadeParams& params = {}) {
  return for_each_connection(h, beta, from, to, forbidden, params, [](const TightPath&) { return true; });
}

inline std::optional<TightPath> connect(const Hypergraph3& h, double beta, Pair from, Pair to,
                                        const VertexSet& forbidden, const CascadeParams& params = {}) {
  return connect_detailed(h, beta, from, to, forbidden, params).path;
}

}  // namespace thc::connect
