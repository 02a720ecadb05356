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

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "thc/audit.hpp"
#include "thc/gen.hpp"

namespace {

using thc::Hypergraph3;
using thc::Triple;
using thc::Vertex;
using thc::VertexSet;
using thc::audit::PairSet;

VertexSet to_set(const std::vector<bool>& b) {
  VertexSet s(b.size());
  for (Vertex v = 0; v < b.size(); ++v)
    if (b[v]) s.insert(v);
  return s;
}

PairSet to_pairs(const oracle::Rel& r) {
  PairSet p(r.size());
  for (Vertex u = 0; u < r.size(); ++u)
    for (Vertex v = 0; v < r.size(); ++v)
      if (r[u][v]) p.insert(u, v);
  return p;
}

std::vector<bool> from_mask(std::size_t n, std::uint64_t m) {
  std::vector<bool> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = (m >> i) & 1U;
  return b;
}

Hypergraph3 single_edge() { return Hypergraph3::from_triples(3, {{0, 1, 2}}); }

// --- count_points -------------------------------------------------------

TEST(CountPoints, CompleteAllOrderedTriples) {
  for (std::size_t n : {3u, 5u, 9u}) {
    const auto all = VertexSet::full(n);
    EXPECT_EQ(thc::audit::count_points(Hypergraph3::complete(n), all, all, all), n * (n - 1) * (n - 2));
  }
}

TEST(CountPoints, EmptyXGivesZero) {
  const auto h = Hypergraph3::complete(6);
  EXPECT_EQ(thc::audit::count_points(h, VertexSet(6), VertexSet::full(6), VertexSet::full(6)), 0u);
}

TEST(CountPoints, SingleEdgeAndRepeatedVertex) {
  const auto h = single_edge();
  EXPECT_EQ(thc::audit::count_points(h, VertexSet(3, {0}), VertexSet(3, {1}), VertexSet(3, {2})), 1u);
  EXPECT_EQ(thc::audit::count_points(h, VertexSet(3, {0}), VertexSet(3, {0}), VertexSet::full(3)), 0u);
}

// --- count_cherry ---------------------------------------------------------

TEST(CountCherry, CompleteWithAllPairs) {
  const std::size_t n = 7;
  const auto all = PairSet::all(n);
  const auto c = thc::audit::count_cherry(Hypergraph3::complete(n), all, all);
  EXPECT_EQ(c.p2, n * n * n);
  EXPECT_EQ(c.edges, n * (n - 1) * (n - 2));
}

TEST(CountCherry, EmptyFirstGraph) {
  const auto c = thc::audit::count_cherry(Hypergraph3::complete(5), PairSet(5), PairSet::all(5));
  EXPECT_EQ(c, (thc::audit::CherryCount{0, 0}));
}

TEST(CountCherry, SingleCherryOnSingleEdge) {
  PairSet g1(3), g2(3);
  g1.insert(0, 1);
  g2.insert(1, 2);
  EXPECT_EQ(thc::audit::count_cherry(single_edge(), g1, g2), (thc::audit::CherryCount{1, 1}));
}

// --- count_edge --------------------------------------------------------------

TEST(CountEdge, CompleteDistinctPairs) {
  const std::size_t n = 8;
  const auto c = thc::audit::count_edge(Hypergraph3::complete(n), PairSet::all_distinct(n), VertexSet::full(n));
  EXPECT_EQ(c.edges, n * (n - 1) * (n - 2));
}

TEST(CountEdge, EmptyX) {
  EXPECT_EQ(thc::audit::count_edge(Hypergraph3::complete(5), PairSet(5), VertexSet(5)),
            (thc::audit::EdgeCount{0, 0}));
}

TEST(CountEdge, SingleEdge) {
  PairSet p(3);
  p.insert(0, 1);
  EXPECT_EQ(thc::audit::count_edge(single_edge(), p, VertexSet(3, {2, 0})), (thc::audit::EdgeCount{1, 2}));
}

// --- count_set --------------------------------------------------------------

TEST(CountSet, FourVerticesOfK6) {
  EXPECT_EQ(thc::audit::count_set(Hypergraph3::complete(6), VertexSet(6, {0, 2, 3, 5})), 4u);
}

TEST(CountSet, AtMostTwoVertices) {
  const auto h = Hypergraph3::complete(6);
  EXPECT_EQ(thc::audit::count_set(h, VertexSet(6)), 0u);
  EXPECT_EQ(thc::audit::count_set(h, VertexSet(6, {1})), 0u);
  EXPECT_EQ(thc::audit::count_set(h, VertexSet(6, {1, 4})), 0u);
}

TEST(CountSet, CounterexamplePartXCountsGraphTriangles) {
  const auto ce = thc::gen::counterexample(30, 1);
  std::uint64_t triangles = 0;
  const auto& x = ce.x;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j)
      for (std::size_t k = j + 1; k < x.size(); ++k)
        triangles += ce.g.has_edge(x[i], x[j]) && ce.g.has_edge(x[i], x[k]) && ce.g.has_edge(x[j], x[k]);
  EXPECT_GT(triangles, 0u);
  EXPECT_EQ(thc::audit::count_set(ce.h, VertexSet::of(30, x)), triangles);
}

// --- oracle agreement and properties -----------------------------------------

TEST(Counting, AllCountsMatchTripleLoopOracles) {
  std::mt19937_64 rng(21);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = 1 + rep % 10;
    const auto raw = oracle::random_raw(n, 0.2 + 0.1 * (rep % 7), rng);
    const auto h = raw.build();
    const auto x = oracle::random_subset(n, rng), y = oracle::random_subset(n, rng),
               z = oracle::random_subset(n, rng);
    const auto g1 = oracle::random_rel(n, rng), g2 = oracle::random_rel(n, rng);
    EXPECT_EQ(thc::audit::count_points(h, to_set(x), to_set(y), to_set(z)), oracle::points(raw, x, y, z));
    const auto ch = oracle::cherry(raw, g1, g2);
    EXPECT_EQ(thc::audit::count_cherry(h, to_pairs(g1), to_pairs(g2)), (thc::audit::CherryCount{ch.edges, ch.p2}));
    const auto ec = thc::audit::count_edge(h, to_pairs(g1), to_set(x));
    EXPECT_EQ(ec.edges, oracle::edge_count(raw, g1, x));
    EXPECT_EQ(ec.space, to_pairs(g1).size() * to_set(x).size());
    EXPECT_EQ(thc::audit::count_set(h, to_set(x)), oracle::set_count(raw, x));
  }
}

TEST(Counting, PointsSymmetricUnderPermutationWhenSetsCoincide) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = 4 + rep % 8;
    const auto h = oracle::random_raw(n, 0.5, rng).build();
    const auto x = to_set(oracle::random_subset(n, rng));
    const auto c = thc::audit::count_points(h, x, x, x);
    EXPECT_EQ(c, 6 * thc::audit::count_set(h, x));
  }
}

TEST(Counting, CherryOverProductsReproducesPoints) {
  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 3 + rep % 10;
    const auto h = oracle::random_raw(n, 0.5, rng).build();
    // Overlap is allowed too: the identity does not need disjoint parts.
    const bool disjoint = rep % 2 == 0;
    VertexSet x(n), y(n), z(n);
    for (Vertex v = 0; v < n; ++v) {
      const auto r = rng() % 4;
      if (disjoint) {
        (r == 0 ? x : r == 1 ? y : z).insert(v);
      } else {
        if (r & 1) x.insert(v);
        if (r & 2) y.insert(v);
        if (rng() & 1) z.insert(v);
      }
    }
    const auto c = thc::audit::count_cherry(h, PairSet::product(x, y), PairSet::product(y, z));
    EXPECT_EQ(c.edges, thc::audit::count_points(h, x, y, z));
    EXPECT_EQ(c.p2, x.size() * y.size() * z.size());
  }
}

TEST(Counting, MonotoneUnderEnlargement) {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = 4 + rep % 9;
    const auto h = oracle::random_raw(n, 0.5, rng).build();
    auto xb = oracle::random_subset(n, rng, 0.3);
    auto gb = oracle::random_rel(n, rng, 0.3);
    const auto y = to_set(oracle::random_subset(n, rng)), z = to_set(oracle::random_subset(n, rng));
    const auto g2 = to_pairs(oracle::random_rel(n, rng));
    const auto x0 = to_set(xb);
    const auto p0 = to_pairs(gb);
    xb[rng() % n] = true;
    gb[rng() % n][rng() % n] = true;
    const auto x1 = to_set(xb);
    const auto p1 = to_pairs(gb);
    EXPECT_LE(thc::audit::count_points(h, x0, y, z), thc::audit::count_points(h, x1, y, z));
    EXPECT_LE(thc::audit::count_set(h, x0), thc::audit::count_set(h, x1));
    EXPECT_LE(thc::audit::count_cherry(h, p0, g2).edges, thc::audit::count_cherry(h, p1, g2).edges);
    EXPECT_LE(thc::audit::count_edge(h, p0, y).edges, thc::audit::count_edge(h, p1, y).edges);
  }
}

// --- density_audit ------------------------------------------------------------

thc::audit::Strategy exhaustive() { return {.exhaustive = true}; }

TEST(DensityAudit, CompleteIsDenseInSetSense) {
  const auto r = thc::audit::density_audit(Hypergraph3::complete(10), 1.0, thc::audit::Notion::kSet, exhaustive());
  EXPECT_EQ(r.rho_hat, 0.0);
  EXPECT_DOUBLE_EQ(r.global_density, 1.0);
}

TEST(DensityAudit, EmptyOnNineAtHalf) {
  const auto h = Hypergraph3::from_triples(9, std::span<const Triple>{});
  const auto r = thc::audit::density_audit(h, 0.5, thc::audit::Notion::kSet, exhaustive());
  EXPECT_NEAR(r.rho_hat, 0.5 * 84 / 729.0, 1e-12);
  EXPECT_EQ(r.worst_witness.x.size(), 9u);
}

TEST(DensityAudit, CounterexampleCherrySampledIsNonNegative) {
  const auto ce = thc::gen::counterexample(300, 1);
  const auto r = thc::audit::density_audit(ce.h, 0.3, thc::audit::Notion::kCherry,
                                           {.samples = 200, .seed = 1}, {}, 4);
  EXPECT_GE(r.rho_hat, 0.0);
  EXPECT_EQ(r.witnesses_tested, 200u);
}

TEST(DensityAudit, ExhaustiveAboveCapThrows) {
  const auto h = Hypergraph3::complete(13);
  EXPECT_THROW(thc::audit::density_audit(h, 0.5, thc::audit::Notion::kPoints, exhaustive()), thc::Error);
  EXPECT_THROW(thc::audit::density_audit(h, 0.5, thc::audit::Notion::kCherry, exhaustive()), thc::Error);
  EXPECT_NO_THROW(thc::audit::density_audit(h, 0.5, thc::audit::Notion::kSet, exhaustive()));
  EXPECT_THROW(thc::audit::density_audit(Hypergraph3::complete(21), 0.5, thc::audit::Notion::kSet, exhaustive()),
               thc::Error);
}

TEST(DensityAudit, UnknownNotionThrows) { EXPECT_THROW(thc::audit::parse_notion("star"), thc::Error); }

// True minimal rho by enumerating every witness of the notion's shape.
double brute_rho(const oracle::Raw& h, double d, thc::audit::Notion notion) {
  const std::size_t n = h.n;
  const double n3 = static_cast<double>(n * n * n);
  double best = 0.0;
  const std::uint64_t sets = std::uint64_t{1} << n, rels = std::uint64_t{1} << (n * n);
  auto rel = [&](std::uint64_t m) {
    oracle::Rel r(n, std::vector<bool>(n));
    for (std::size_t i = 0; i < n * n; ++i) r[i / n][i % n] = (m >> i) & 1U;
    return r;
  };
  auto cnt = [](const std::vector<bool>& b) { return static_cast<double>(std::count(b.begin(), b.end(), true)); };
  switch (notion) {
    case thc::audit::Notion::kSet:
      for (std::uint64_t m = 0; m < sets; ++m) {
        const auto x = from_mask(n, m);
        const double k = cnt(x);
        best = std::max(best, d * k * (k - 1) * (k - 2) / 6 - static_cast<double>(oracle::set_count(h, x)));
      }
      break;
    case thc::audit::Notion::kPoints:
      for (std::uint64_t a = 0; a < sets; ++a)
        for (std::uint64_t b = 0; b < sets; ++b)
          for (std::uint64_t c = 0; c < sets; ++c) {
            const auto x = from_mask(n, a), y = from_mask(n, b), z = from_mask(n, c);
            best = std::max(best, d * cnt(x) * cnt(y) * cnt(z) - static_cast<double>(oracle::points(h, x, y, z)));
          }
      break;
    case thc::audit::Notion::kEdge:
      for (std::uint64_t pm = 0; pm < rels; ++pm)
        for (std::uint64_t xm = 0; xm < sets; ++xm) {
          const auto p = rel(pm);
          const auto x = from_mask(n, xm);
          const double space = static_cast<double>(std::popcount(pm)) * cnt(x);
          best = std::max(best, d * space - static_cast<double>(oracle::edge_count(h, p, x)));
        }
      break;
    case thc::audit::Notion::kCherry:
      for (std::uint64_t a = 0; a < rels; ++a)
        for (std::uint64_t b = 0; b < rels; ++b) {
          const auto c = oracle::cherry(h, rel(a), rel(b));
          best = std::max(best, d * static_cast<double>(c.p2) - static_cast<double>(c.edges));
        }
      break;
  }
  return best / n3;
}

TEST(DensityAudit, ExhaustiveEqualsTrueMinimalRho) {
  std::mt19937_64 rng(17);
  struct Case {
    thc::audit::Notion notion;
    std::size_t n;
  };
  const Case cases[] = {{thc::audit::Notion::kSet, 7},   {thc::audit::Notion::kSet, 9},
                        {thc::audit::Notion::kPoints, 4}, {thc::audit::Notion::kPoints, 5},
                        {thc::audit::Notion::kEdge, 3},   {thc::audit::Notion::kEdge, 4},
                        {thc::audit::Notion::kCherry, 3}};
  for (const auto& cs : cases)
    for (double p : {0.3, 0.7})
      for (double d : {0.4, 0.8}) {
        const auto raw = oracle::random_raw(cs.n, p, rng);
        const auto r = thc::audit::density_audit(raw.build(), d, cs.notion, exhaustive());
        EXPECT_NEAR(r.rho_hat, brute_rho(raw, d, cs.notion), 1e-12)
            << thc::audit::notion_name(cs.notion) << " n=" << cs.n << " p=" << p << " d=" << d;
      }
}

TEST(DensityAudit, SampledIsLowerBoundOnExhaustive) {
  std::mt19937_64 rng(19);
  for (auto notion : {thc::audit::Notion::kPoints, thc::audit::Notion::kEdge, thc::audit::Notion::kCherry,
                      thc::audit::Notion::kSet}) {
    for (int rep = 0; rep < 4; ++rep) {
      const auto h = oracle::random_raw(6 + rep, 0.5, rng).build();
      const auto ex = thc::audit::density_audit(h, 0.6, notion, exhaustive());
      const auto sa = thc::audit::density_audit(h, 0.6, notion, {.samples = 300, .seed = 3});
      EXPECT_GE(sa.rho_hat, 0.0);
      EXPECT_LE(sa.rho_hat, ex.rho_hat + 1e-12) << thc::audit::notion_name(notion);
    }
  }
}

TEST(DensityAudit, SampledIsDeterministicAcrossThreadCounts) {
  const auto h = thc::gen::random(40, 0.4, 9);
  for (auto notion : {thc::audit::Notion::kPoints, thc::audit::Notion::kEdge, thc::audit::Notion::kCherry,
                      thc::audit::Notion::kSet}) {
    const thc::audit::Strategy s{.samples = 500, .seed = 11};
    const auto a = thc::audit::density_audit(h, 0.45, notion, s, {}, 1);
    const auto b = thc::audit::density_audit(h, 0.45, notion, s, {}, 8);
    EXPECT_EQ(a.rho_hat, b.rho_hat);
    EXPECT_EQ(a.worst_witness.x, b.worst_witness.x);
    EXPECT_EQ(a.worst_witness.p, b.worst_witness.p);
    EXPECT_EQ(a.worst_witness.g1, b.worst_witness.g1);
  }
}

TEST(DensityAudit, WitnessReproducesReportedDeviation) {
  const auto h = thc::gen::random(12, 0.5, 4);
  const auto r = thc::audit::density_audit(h, 0.7, thc::audit::Notion::kSet, exhaustive());
  const auto x = VertexSet::of(12, r.worst_witness.x);
  const double k = static_cast<double>(x.size());
  EXPECT_NEAR(r.rho_hat * 1728, 0.7 * k * (k - 1) * (k - 2) / 6 - static_cast<double>(thc::audit::count_set(h, x)),
              1e-9);
}

// --- low-codegree pair inequalities --------------------------------------------

thc::Graph2 complete_graph(std::size_t n) {
  thc::Graph2 g(n);
  for (Vertex a = 0; a < n; ++a)
    for (Vertex b = a + 1; b < n; ++b) g.add_edge(a, b);
  return g;
}

TEST(LowCodegree, CompleteOnFive) {
  const auto r = thc::audit::low_codegree_check(Hypergraph3::complete(5), complete_graph(5), VertexSet::full(5), 4, 10);
  EXPECT_EQ(r.b_size, 20u);
  EXPECT_EQ(r.e_count, 60u);
  EXPECT_EQ(r.p2_count, 80u);
  EXPECT_DOUBLE_EQ(r.upper, 400.0);
  EXPECT_DOUBLE_EQ(r.lower, 40.0);
  EXPECT_TRUE(r.edge_bound_holds);
  EXPECT_TRUE(r.cherry_bound_holds);
}

TEST(LowCodegree, ZeroThresholdIsVacuous) {
  const auto r = thc::audit::low_codegree_check(Hypergraph3::complete(5), complete_graph(5), VertexSet::full(5), 4, 0);
  EXPECT_EQ(r.b_size, 0u);
  EXPECT_TRUE(r.edge_bound_holds);
  EXPECT_TRUE(r.cherry_bound_holds);
}

TEST(LowCodegree, RandomTenAgainstEnumeration) {
  const auto h = thc::gen::random(10, 0.5, 7);
  const auto r = thc::audit::low_codegree_check(h, complete_graph(10), VertexSet::full(10), 9, 2);
  EXPECT_TRUE(r.edge_bound_holds);
  EXPECT_TRUE(r.cherry_bound_holds);
  oracle::Rel g(10, std::vector<bool>(10, true));
  for (int i = 0; i < 10; ++i) g[i][i] = false;
  const auto o = oracle::low_codegree(oracle::from_h3(h), g, std::vector<bool>(10, true), 2);
  EXPECT_EQ(r.b_size, o.b);
  EXPECT_EQ(r.e_count, o.e);
  EXPECT_EQ(r.p2_count, o.p2);
}

TEST(LowCodegree, PreconditionsAreChecked) {
  thc::Graph2 g(5);
  g.add_edge(0, 1);
  g.add_edge(2, 3);
  // {2,3} is uncovered by Y = {0}.
  EXPECT_THROW(thc::audit::low_codegree_check(Hypergraph3::complete(5), g, VertexSet(5, {0}), 1, 1), thc::Error);
  // Vertex 0 has degree 1 < k = 2.
  EXPECT_THROW(thc::audit::low_codegree_check(Hypergraph3::complete(5), g, VertexSet(5, {0, 2}), 2, 1), thc::Error);
  EXPECT_THROW(thc::audit::low_codegree_check(Hypergraph3::complete(6), g, VertexSet(5, {0, 2}), 1, 1), thc::Error);
}

}  // namespace
