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

#include <limits>

#include "oracles.hpp"
#include "thc/gen.hpp"
#include "thc/reservoir.hpp"

namespace {

using thc::Hypergraph3;
using thc::Vertex;
using thc::VertexSet;
namespace rs = thc::reservoir;

// Independent recomputation of the certified minimum: over all pairs with a
// beta-edge, the number of members z completing a beta-edge with the pair.
std::size_t brute_min(const oracle::Raw& raw, double beta, const VertexSet& r) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (Vertex a = 0; a < raw.n; ++a)
    for (Vertex b = a + 1; b < raw.n; ++b) {
      std::size_t all = 0, in = 0;
      for (Vertex z = 0; z < raw.n; ++z)
        if (oracle::beta_edge(raw, a, b, z, beta)) {
          ++all;
          in += r.contains(z);
        }
      if (all > 0) best = std::min(best, in);
    }
  return best;
}

VertexSet first_k(std::size_t n, std::size_t k) {
  VertexSet s(n);
  for (Vertex v = 0; v < k; ++v) s.insert(v);
  return s;
}

TEST(Reservoir, SizeRounding) {
  EXPECT_EQ(rs::reservoir_size(0.3, 30), 9u);
  EXPECT_EQ(rs::reservoir_size(0.25, 100), 25u);
  EXPECT_EQ(rs::reservoir_size(0.01, 150), 2u);
  EXPECT_EQ(rs::reservoir_size(1.0, 7), 7u);
}

TEST(Reservoir, CompleteAnySampleWorks) {
  const auto res = rs::sample_reservoir(Hypergraph3::complete(30), 0.5, 0.3, VertexSet(30), 1);
  EXPECT_EQ(res.members.size(), 9u);
  EXPECT_EQ(res.retries_used, 0u);
  EXPECT_DOUBLE_EQ(res.threshold, 1.125);
  ASSERT_TRUE(res.certified_min.has_value());
  EXPECT_GE(*res.certified_min, 7u);
  EXPECT_EQ(*res.certified_min, brute_min(oracle::from_h3(Hypergraph3::complete(30)), 0.5, res.members));
}

TEST(Reservoir, OversizeThrows) {
  const auto h = Hypergraph3::complete(20);
  // 19 of 20 available would need nu n > n - |A|.
  EXPECT_THROW(rs::sample_reservoir(h, 0.5, 0.96, first_k(20, 4), 1), thc::Error);
  EXPECT_THROW(rs::sample_reservoir(h, 0.5, 0.0, VertexSet(20), 1), thc::Error);
  EXPECT_THROW(rs::sample_reservoir(h, 0.5, 1.5, VertexSet(20), 1), thc::Error);
}

TEST(Reservoir, ExcludedTooLargeThrows) {
  EXPECT_THROW(rs::sample_reservoir(Hypergraph3::complete(20), 0.5, 0.2, first_k(20, 5), 1), thc::Error);
}

TEST(Reservoir, EmptyBetaGraphThrows) {
  EXPECT_THROW(rs::sample_reservoir(Hypergraph3::from_triples(20, {}), 0.2, 0.2, VertexSet(20), 1), thc::Error);
}

TEST(Reservoir, RandomCertifiedWithinThreeRetries) {
  const auto h = thc::gen::random(100, 0.5, 11);
  const VertexSet a = first_k(100, 10);
  std::size_t ok = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    try {
      const auto res = rs::sample_reservoir(h, 0.2, 0.25, a, s, 3);
      EXPECT_EQ(res.members.size(), 25u);
      EXPECT_TRUE((res.members & a).empty());
      ++ok;
    } catch (const thc::RetriesExhausted&) {
    }
  }
  EXPECT_GE(ok, 19u);
}

TEST(Reservoir, CertifiedMinMatchesIndependentPass) {
  std::mt19937_64 rng(5);
  for (int it = 0; it < 20; ++it) {
    const std::size_t n = 16 + rng() % 10;
    const auto raw = oracle::random_raw(n, 0.6, rng);
    const auto h = raw.build();
    const double beta = 0.2;
    try {
      const auto res = rs::sample_reservoir(h, beta, 0.4, VertexSet(n), rng(), 50);
      ASSERT_TRUE(res.certified_min.has_value());
      EXPECT_EQ(*res.certified_min, brute_min(raw, beta, res.members)) << "it " << it;
      EXPECT_GE(static_cast<double>(*res.certified_min) + 1e-9, res.threshold);
    } catch (const thc::RetriesExhausted&) {
      ADD_FAILURE() << "not certified at it " << it;
    }
  }
}

TEST(Reservoir, RetriesExhaustedNamesWorstPair) {
  // Two reservoir vertices in a sparse host leave some relevant pair with
  // no co-neighbour inside R.
  const auto h = thc::gen::random(40, 0.3, 2);
  try {
    rs::sample_reservoir(h, 0.05, 0.05, VertexSet(40), 3, 2);
    FAIL() << "expected RetriesExhausted";
  } catch (const thc::RetriesExhausted& e) {
    EXPECT_NE(std::string(e.what()).find("pair {"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("3 attempts"), std::string::npos);
  }
}

TEST(Reservoir, Deterministic) {
  const auto h = thc::gen::random(80, 0.5, 4);
  const auto a = rs::sample_reservoir(h, 0.2, 0.25, first_k(80, 8), 42);
  const auto b = rs::sample_reservoir(h, 0.2, 0.25, first_k(80, 8), 42, 20, 4);
  EXPECT_EQ(a.members.to_vector(), b.members.to_vector());
  EXPECT_EQ(a.certified_min, b.certified_min);
  EXPECT_EQ(a.retries_used, b.retries_used);
  EXPECT_EQ(a.worst_pair, b.worst_pair);
}

TEST(Reservoir, LargerNuExtendsSmaller) {
  // A dense host so that both draws certify on their first attempt, which
  // is where the prefix property applies.
  const auto h = thc::gen::random(60, 0.8, 8);
  const auto small = rs::sample_reservoir(h, 0.2, 0.2, VertexSet(60), 9);
  const auto big = rs::sample_reservoir(h, 0.2, 0.4, VertexSet(60), 9);
  ASSERT_EQ(small.retries_used, 0u);
  ASSERT_EQ(big.retries_used, 0u);
  EXPECT_TRUE(VertexSet(small.members).subtract(big.members).empty());
  // Per pair, the co-neighbourhood count inside R can only grow.
  const thc::BetaFilter f = thc::filter_beta(h, 0.2);
  for (const auto& [x, y] : f.relevant) {
    const auto nb = f.filtered.neighbors(x, y);
    EXPECT_LE(thc::bits::count_and(nb, small.members.bits()), thc::bits::count_and(nb, big.members.bits()));
  }
  EXPECT_LE(*small.certified_min, *big.certified_min);
}

}  // namespace
