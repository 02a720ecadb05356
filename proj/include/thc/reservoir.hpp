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
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "thc/hypergraph.hpp"
#include "thc/parallel.hpp"
#include "thc/rng.hpp"

namespace thc::reservoir {

struct Reservoir {
  VertexSet members;
  double nu = 0.0;
  /// min over beta-relevant pairs of |N_{H_beta}(x,y) & R|; absent when H_beta
  /// has no edges.
  std::optional<std::size_t> certified_min;
  Pair worst_pair{0, 0};
  double threshold = 0.0;  ///< beta * nu * n / 4
  std::size_t retries_used = 0;
};

/// ceil(nu * n), ignoring the rounding error of the product.
inline std::size_t reservoir_size(double nu, std::size_t n) {
  const double t = nu * static_cast<double>(n);
  return static_cast<std::size_t>(std::ceil(t - 1e-9 * std::max(1.0, t)));
}

/// Exact min over the pairs of |N_{hb}(x,y) & r| and the pair attaining it.
inline std::pair<std::optional<std::size_t>, Pair> min_coneighbors_in(const Hypergraph3& hb,
                                                                       std::span<const Pair> pairs,
                                                                       const VertexSet& r,
                                                                       std::size_t threads = 1) {
  std::vector<std::size_t> val(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t i) {
    val[i] = bits::count_and(hb.neighbors(pairs[i].first, pairs[i].second), r.bits());
  });
  if (val.empty()) return {std::nullopt, Pair{0, 0}};
  const auto it = std::min_element(val.begin(), val.end());
  return {*it, pairs[static_cast<std::size_t>(it - val.begin())]};
}

/// Uniform ceil(nu n)-subset of V \ A whose every beta-relevant pair keeps at
/// least beta nu n / 4 of its H_beta co-neighbourhood, verified exactly.
/// Attempt k draws from substream k, and within an attempt the sample is the
/// prefix of a seeded shuffle, so a larger nu extends a smaller one.
inline Reservoir sample_reservoir(const Hypergraph3& h, double beta, double nu, const VertexSet& excluded,
                                  std::uint64_t seed, std::size_t max_retries = 20,
                                  std::size_t threads = 1) {
  const std::size_t n = h.n();
  if (!(nu > 0.0 && nu <= 1.0)) throw Error("nu must lie in (0,1]");
  if (4 * excluded.size() >= n && !excluded.empty()) throw Error("excluded set must have fewer than n/4 vertices");
  const std::size_t k = reservoir_size(nu, n);
  std::vector<Vertex> pool;
  for (Vertex v = 0; v < n; ++v)
    if (!excluded.contains(v)) pool.push_back(v);
  if (k > pool.size())
    throw Error("reservoir of size " + std::to_string(k) + " exceeds the " + std::to_string(pool.size()) +
                " available vertices");
  const BetaFilter f = filter_beta(h, beta);
  if (f.relevant.empty()) throw Error("H_beta has no edges");

  Reservoir res;
  res.nu = nu;
  res.threshold = beta * nu * static_cast<double>(n) / 4;
  const std::uint64_t base = substream_seed(seed, streams::kReservoir);
  for (std::size_t attempt = 0;; ++attempt) {
    std::vector<Vertex> order = pool;
    Rng rng(base, attempt);
    rng.partial_shuffle(std::span<Vertex>(order), k);
    res.members = VertexSet(n);
    for (std::size_t i = 0; i < k; ++i) res.members.insert(order[i]);
    res.retries_used = attempt;
    const auto [mn, worst] = min_coneighbors_in(f.filtered, f.relevant, res.members, threads);
    res.certified_min = mn;
    res.worst_pair = worst;
    if (!below_threshold(static_cast<double>(*mn), 1.0, res.threshold)) return res;
    if (attempt >= max_retries)
      throw RetriesExhausted("reservoir not certified after " + std::to_string(attempt + 1) + " attempts: pair {" +
                  std::to_string(worst.first) + "," + std::to_string(worst.second) + "} keeps " +
                  std::to_string(*mn) + " < " + std::to_string(res.threshold));
  }
}

}  // namespace thc::reservoir
