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

#include <cstdint>
#include <optional>
#include <vector>

#include "thc/hypergraph.hpp"
#include "thc/tight.hpp"

namespace thc::exact {

struct SearchResult {
  std::optional<TightCycle> cycle;
  /// True when the search space was exhausted without a cycle.
  bool proven_absent = false;
  std::uint64_t nodes = 0;
};

/// Depth-first search for a tight Hamilton cycle through vertex 0, trying
/// successors in ascending order. Gives up after `budget` nodes.
inline SearchResult tight_hamilton_cycle(const Hypergraph3& h, std::uint64_t budget = 2'000'000) {
  const std::size_t n = h.n();
  SearchResult res;
  if (n < 3) {
    res.proven_absent = true;
    return res;
  }
  std::vector<Vertex> seq{0};
  VertexSet unused = VertexSet::full(n);
  unused.erase(0);
  bool out_of_budget = false;

  auto closes = [&] {
    return h.has_edge(seq[n - 2], seq[n - 1], seq[0]) && h.has_edge(seq[n - 1], seq[0], seq[1]);
  };
  // Returns true once a cycle is found.
  auto dfs = [&](auto&& self) -> bool {
    if (++res.nodes > budget) {
      out_of_budget = true;
      return false;
    }
    if (seq.size() == n) return closes();
    // The last vertex must close onto (0, seq[1]); prune once none remains.
    if (seq.size() >= 2 && !bits::intersects(unused.bits(), h.neighbors(0, seq[1]))) return false;
    VertexSet cand = unused;
    if (seq.size() >= 2) cand &= h.neighbors(seq[seq.size() - 2], seq.back());
    for (std::size_t v = cand.first(); v < n; v = cand.next(v + 1)) {
      const auto u = static_cast<Vertex>(v);
      seq.push_back(u);
      unused.erase(u);
      if (self(self)) return true;
      seq.pop_back();
      unused.insert(u);
      if (out_of_budget) return false;
    }
    return false;
  };
  if (dfs(dfs)) {
    res.cycle = TightCycle{seq};
  } else {
    res.proven_absent = !out_of_budget;
  }
  return res;
}

}  // namespace thc::exact
