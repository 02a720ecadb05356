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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "thc/hypergraph.hpp"

namespace thc {

/// Vertex sequence of a tight path: every three consecutive vertices form
/// an edge. Validity is relative to a host hypergraph, see validate_tight.
struct TightPath {
  std::vector<Vertex> vertices;

  std::size_t size() const { return vertices.size(); }
  Pair front() const { return {vertices[0], vertices[1]}; }
  /// Last two vertices in path order (second-to-last, last).
  Pair back() const { return {vertices[vertices.size() - 2], vertices.back()}; }
  TightPath reversed() const { return TightPath{{vertices.rbegin(), vertices.rend()}}; }
  friend bool operator==(const TightPath&, const TightPath&) = default;
};

/// Cyclic vertex order; consecutive triples wrap around.
struct TightCycle {
  std::vector<Vertex> vertices;
  friend bool operator==(const TightCycle&, const TightCycle&) = default;
};

enum class TightMode { kPath, kCycle };

struct TightVerdict {
  bool valid = false;
  /// For edge failures: index i of the first triple (s[i], s[i+1], s[i+2])
  /// that is not an edge. For other failures: the offending position.
  std::optional<std::size_t> violation;
  std::string reason;
  explicit operator bool() const { return valid; }
};

/// Exact tightness check. With `hamilton` set the sequence must also list
/// every vertex of H exactly once.
inline TightVerdict validate_tight(const Hypergraph3& h, std::span<const Vertex> seq,
                                   TightMode mode, bool hamilton = false) {
  const std::size_t k = seq.size();
  if (k < 3) return {false, std::nullopt, "sequence shorter than 3"};
  std::vector<bool> seen(h.n(), false);
  for (std::size_t i = 0; i < k; ++i) {
    if (seq[i] >= h.n()) return {false, i, "vertex out of range"};
    if (seen[seq[i]]) return {false, i, "repeated vertex " + std::to_string(seq[i])};
    seen[seq[i]] = true;
  }
  if (hamilton && k != h.n())
    return {false, std::nullopt,
            "covers " + std::to_string(k) + " of " + std::to_string(h.n()) + " vertices"};
  const std::size_t triples = mode == TightMode::kCycle ? k : k - 2;
  for (std::size_t i = 0; i < triples; ++i) {
    const Vertex a = seq[i], b = seq[(i + 1) % k], c = seq[(i + 2) % k];
    if (!h.has_edge(a, b, c))
      return {false, i,
              "triple (" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) +
                  ") is not an edge"};
  }
  return {true, std::nullopt, ""};
}

inline TightVerdict validate_tight(const Hypergraph3& h, const TightPath& p) {
  return validate_tight(h, p.vertices, TightMode::kPath);
}

inline TightVerdict validate_hamilton(const Hypergraph3& h, const TightCycle& c) {
  return validate_tight(h, c.vertices, TightMode::kCycle, true);
}

}  // namespace thc
