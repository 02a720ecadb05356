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

// "H3 v1" text format:
//
//   n m
//   a b c        (m lines, 0-indexed, whitespace separated)
//
// Readers accept triples in any order and ignore duplicates. The writer
// emits canonical ascending triples in lexicographic order, one per line.

#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "thc/hypergraph.hpp"

namespace thc::io {

inline Hypergraph3 read_h3(std::istream& in) {
  long long n = -1, m = -1;
  if (!(in >> n >> m) || n < 0 || m < 0) throw Error("H3: malformed header, expected 'n m'");
  std::vector<Triple> ts;
  ts.reserve(static_cast<std::size_t>(m));
  for (long long i = 0; i < m; ++i) {
    long long a, b, c;
    if (!(in >> a >> b >> c)) throw Error("H3: expected " + std::to_string(m) + " triples, got " + std::to_string(i));
    if (a < 0 || b < 0 || c < 0 || a >= n || b >= n || c >= n)
      throw Error("H3: vertex out of range on triple " + std::to_string(i));
    ts.push_back({static_cast<Vertex>(a), static_cast<Vertex>(b), static_cast<Vertex>(c)});
  }
  return Hypergraph3::from_triples(static_cast<std::size_t>(n), ts);
}

inline void write_h3(std::ostream& out, const Hypergraph3& h) {
  out << h.n() << ' ' << h.num_edges() << '\n';
  for (const Triple& t : h.edges()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

inline std::string to_h3_string(const Hypergraph3& h) {
  std::ostringstream os;
  write_h3(os, h);
  return os.str();
}

inline Hypergraph3 load_h3(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_h3(in);
}

inline void save_h3(const std::string& path, const Hypergraph3& h) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  write_h3(out, h);
}

/// Whitespace-separated vertex list (cycle files, vertex-set files).
inline std::vector<Vertex> read_vertices(std::istream& in) {
  std::vector<Vertex> out;
  long long v;
  while (in >> v) {
    if (v < 0) throw Error("negative vertex id");
    out.push_back(static_cast<Vertex>(v));
  }
  if (!in.eof()) throw Error("malformed vertex list");
  return out;
}

inline std::vector<Vertex> load_vertices(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read_vertices(in);
}

inline void write_vertices(std::ostream& out, std::span<const Vertex> vs) {
  for (std::size_t i = 0; i < vs.size(); ++i) out << (i ? " " : "") << vs[i];
  out << '\n';
}

}  // namespace thc::io
