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
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace thc {

using Vertex = std::uint32_t;
using Word = std::uint64_t;
using Bits = std::span<const Word>;

inline constexpr std::size_t words_for(std::size_t n) { return (n + 63) / 64; }

namespace bits {

inline bool test(Bits b, Vertex v) { return (b[v >> 6] >> (v & 63)) & 1U; }

inline std::size_t count(Bits a) {
  std::size_t c = 0;
  for (Word w : a) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

inline std::size_t count_and(Bits a, Bits b) {
  std::size_t c = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    c += static_cast<std::size_t>(std::popcount(a[i] & b[i]));
  return c;
}

inline std::size_t count_and(Bits a, Bits b, Bits c) {
  std::size_t r = 0;
  for (std::size_t i = 0; i < a.size(); ++i)
    r += static_cast<std::size_t>(std::popcount(a[i] & b[i] & c[i]));
  return r;
}

inline bool intersects(Bits a, Bits b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] & b[i]) return true;
  return false;
}

/// Calls f(v) for every set bit, ascending.
template <class F>
void for_each(Bits a, F&& f) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    Word w = a[i];
    while (w) {
      const auto t = static_cast<Vertex>(std::countr_zero(w));
      f(static_cast<Vertex>(i * 64) + t);
      w &= w - 1;
    }
  }
}

/// Smallest set bit >= from, or `none` (== a.size()*64).
inline std::size_t next(Bits a, std::size_t from) {
  std::size_t i = from >> 6;
  if (i >= a.size()) return a.size() * 64;
  Word w = a[i] & (~Word{0} << (from & 63));
  while (true) {
    if (w) return i * 64 + static_cast<std::size_t>(std::countr_zero(w));
    if (++i >= a.size()) return a.size() * 64;
    w = a[i];
  }
}

}  // namespace bits

/// Fixed-universe vertex set over 0..n-1 with word-parallel operations.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::size_t n) : n_(n), words_(words_for(n), 0) {}
  VertexSet(std::size_t n, Bits b) : n_(n), words_(b.begin(), b.end()) {}
  VertexSet(std::size_t n, std::initializer_list<Vertex> vs) : VertexSet(n) {
    for (Vertex v : vs) insert(v);
  }
  template <class Range>
  static VertexSet of(std::size_t n, const Range& vs) {
    VertexSet s(n);
    for (auto v : vs) s.insert(static_cast<Vertex>(v));
    return s;
  }
  static VertexSet full(std::size_t n) {
    VertexSet s(n);
    for (std::size_t i = 0; i < n; ++i) s.insert(static_cast<Vertex>(i));
    return s;
  }

  std::size_t universe() const { return n_; }
  Bits bits() const { return words_; }
  std::span<Word> mutable_bits() { return words_; }

  bool contains(Vertex v) const { return v < n_ && bits::test(words_, v); }
  void insert(Vertex v) { words_[v >> 6] |= Word{1} << (v & 63); }
  void erase(Vertex v) { words_[v >> 6] &= ~(Word{1} << (v & 63)); }
  std::size_t size() const { return bits::count(words_); }
  bool empty() const {
    for (Word w : words_)
      if (w) return false;
    return true;
  }
  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  /// Smallest member, or universe() when empty.
  std::size_t first() const { return std::min(bits::next(words_, 0), n_); }
  std::size_t next(std::size_t from) const {
    return std::min(bits::next(words_, from), n_);
  }

  VertexSet& operator&=(Bits o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o[i];
    return *this;
  }
  VertexSet& operator|=(Bits o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o[i];
    return *this;
  }
  VertexSet& operator&=(const VertexSet& o) { return *this &= o.bits(); }
  VertexSet& operator|=(const VertexSet& o) { return *this |= o.bits(); }
  VertexSet& subtract(Bits o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o[i];
    return *this;
  }
  VertexSet& subtract(const VertexSet& o) { return subtract(o.bits()); }

  friend VertexSet operator&(VertexSet a, const VertexSet& b) { return a &= b; }
  friend VertexSet operator|(VertexSet a, const VertexSet& b) { return a |= b; }

  VertexSet complement() const {
    VertexSet c = full(n_);
    c.subtract(*this);
    return c;
  }

  template <class F>
  void for_each(F&& f) const {
    bits::for_each(words_, std::forward<F>(f));
  }

  std::vector<Vertex> to_vector() const {
    std::vector<Vertex> out;
    out.reserve(size());
    for_each([&](Vertex v) { out.push_back(v); });
    return out;
  }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Word> words_;
};

}  // namespace thc
