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

#include <cmath>
#include <cstdint>
#include <span>
#include <utility>

namespace thc {

/// splitmix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for substream `stream` of a run seeded with `seed`.
///
/// Every randomized procedure in the library derives its generator from
/// (seed, stream) so that results never depend on call order or thread
/// count. Streams are tagged with small constants (see `streams` below)
/// or with an index such as a triple rank or retry number.
constexpr std::uint64_t substream_seed(std::uint64_t seed,
                                       std::uint64_t stream) {
  return mix64(mix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL +
                              0x8cb92ba72f3d8dd7ULL));
}

/// Counter-based uniform draw in [0,1): one value per (seed, stream, index).
/// Used where each item (e.g. each triple) needs its own independent coin.
constexpr double counter_uniform(std::uint64_t seed, std::uint64_t stream,
                                 std::uint64_t index) {
  const std::uint64_t x = mix64(substream_seed(seed, stream) ^ mix64(index));
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

namespace streams {
inline constexpr std::uint64_t kGenTriples = 0x11;
inline constexpr std::uint64_t kGenPairs = 0x12;
inline constexpr std::uint64_t kGenOrder = 0x13;
inline constexpr std::uint64_t kAuditWitness = 0x21;
inline constexpr std::uint64_t kFamily = 0x31;
inline constexpr std::uint64_t kReservoir = 0x41;
inline constexpr std::uint64_t kPartition = 0x51;
inline constexpr std::uint64_t kCover = 0x52;
inline constexpr std::uint64_t kPipeline = 0x61;
inline constexpr std::uint64_t kBench = 0x71;
}  // namespace streams

/// xoshiro256** seeded through splitmix64. Portable: all distributions
/// below are implemented here rather than taken from <random>, whose
/// distribution algorithms differ between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) {
      x += 0x9e3779b97f4a7c15ULL;
      s = mix64(x);
    }
  }
  Rng(std::uint64_t seed, std::uint64_t stream)
      : Rng(substream_seed(seed, stream)) {}

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform in [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, bound). Lemire's method with rejection.
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    unsigned __int128 m =
        static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(bound);
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next()) * static_cast<unsigned __int128>(bound);
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Binomial(trials, p) by sequential inversion. Intended for small means
  /// (the pmf at 0 must not underflow; means up to ~700 are fine).
  std::uint64_t binomial(double trials, double p) {
    if (p <= 0.0 || trials <= 0.0) return 0;
    if (p >= 1.0) return static_cast<std::uint64_t>(trials);
    const double u = uniform();
    double pmf = std::exp(trials * std::log1p(-p));
    double cdf = pmf;
    std::uint64_t k = 0;
    const double ratio = p / (1.0 - p);
    while (u >= cdf && static_cast<double>(k) < trials) {
      pmf *= (trials - static_cast<double>(k)) / static_cast<double>(k + 1) * ratio;
      ++k;
      cdf += pmf;
      // Past the mode with an underflowed pmf the cdf can no longer grow.
      if (pmf == 0.0 && static_cast<double>(k) > trials * p) break;
    }
    return k;
  }

  /// Fisher-Yates. Only the first `prefix` positions are randomized, and
  /// those positions depend only on the draws so far, so a longer prefix
  /// extends a shorter one when the generator state is the same.
  template <class T>
  void partial_shuffle(std::span<T> items, std::size_t prefix) {
    const std::size_t m = items.size();
    for (std::size_t i = 0; i < prefix && i + 1 < m; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(below(m - i));
      std::swap(items[i], items[j]);
    }
  }

  template <class T>
  void shuffle(std::span<T> items) {
    partial_shuffle(items, items.size());
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

}  // namespace thc
