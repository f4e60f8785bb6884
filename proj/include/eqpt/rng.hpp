// Copyright 2026 The eqpt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Portable random streams.
//
// std::uniform_real_distribution is implementation-defined, so doubles are
// produced from raw 64-bit words here. Two sources are used:
//   * std::mt19937_64 for sequential draws (its output sequence is fixed by the standard);
//   * a counter-based SplitMix64 hash for keyed draws, where each (seed, stream, counter)
//     triple maps to one word. Noise models key one stream per matrix entry, so results do
//     not depend on visiting order or on how work is split across threads.

#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace eqpt::rng {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Order-sensitive combination of several 64-bit keys into one seed.
constexpr std::uint64_t hash_combine(std::initializer_list<std::uint64_t> keys) noexcept {
  std::uint64_t h = 0x6a09e667f3bcc909ULL;
  for (std::uint64_t k : keys) h = mix64(h ^ mix64(k));
  return h;
}

/// Uniform double in [0, 1) from the top 53 bits of a word.
constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Keyed generator: draw(stream, k) is a pure function of (seed, stream, k).
class CounterStream {
 public:
  explicit constexpr CounterStream(std::uint64_t seed) noexcept : key_(mix64(seed)) {}

  constexpr std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const noexcept {
    return mix64(key_ ^ mix64(stream * 0xd1b54a32d192ed03ULL + counter));
  }

  /// Uniform on [lo, hi).
  constexpr double uniform(std::uint64_t stream, std::uint64_t counter, double lo,
                           double hi) const noexcept {
    return lo + (hi - lo) * to_unit(bits(stream, counter));
  }

 private:
  std::uint64_t key_;
};

/// Sequential generator wrapping mt19937_64 with a portable uniform mapping.
class SequentialStream {
 public:
  explicit SequentialStream(std::uint64_t seed) : engine_(seed) {}

  double uniform01() { return to_unit(engine_()); }

  /// Standard normal via Box-Muller (used only by the complex-Ginibre mode).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    spare_ = r * std::sin(two_pi * u2);
    has_spare_ = true;
    return r * std::cos(two_pi * u2);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace eqpt::rng
