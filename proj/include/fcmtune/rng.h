// Copyright 2026 The fcmtune Authors.
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
//
// Reproducible random streams.
//
// All randomness in fcmtune comes from std::mt19937_64, whose output
// sequence is fixed by the C++ standard, seeded through SplitMix64. Doubles
// are built from the top 53 bits of a draw, never through the
// implementation-defined <random> distributions, so a (seed, stream) pair
// yields the same values on every conforming platform.

#ifndef FCMTUNE_RNG_H_
#define FCMTUNE_RNG_H_

#include <cstdint>
#include <random>

namespace fcmtune {

inline uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed of independent stream `stream` under `base_seed`.
inline uint64_t DeriveSeed(uint64_t base_seed, uint64_t stream) {
  return SplitMix64(SplitMix64(base_seed) ^ SplitMix64(~stream));
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(SplitMix64(seed)) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform on [0, 1).
  double NextDouble() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on {0, ..., n - 1}; n > 0. Rejection sampling keeps it unbiased.
  uint64_t NextBelow(uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fcmtune

#endif  // FCMTUNE_RNG_H_
