// Copyright 2026 the rebit-wigner authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef REBIT_RNG_HPP
#define REBIT_RNG_HPP

#include <cstdint>

namespace rebit {

/// Counter-based splittable generator. Every draw is a pure function of
/// (seed, stream, counter), so independent streams for parallel sampling are
/// just different stream ids and identical seeds replay identical traces.
class Rng {
 public:
  explicit Rng(uint64_t seed, uint64_t stream = 0)
      : state_(mix(seed ^ mix(stream + 0x9e3779b97f4a7c15ull))) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  /// Uniform double in [0, 1).
  double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

  bool next_bool() { return next_u64() >> 63; }

  /// Uniform integer in [0, bound).
  uint64_t next_below(uint64_t bound) {
    // Bounded rejection keeps the distribution exactly uniform.
    uint64_t threshold = -bound % bound;
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  /// Derive an independent stream for sample `index`.
  Rng split(uint64_t index) const { return Rng(mix(state_ ^ mix(index + 1)), index); }

  static uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  uint64_t state_;
};

}  // namespace rebit

#endif  // REBIT_RNG_HPP
