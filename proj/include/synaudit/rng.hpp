// Copyright 2026 The Synaudit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
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
#include <string_view>
#include <vector>

namespace synaudit {

// splitmix64 step: advances `state` and returns a mixed output word.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives an independent stream seed from (master, tag, index). Every
// randomized stage keys its per-item streams through this, so results do
// not depend on thread scheduling or evaluation order.
uint64_t derive_seed(uint64_t master, std::string_view tag, uint64_t index = 0);

// xoshiro256** generator. All randomness in the toolkit flows through an
// explicit Rng; there is no hidden global state. Distribution helpers are
// hand-rolled so outputs are identical across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform double in [0, 1).
  double uniform_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), unbiased. n must be >= 1.
  uint64_t uniform_int(uint64_t n);

  bool bernoulli(double p) { return uniform_double() < p; }

  // Laplace(0, scale) via the difference of two exponentials.
  double laplace(double scale) {
    double u1 = 1.0 - uniform_double();  // (0, 1]
    double u2 = 1.0 - uniform_double();
    return scale * (std::log(u1) - std::log(u2));
  }

  // Index draw from an unnormalized weight vector.
  size_t categorical(std::span<const double> weights);

  // k distinct indices drawn uniformly from [0, n), in selection order.
  std::vector<size_t> sample_indices(size_t n, size_t k);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      size_t j = uniform_int(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  uint64_t state_[4];
};

}  // namespace synaudit
