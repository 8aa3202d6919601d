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

#include "synaudit/rng.hpp"

#include <numeric>

#include "synaudit/common.hpp"

namespace synaudit {

uint64_t derive_seed(uint64_t master, std::string_view tag, uint64_t index) {
  // FNV-1a over the tag, then two splitmix rounds folding in master and index.
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : tag) h = (h ^ c) * 1099511628211ULL;
  uint64_t state = master;
  uint64_t mixed = splitmix64(state);
  state = mixed ^ h;
  mixed = splitmix64(state);
  state = mixed ^ index;
  return splitmix64(state);
}

uint64_t Rng::uniform_int(uint64_t n) {
  if (n == 0) throw Error("uniform_int: n must be >= 1");
  // Rejection sampling to remove modulo bias.
  const uint64_t threshold = (0 - n) % n;
  for (;;) {
    uint64_t r = next_u64();
    if (r >= threshold) return r % n;
  }
}

size_t Rng::categorical(std::span<const double> weights) {
  if (weights.empty()) throw Error("categorical: empty weight vector");
  double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(total > 0.0)) throw Error("categorical: weights must have positive sum");
  double u = uniform_double() * total;
  double cum = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    cum += weights[i];
    if (u < cum) return i;
  }
  return weights.size() - 1;
}

std::vector<size_t> Rng::sample_indices(size_t n, size_t k) {
  if (k > n) throw Error("sample_indices: k exceeds n");
  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), size_t{0});
  for (size_t i = 0; i < k; ++i) {
    size_t j = i + uniform_int(n - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(k);
  return idx;
}

}  // namespace synaudit
