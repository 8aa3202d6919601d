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

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "synaudit/data.hpp"
#include "synaudit/rng.hpp"

namespace synaudit {

// A synthetic data generator: a randomized map from a real dataset to a
// synthetic one. Implementations fit whatever model they use inside
// generate() and then sample n_out rows, so each call is a fresh
// train-and-sample run. Contract for every implementation:
//   - output schema equals input schema,
//   - output has exactly n_out rows,
//   - output is deterministic given (real, n_out, rng seed).
class Generator {
 public:
  virtual ~Generator() = default;
  virtual Dataset generate(const Dataset& real, size_t n_out, Rng& rng) const = 0;
  virtual std::string descriptor() const = 0;
};

using GeneratorPtr = std::shared_ptr<const Generator>;

enum class RawMode { kCopy, kBootstrap };

// Worst-case non-private baseline. Copy mode returns the first n_out rows
// of the real data (errors when n_out exceeds it); bootstrap mode samples
// rows uniformly with replacement.
GeneratorPtr raw_generator(RawMode mode);

// Fits one histogram per attribute and samples records attribute-wise
// independently. With epsilon set, each count receives i.i.d. Laplace
// noise of scale k/epsilon before sampling: adding or removing one record
// changes one cell in each of the k histograms by 1, so the full release
// has L1 sensitivity k and the fitted model is epsilon-DP. Negative noisy
// counts are clamped to zero and each histogram renormalized, falling back
// to uniform if everything clamps away.
GeneratorPtr independent_marginals_generator(std::optional<double> epsilon);

// First-order chain model p(x_1) * prod p(x_i | x_{i-1}) along `order`
// (default: schema order), sampled ancestrally. The noise budget argument
// is the same as for independent marginals: one record touches one cell in
// each of the k count tables, so every cell gets Laplace(k/epsilon) noise,
// with clamp-and-renormalize applied per conditioning context.
GeneratorPtr chain_bayes_generator(std::optional<double> epsilon,
                                   std::optional<std::vector<size_t>> order = std::nullopt);

// Wraps an external command implementing the subprocess contract:
//
//   <command...> --input <csv> --schema <json> --output <csv>
//                --size <n_out> --seed <u64>
//
// The real data is written to a fresh temp directory under `workdir`
// (default: $SYNTH_AUDIT_TMPDIR or the system temp dir), the command runs
// with stdout/stderr captured, and the output CSV is loaded against the
// input schema. Temp files are removed on success and retained on failure.
// Determinism is the subprocess's responsibility; the seed is passed but
// not enforced.
GeneratorPtr external_generator(std::vector<std::string> command, std::string workdir = "",
                                double timeout_seconds = 300.0);

// A generator family indexed by a numeric meta-parameter, together with a
// prior over that parameter: either a finite list of (value, probability)
// atoms or a uniform range.
struct MetaParameterized {
  std::string family_name;
  std::function<GeneratorPtr(double)> family;
  std::vector<std::pair<double, double>> atoms;             // (gamma, probability)
  std::optional<std::pair<double, double>> uniform_range;   // [lo, hi)
};

// Throws unless exactly one prior form is set and finite atom
// probabilities are nonnegative and sum to 1 within 1e-9.
void validate_meta(const MetaParameterized& mp);

// Draws gamma from the prior and instantiates the family at it.
std::pair<double, GeneratorPtr> sample_meta(const MetaParameterized& mp, Rng& rng);

}  // namespace synaudit
