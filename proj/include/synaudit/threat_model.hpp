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

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "synaudit/data.hpp"
#include "synaudit/generators.hpp"
#include "synaudit/rng.hpp"

namespace synaudit {

// --- attacker knowledge of the real dataset -------------------------------

// The attacker knows the real dataset is one of two neighbors: d_minus plus
// the target, or d_minus plus the replacement. This is the regime used to
// audit differential privacy guarantees.
struct ExactPrior {
  Dataset d_minus;
};

// The real dataset is a random subset of a larger population. Auxiliary and
// test partitions are disjoint row-index sets fixed at construction by a
// seeded shuffle, so training draws never share population rows with test
// draws.
class AuxiliaryPrior {
 public:
  static AuxiliaryPrior create(Dataset population, double aux_fraction, double test_fraction,
                               size_t n_real, uint64_t seed);

  const Dataset& population() const { return population_; }
  size_t n_real() const { return n_real_; }
  const std::vector<size_t>& aux_rows() const { return aux_rows_; }
  const std::vector<size_t>& test_rows() const { return test_rows_; }

  // Drops the given population rows from both partitions (used to remove
  // rows colliding with attribute-inference completions).
  void remove_rows_equal_to(const std::vector<Record>& records);

 private:
  AuxiliaryPrior(Dataset population, size_t n_real, std::vector<size_t> aux_rows,
                 std::vector<size_t> test_rows)
      : population_(std::move(population)), n_real_(n_real), aux_rows_(std::move(aux_rows)),
        test_rows_(std::move(test_rows)) {}

  Dataset population_;
  size_t n_real_ = 0;
  std::vector<size_t> aux_rows_;
  std::vector<size_t> test_rows_;
};

using DatasetPrior = std::variant<ExactPrior, AuxiliaryPrior>;

// --- attacker knowledge of the generator ----------------------------------

struct BlackBox {
  GeneratorPtr generator;
};

// Attacker knows nothing about the generator: the held generator is used by
// the evaluator to produce test samples, but requests for training samples
// are refused.
struct NoBox {
  GeneratorPtr generator;
};

struct UncertainBox {
  MetaParameterized meta;
};

using GeneratorKnowledge = std::variant<BlackBox, NoBox, UncertainBox>;

// --- attacker goal ---------------------------------------------------------

// Membership inference: is `target` in the real data? Decision set is
// {out, in} with labels 0/1. The replacement record substitutes for the
// target in the "out" worlds; p_in is the prior probability of membership
// (fixed at 1/2 under an exact prior).
struct MiaGoal {
  Record target;
  Record replacement;
  double p_in = 0.5;
};

// Attribute inference: which value of attribute `attr` completes `partial`
// in the real data? partial.values[attr] is ignored (conventionally -1) and
// the decision set is the attribute's value set, labels 0..l-1.
struct AiaGoal {
  Record partial;
  size_t attr = 0;
};

using AttackerGoal = std::variant<MiaGoal, AiaGoal>;

enum class Partition { kTrain, kTest };

// One simulated observation: the label the attacker must recover and the
// synthetic dataset they observe.
struct LabeledSample {
  int label = 0;
  Dataset synthetic;
};

// A threat model bundles the three attacker assumptions -- dataset prior,
// generator knowledge, goal -- plus the synthetic release size, and turns
// them into labeled (label, synthetic dataset) samples.
//
// Real-dataset construction per draw:
//   MIA, exact prior:     coin flip between d_minus + target (in) and
//                         d_minus + replacement (out).
//   MIA, auxiliary prior: base of n_real - 1 partition rows, then the
//                         target with probability p_in (in) else the
//                         replacement (out).
//   AIA, either prior:    a uniformly drawn sensitive value v completes the
//                         partial record; label = v. Population rows equal
//                         to any completion are removed from auxiliary
//                         partitions at construction so the planted record
//                         is the only source of signal.
// The target (or completion) is always inserted at row 0.
class ThreatModel {
 public:
  ThreatModel(DatasetPrior prior, GeneratorKnowledge knowledge, AttackerGoal goal,
              size_t n_synthetic);

  const Schema& schema() const { return *schema_; }
  const SchemaPtr& schema_ptr() const { return schema_; }
  const AttackerGoal& goal() const { return goal_; }
  const GeneratorKnowledge& knowledge() const { return knowledge_; }
  const DatasetPrior& prior() const { return prior_; }
  size_t n_synthetic() const { return n_synthetic_; }

  // Size of the decision set: 2 for MIA, |X_attr| for AIA.
  size_t n_cat() const;

  // Best success rate achievable without seeing the synthetic data:
  // max class prior, i.e. max(p_in, 1 - p_in) for MIA and 1/l for AIA.
  double base_rate() const;

  bool training_allowed() const { return !std::holds_alternative<NoBox>(knowledge_); }

  // The completed record for sensitive value v (AIA only).
  Record completion(size_t v) const;

  std::pair<Dataset, int> draw_real(Partition partition, Rng& rng) const;

  // count i.i.d. labeled samples. Per-sample seeds are derived as
  // hash(master_seed, partition, i), so output is identical for any worker
  // count. Training samples are refused under no-box knowledge.
  std::vector<LabeledSample> generate_samples(size_t count, Partition partition,
                                              uint64_t master_seed, unsigned threads = 1) const;

 private:
  Dataset insert_target(const Record& target, const std::vector<Record>& base) const;
  std::vector<Record> draw_base_rows(Partition partition, Rng& rng) const;

  DatasetPrior prior_;
  GeneratorKnowledge knowledge_;
  AttackerGoal goal_;
  size_t n_synthetic_;
  SchemaPtr schema_;
};

// Result of outlier target selection: the chosen record, its row index in
// the dataset, and its log-likelihood under independent empirical
// marginals.
struct OutlierTarget {
  Record record;
  size_t row_index = 0;
  double log_likelihood = 0.0;
};

// Scores a uniform sample of min(candidate_count, N) rows by
// sum_i log(marginal_i[v_i]) computed over the full dataset and returns the
// lowest-scoring one; ties break toward the lowest row index.
OutlierTarget select_outlier_target(const Dataset& dataset, size_t candidate_count, Rng& rng);

}  // namespace synaudit
