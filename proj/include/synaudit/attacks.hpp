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
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "synaudit/data.hpp"
#include "synaudit/learners.hpp"
#include "synaudit/threat_model.hpp"

namespace synaudit {

// --- set feature maps -------------------------------------------------------
//
// Fixed functions summarizing a whole dataset as a real vector, composed
// with a classical classifier inside shadow-modeling attacks. All maps are
// invariant to row permutations and have a fixed output length per schema.

class FeatureMap {
 public:
  virtual ~FeatureMap() = default;
  virtual std::vector<double> extract(const Dataset& dataset) const = 0;
  virtual std::string name() const = 0;
};

using FeatureMapPtr = std::shared_ptr<const FeatureMap>;

// Per attribute: its one-hot column means, the count of distinct values
// present, and the normalized entropy of its marginal. The categorical
// analogue of mean/median/variance summaries.
FeatureMapPtr naive_stats_features();

// All k marginal histograms, each normalized to sum 1.
FeatureMapPtr histogram_features();

// Upper triangle (excluding the diagonal) of the Pearson correlation matrix
// of the one-hot columns; zero-variance columns contribute 0. Needs at
// least 2 rows.
FeatureMapPtr correlation_features();

// Targeted counting queries: entry (t, j) is the fraction of rows matching
// target t on the j-th frozen attribute subset. Subsets are drawn once at
// construction (sizes uniform in subset_size_range) and reused for every
// extraction, so train- and score-time features line up.
FeatureMapPtr random_query_features(const Schema& schema, std::vector<Record> targets,
                                    size_t n_queries,
                                    std::pair<size_t, size_t> subset_size_range, uint64_t seed);

// Same map with explicit subsets (used by tests and callers that want full
// control).
FeatureMapPtr random_query_features(std::vector<Record> targets,
                                    std::vector<std::vector<size_t>> subsets);

FeatureMapPtr concat_features(std::vector<FeatureMapPtr> parts);

// --- attacks ------------------------------------------------------------------

using RecordDistance = std::function<double(const Record&, const Record&)>;

RecordDistance hamming_distance();

// A trainable scorer mapping a synthetic dataset to one score per decision
// (higher = more likely). decide() defaults to argmax with lowest-index
// tie-breaking; binary attacks with a threshold decide positive when the
// positive-class score reaches it.
class Attack {
 public:
  Attack(std::string name, size_t n_cat) : name_(std::move(name)), n_cat_(n_cat) {}
  virtual ~Attack() = default;

  const std::string& name() const { return name_; }
  void rename(std::string name) { name_ = std::move(name); }
  size_t n_cat() const { return n_cat_; }

  // True when the attack cannot score without training samples (and is
  // therefore unusable under no-box knowledge).
  virtual bool needs_training() const { return false; }

  virtual void train(std::span<const LabeledSample> samples) = 0;
  virtual std::vector<double> score(const Dataset& synthetic) const = 0;
  virtual size_t decide(std::span<const double> scores) const;

 private:
  std::string name_;
  size_t n_cat_;
};

using AttackPtr = std::shared_ptr<Attack>;

size_t argmax_lowest(std::span<const double> values);

enum class LearnerKind { kLogistic, kRandomForest };

// Shadow-modeling attack: extract features from each training sample's
// synthetic dataset and fit a classifier to predict the sample label;
// scoring runs the same feature map plus classifier on a fresh synthetic
// dataset. Requires at least two distinct labels to train.
AttackPtr shadow_attack(std::string name, FeatureMapPtr features, LearnerKind learner,
                        size_t n_cat, uint64_t seed, LogisticParams logistic_params = {},
                        ForestParams forest_params = {});

// Membership score = -min distance from the target to any synthetic row
// (0 exactly when the target appears verbatim, -inf on an empty dataset).
// Generalizes the direct lookup attack; with no threshold configured the
// decision rule is lookup (score >= 0). train() fits the threshold by
// maximizing training accuracy unless one was configured explicitly.
AttackPtr closest_distance_mia(Record target, std::optional<double> threshold = std::nullopt,
                               RecordDistance distance = hamming_distance());

// Attribute-inference variant: score for value v = -min distance to the
// record completed with v.
AttackPtr closest_distance_aia(Record partial, size_t attr, SchemaPtr schema,
                               RecordDistance distance = hamming_distance());

// Fits an add-lambda-smoothed product-of-marginals density to the synthetic
// dataset at score time; the membership score is the density at the target.
// Needs no training samples; train() fits an optional decision threshold.
AttackPtr density_mia(Record target, double smoothing = 1.0,
                      std::optional<double> threshold = std::nullopt);

// Correct-attribution attack: at score time, trains a classifier on the
// synthetic rows to predict the sensitive attribute from the others and
// scores the target's completions. Synthetic data must have >= 2 rows.
AttackPtr cap_aia(Record partial, size_t attr, SchemaPtr schema,
                  LearnerKind learner = LearnerKind::kRandomForest,
                  ForestParams forest_params = {}, LogisticParams logistic_params = {},
                  uint64_t seed = 0);

// Uninformed baseline emitting a uniform score vector.
AttackPtr constant_attack(size_t n_cat);

// --- registry -------------------------------------------------------------
//
// Attack construction by name for the CLI config. Parameter objects are
// JSON; unknown names or parameters raise Error.

const std::vector<std::string>& registered_attack_names();

AttackPtr make_attack(const std::string& name, const nlohmann::json& params,
                      const ThreatModel& tm, uint64_t seed);

// Static checks for a registry entry (name, parameter keys and types, goal
// compatibility) without constructing the attack. Returns every problem
// found; empty means the entry is well-formed.
std::vector<std::string> check_attack_spec(const std::string& name,
                                           const nlohmann::json& params, bool goal_is_mia);

// True for attacks that cannot score without training samples.
bool attack_requires_training(const std::string& name);

}  // namespace synaudit
