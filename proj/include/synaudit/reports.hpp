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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "synaudit/attacks.hpp"
#include "synaudit/threat_model.hpp"

namespace synaudit {

// Per-sample outcome of one attack on one test sample.
struct SampleOutcome {
  int label = 0;
  std::vector<double> scores;
  size_t decision = 0;
};

struct AttackResult {
  std::string attack_name;
  size_t n_cat = 2;
  double base_rate = 0.5;
  std::vector<SampleOutcome> samples;
};

struct ClassRates {
  double tpr = 0.0;
  double fpr = 0.0;
};

struct Metrics {
  double accuracy = 0.0;
  std::vector<ClassRates> per_class;
  std::optional<double> auc;  // binary goals with both classes present
  double privacy_gain = 0.0;
};

// privacy_gain = 1 - max(0, (accuracy - base_rate) / (1 - base_rate)):
// 1 means no advantage over the base rate, 0 means a perfect attack.
inline constexpr const char* kPrivacyGainFormula =
    "1 - max(0, (accuracy - base_rate) / (1 - base_rate))";

struct ROCPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;
};

// Points ordered from (0,0) at threshold +inf to (1,1) at -inf; fpr and tpr
// are non-decreasing along the curve.
struct ROCCurve {
  std::vector<ROCPoint> points;
  // Trapezoidal area under the polyline; equals the Mann-Whitney AUC.
  double area() const;
};

struct BinomialInterval {
  double lo = 0.0;
  double hi = 1.0;
};

struct EffEpsReport {
  std::string attack;
  double threshold = 0.0;
  double delta = 0.0;
  double confidence = 0.95;
  int64_t tp = 0, fn = 0, fp = 0, tn = 0;  // held-out counts at the frozen rule
  size_t n_select = 0;
  size_t n_holdout = 0;
  double eps_point = 0.0;
  double eps_lo = 0.0;
  // Mirror construction from (TP_hi, FP_lo); informational only, the
  // estimation procedure itself only certifies the lower bound.
  double eps_hi_heuristic = 0.0;
};

// Generates n_test samples once (seeded, shared across attacks), scores and
// decides each with every attack. Output is identical for any thread count.
std::vector<AttackResult> evaluate(const std::vector<AttackPtr>& attacks, const ThreatModel& tm,
                                   size_t n_test, uint64_t master_seed, unsigned threads = 1);

Metrics compute_metrics(const AttackResult& result);

// Mann-Whitney AUC of positive-class scores against binary labels; ties
// count one half. Errors unless both classes are present.
double auc(std::span<const double> scores, std::span<const int> labels);

ROCCurve roc_curve(std::span<const double> scores, std::span<const int> labels);

// log max( (tp - delta)/fp , (1 - fp - delta)/(1 - tp) ), floored at 0.
// A ratio with nonpositive numerator contributes nothing; a positive
// numerator over a zero denominator gives +inf. Total for all inputs.
double eff_epsilon_point(double tp, double fp, double delta);

// Exact (Clopper-Pearson) two-sided binomial confidence interval at level
// 1 - alpha, computed by bisection on the exact binomial tail.
BinomialInterval clopper_pearson(int64_t successes, int64_t trials, double alpha);

// Splits the shared test samples select_fraction/rest by a seeded shuffle,
// greedily picks the (attack, threshold) maximizing the empirical epsilon
// point estimate on the selection split, then certifies a lower bound on
// the remaining samples via Clopper-Pearson bounds (Bonferroni-split alpha
// across the TP and FP intervals). Requires a binary goal and >= 20
// samples.
EffEpsReport estimate_eff_epsilon(const std::vector<AttackResult>& results, double delta,
                                  double confidence = 0.95, double select_fraction = 0.10,
                                  uint64_t seed = 0);

// Standalone SVG with unit axes, the 45-degree random baseline, one
// polyline per curve and a legend carrying AUC values.
void render_roc_svg(const std::vector<std::pair<std::string, ROCCurve>>& curves,
                    const std::string& path);

// Scores table with columns
//   sample_index,attack,label,score_0..score_{n_cat-1},decision
// one row per (sample, attack). Doubles round-trip exactly.
void write_scores_csv(const std::vector<AttackResult>& results, const std::string& path);
std::vector<AttackResult> load_scores_csv(const std::string& path);

void write_json_file(const nlohmann::ordered_json& doc, const std::string& path);

nlohmann::ordered_json metrics_to_json(const Metrics& metrics);
nlohmann::ordered_json eff_eps_to_json(const EffEpsReport& report);

}  // namespace synaudit
