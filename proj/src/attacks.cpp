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

#include "synaudit/attacks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "synaudit/common.hpp"

namespace synaudit {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_rows(const Dataset& d, size_t min_rows, const std::string& who) {
  if (d.size() < min_rows) {
    throw Error(who + ": synthetic dataset has " + std::to_string(d.size()) +
                " rows, need at least " + std::to_string(min_rows));
  }
}

void check_full_record(const Record& r, const Schema& schema, const std::string& who) {
  if (r.values.size() != schema.attribute_count()) {
    throw Error(who + ": record length does not match schema");
  }
  for (size_t i = 0; i < r.values.size(); ++i) {
    if (r.values[i] < 0 ||
        static_cast<size_t>(r.values[i]) >= schema.attribute(i).values.size()) {
      throw Error(who + ": value index out of range");
    }
  }
}

// --- feature maps -----------------------------------------------------------

class NaiveStatsFeatures : public FeatureMap {
 public:
  std::vector<double> extract(const Dataset& d) const override {
    require_rows(d, 1, "naive stats features");
    const Schema& schema = d.schema();
    const double n = static_cast<double>(d.size());
    std::vector<double> out;
    for (size_t a = 0; a < schema.attribute_count(); ++a) {
      std::vector<int64_t> counts = marginal_histogram(d, a);
      size_t distinct = 0;
      double entropy = 0.0;
      for (int64_t c : counts) {
        const double f = static_cast<double>(c) / n;
        out.push_back(f);  // one-hot column mean
        if (c > 0) {
          ++distinct;
          entropy -= f * std::log(f);
        }
      }
      const size_t card = counts.size();
      out.push_back(static_cast<double>(distinct));
      out.push_back(card > 1 ? entropy / std::log(static_cast<double>(card)) : 0.0);
    }
    return out;
  }
  std::string name() const override { return "naive-stats"; }
};

class HistogramFeatures : public FeatureMap {
 public:
  std::vector<double> extract(const Dataset& d) const override {
    require_rows(d, 1, "histogram features");
    const Schema& schema = d.schema();
    const double n = static_cast<double>(d.size());
    std::vector<double> out;
    out.reserve(schema.one_hot_width());
    for (size_t a = 0; a < schema.attribute_count(); ++a) {
      for (int64_t c : marginal_histogram(d, a)) {
        out.push_back(static_cast<double>(c) / n);
      }
    }
    return out;
  }
  std::string name() const override { return "histograms"; }
};

class CorrelationFeatures : public FeatureMap {
 public:
  std::vector<double> extract(const Dataset& d) const override {
    require_rows(d, 2, "correlation features");
    const Schema& schema = d.schema();
    const size_t w = schema.one_hot_width();
    const size_t k = schema.attribute_count();
    const double n = static_cast<double>(d.size());

    // One-hot columns are indicators, so means and co-occurrence counts
    // determine the full Pearson matrix: var = m(1-m), cov = C/n - m_i m_j.
    std::vector<double> mean(w, 0.0);
    std::vector<std::vector<double>> cooc(w);
    for (auto& row : cooc) row.assign(w, 0.0);
    std::vector<size_t> cols(k);
    for (const Record& r : d.rows()) {
      for (size_t a = 0; a < k; ++a) {
        cols[a] = schema.one_hot_offset(a) + static_cast<size_t>(r.values[a]);
        mean[cols[a]] += 1.0;
      }
      for (size_t a = 0; a < k; ++a) {
        for (size_t b = a + 1; b < k; ++b) {
          size_t lo = std::min(cols[a], cols[b]);
          size_t hi = std::max(cols[a], cols[b]);
          cooc[lo][hi] += 1.0;
        }
      }
    }
    for (double& m : mean) m /= n;

    std::vector<double> out;
    out.reserve(w * (w - 1) / 2);
    for (size_t i = 0; i < w; ++i) {
      const double var_i = mean[i] * (1.0 - mean[i]);
      for (size_t j = i + 1; j < w; ++j) {
        const double var_j = mean[j] * (1.0 - mean[j]);
        if (var_i <= 0.0 || var_j <= 0.0) {
          out.push_back(0.0);
          continue;
        }
        // Columns within one attribute block never co-occur; cooc holds 0
        // there, which is exactly their co-occurrence count.
        const double cov = cooc[i][j] / n - mean[i] * mean[j];
        out.push_back(cov / std::sqrt(var_i * var_j));
      }
    }
    return out;
  }
  std::string name() const override { return "correlations"; }
};

class RandomQueryFeatures : public FeatureMap {
 public:
  RandomQueryFeatures(std::vector<Record> targets, std::vector<std::vector<size_t>> subsets)
      : targets_(std::move(targets)), subsets_(std::move(subsets)) {
    if (targets_.empty()) throw Error("random query features: no targets");
    if (subsets_.empty()) throw Error("random query features: no query subsets");
  }

  std::vector<double> extract(const Dataset& d) const override {
    require_rows(d, 1, "random query features");
    std::vector<double> out;
    out.reserve(targets_.size() * subsets_.size());
    for (const Record& t : targets_) {
      for (const auto& s : subsets_) {
        out.push_back(counting_query(d, t, s));
      }
    }
    return out;
  }
  std::string name() const override { return "random-queries"; }

 private:
  std::vector<Record> targets_;
  std::vector<std::vector<size_t>> subsets_;
};

class ConcatFeatures : public FeatureMap {
 public:
  explicit ConcatFeatures(std::vector<FeatureMapPtr> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw Error("concat features: no parts");
  }
  std::vector<double> extract(const Dataset& d) const override {
    std::vector<double> out;
    for (const auto& p : parts_) {
      std::vector<double> v = p->extract(d);
      out.insert(out.end(), v.begin(), v.end());
    }
    return out;
  }
  std::string name() const override {
    std::string n;
    for (size_t i = 0; i < parts_.size(); ++i) {
      if (i) n += "+";
      n += parts_[i]->name();
    }
    return n;
  }

 private:
  std::vector<FeatureMapPtr> parts_;
};

}  // namespace

FeatureMapPtr naive_stats_features() { return std::make_shared<NaiveStatsFeatures>(); }
FeatureMapPtr histogram_features() { return std::make_shared<HistogramFeatures>(); }
FeatureMapPtr correlation_features() { return std::make_shared<CorrelationFeatures>(); }

FeatureMapPtr random_query_features(const Schema& schema, std::vector<Record> targets,
                                    size_t n_queries,
                                    std::pair<size_t, size_t> subset_size_range, uint64_t seed) {
  const size_t k = schema.attribute_count();
  auto [lo, hi] = subset_size_range;
  if (n_queries == 0) throw Error("random query features: n_queries must be >= 1");
  if (lo > hi || hi > k) {
    throw Error("random query features: invalid subset size range");
  }
  for (const Record& t : targets) check_full_record(t, schema, "random query features");
  Rng rng(derive_seed(seed, "random-queries"));
  std::vector<std::vector<size_t>> subsets;
  subsets.reserve(n_queries);
  for (size_t q = 0; q < n_queries; ++q) {
    size_t size = lo + rng.uniform_int(hi - lo + 1);
    std::vector<size_t> subset = rng.sample_indices(k, size);
    std::sort(subset.begin(), subset.end());
    subsets.push_back(std::move(subset));
  }
  return std::make_shared<RandomQueryFeatures>(std::move(targets), std::move(subsets));
}

FeatureMapPtr random_query_features(std::vector<Record> targets,
                                    std::vector<std::vector<size_t>> subsets) {
  return std::make_shared<RandomQueryFeatures>(std::move(targets), std::move(subsets));
}

FeatureMapPtr concat_features(std::vector<FeatureMapPtr> parts) {
  return std::make_shared<ConcatFeatures>(std::move(parts));
}

// --- attack base -------------------------------------------------------------

size_t argmax_lowest(std::span<const double> values) {
  size_t best = 0;
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

size_t Attack::decide(std::span<const double> scores) const {
  if (scores.size() != n_cat()) throw Error("decide: score vector has wrong length");
  return argmax_lowest(scores);
}

RecordDistance hamming_distance() {
  return [](const Record& a, const Record& b) { return static_cast<double>(hamming(a, b)); };
}

namespace {

// Sensitive-attribute cardinality with bounds checks up front (needed in
// member initializers before the constructor body runs).
size_t sensitive_cardinality(const SchemaPtr& schema, size_t attr, const char* who) {
  if (!schema) throw Error(std::string(who) + ": null schema");
  if (attr >= schema->attribute_count()) {
    throw Error(std::string(who) + ": attribute index out of range");
  }
  return schema->attribute(attr).values.size();
}

// Threshold fit shared by the binary score-based attacks: pick the tau over
// candidate scores (plus an all-negative sentinel) maximizing training
// accuracy; ties go to the lowest tau.
double fit_threshold(const std::vector<double>& scores, const std::vector<int>& labels) {
  std::vector<double> candidates(scores);
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  candidates.push_back(candidates.back() + 1.0);

  double best_tau = candidates.front();
  size_t best_correct = 0;
  bool first = true;
  for (double tau : candidates) {
    size_t correct = 0;
    for (size_t i = 0; i < scores.size(); ++i) {
      const int decision = scores[i] >= tau ? 1 : 0;
      if (decision == labels[i]) ++correct;
    }
    if (first || correct > best_correct) {
      best_correct = correct;
      best_tau = tau;
      first = false;
    }
  }
  return best_tau;
}

class ClosestDistanceMia : public Attack {
 public:
  ClosestDistanceMia(Record target, std::optional<double> threshold, RecordDistance distance)
      : Attack("closest-distance", 2), target_(std::move(target)),
        configured_threshold_(threshold), threshold_(threshold),
        distance_(std::move(distance)) {}

  void train(std::span<const LabeledSample> samples) override {
    if (configured_threshold_) return;  // explicit threshold wins
    if (samples.empty()) return;
    std::vector<double> scores;
    std::vector<int> labels;
    scores.reserve(samples.size());
    for (const auto& s : samples) {
      scores.push_back(positive_score(s.synthetic));
      labels.push_back(s.label);
    }
    threshold_ = fit_threshold(scores, labels);
  }

  std::vector<double> score(const Dataset& synthetic) const override {
    const double s = positive_score(synthetic);
    return {-s, s};
  }

  size_t decide(std::span<const double> scores) const override {
    if (scores.size() != 2) throw Error("decide: score vector has wrong length");
    // Default threshold 0 is the direct lookup rule: "in" exactly when the
    // target appears verbatim.
    return scores[1] >= threshold_.value_or(0.0) ? 1 : 0;
  }

 private:
  double positive_score(const Dataset& d) const {
    if (d.empty()) return kNegInf;
    double best = std::numeric_limits<double>::infinity();
    for (const Record& r : d.rows()) best = std::min(best, distance_(r, target_));
    return -best;
  }

  Record target_;
  std::optional<double> configured_threshold_;
  std::optional<double> threshold_;
  RecordDistance distance_;
};

class ClosestDistanceAia : public Attack {
 public:
  ClosestDistanceAia(Record partial, size_t attr, SchemaPtr schema, RecordDistance distance)
      : Attack("closest-distance",
               sensitive_cardinality(schema, attr, "closest-distance attack")),
        distance_(std::move(distance)) {
    for (size_t v = 0; v < schema->attribute(attr).values.size(); ++v) {
      Record c = partial;
      c.values[attr] = static_cast<int32_t>(v);
      check_full_record(c, *schema, "closest-distance attack");
      completions_.push_back(std::move(c));
    }
  }

  void train(std::span<const LabeledSample>) override {}

  std::vector<double> score(const Dataset& synthetic) const override {
    std::vector<double> out;
    out.reserve(completions_.size());
    for (const Record& c : completions_) {
      if (synthetic.empty()) {
        out.push_back(kNegInf);
        continue;
      }
      double best = std::numeric_limits<double>::infinity();
      for (const Record& r : synthetic.rows()) best = std::min(best, distance_(r, c));
      out.push_back(-best);
    }
    return out;
  }

 private:
  std::vector<Record> completions_;
  RecordDistance distance_;
};

class DensityMia : public Attack {
 public:
  DensityMia(Record target, double smoothing, std::optional<double> threshold)
      : Attack("density", 2), target_(std::move(target)), smoothing_(smoothing),
        configured_threshold_(threshold), threshold_(threshold) {
    if (smoothing_ < 0.0) throw Error("density attack: smoothing must be >= 0");
  }

  void train(std::span<const LabeledSample> samples) override {
    if (configured_threshold_) return;
    if (samples.empty()) return;
    std::vector<double> scores;
    std::vector<int> labels;
    for (const auto& s : samples) {
      scores.push_back(density_at_target(s.synthetic));
      labels.push_back(s.label);
    }
    threshold_ = fit_threshold(scores, labels);
  }

  std::vector<double> score(const Dataset& synthetic) const override {
    const double s = density_at_target(synthetic);
    return {-s, s};
  }

  size_t decide(std::span<const double> scores) const override {
    if (scores.size() != 2) throw Error("decide: score vector has wrong length");
    if (threshold_) return scores[1] >= *threshold_ ? 1 : 0;
    return argmax_lowest(scores);
  }

 private:
  double density_at_target(const Dataset& d) const {
    if (d.empty()) throw Error("density attack: empty synthetic dataset");
    const Schema& schema = d.schema();
    if (target_.values.size() != schema.attribute_count()) {
      throw Error("density attack: target does not match schema");
    }
    const double n = static_cast<double>(d.size());
    double density = 1.0;
    for (size_t a = 0; a < schema.attribute_count(); ++a) {
      std::vector<int64_t> counts = marginal_histogram(d, a);
      const double card = static_cast<double>(counts.size());
      const double c = static_cast<double>(counts[static_cast<size_t>(target_.values[a])]);
      density *= (c + smoothing_) / (n + smoothing_ * card);
    }
    return density;
  }

  Record target_;
  double smoothing_;
  std::optional<double> configured_threshold_;
  std::optional<double> threshold_;
};

class CapAia : public Attack {
 public:
  CapAia(Record partial, size_t attr, SchemaPtr schema, LearnerKind learner,
         ForestParams forest_params, LogisticParams logistic_params, uint64_t seed)
      : Attack("cap", sensitive_cardinality(schema, attr, "cap attack")),
        partial_(std::move(partial)), attr_(attr), schema_(std::move(schema)),
        learner_(learner), forest_params_(forest_params),
        logistic_params_(logistic_params), seed_(seed) {
    Record probe = partial_;
    probe.values[attr_] = 0;
    check_full_record(probe, *schema_, "cap attack");
  }

  void train(std::span<const LabeledSample>) override {}

  std::vector<double> score(const Dataset& synthetic) const override {
    require_rows(synthetic, 2, "cap attack");
    if (!synthetic.schema().same_as(*schema_)) {
      throw Error("cap attack: synthetic schema does not match");
    }
    const size_t l = n_cat();
    Matrix x(synthetic.size(), reduced_width());
    std::vector<int> y(synthetic.size());
    for (size_t i = 0; i < synthetic.size(); ++i) {
      encode_without_attr(synthetic.row(i), x.row(i));
      y[i] = synthetic.row(i).values[attr_];
    }
    ClassifierPtr model;
    if (learner_ == LearnerKind::kRandomForest) {
      model = train_random_forest(x, y, l, forest_params_, derive_seed(seed_, "cap"));
    } else {
      model = train_logistic(x, y, l, logistic_params_);
    }
    std::vector<double> probe(reduced_width(), 0.0);
    encode_without_attr(partial_, probe);
    return model->predict_scores(probe);
  }

 private:
  size_t reduced_width() const {
    return schema_->one_hot_width() - schema_->attribute(attr_).values.size();
  }

  void encode_without_attr(const Record& r, std::span<double> out) const {
    std::fill(out.begin(), out.end(), 0.0);
    size_t offset = 0;
    for (size_t a = 0; a < schema_->attribute_count(); ++a) {
      const size_t card = schema_->attribute(a).values.size();
      if (a == attr_) continue;
      out[offset + static_cast<size_t>(r.values[a])] = 1.0;
      offset += card;
    }
  }

  Record partial_;
  size_t attr_;
  SchemaPtr schema_;
  LearnerKind learner_;
  ForestParams forest_params_;
  LogisticParams logistic_params_;
  uint64_t seed_;
};

class ShadowAttack : public Attack {
 public:
  ShadowAttack(std::string name, FeatureMapPtr features, LearnerKind learner, size_t n_cat,
               uint64_t seed, LogisticParams logistic_params, ForestParams forest_params)
      : Attack(std::move(name), n_cat), features_(std::move(features)), learner_(learner),
        logistic_params_(logistic_params), forest_params_(forest_params), seed_(seed) {
    if (!features_) throw Error("shadow attack: null feature map");
  }

  bool needs_training() const override { return true; }

  void train(std::span<const LabeledSample> samples) override {
    if (samples.size() < 2) {
      throw Error("shadow attack '" + name() + "': needs at least 2 training samples");
    }
    std::set<int> labels;
    for (const auto& s : samples) labels.insert(s.label);
    if (labels.size() < 2) {
      throw Error("shadow attack '" + name() + "': training labels cover a single class");
    }
    std::vector<double> first = features_->extract(samples[0].synthetic);
    Matrix x(samples.size(), first.size());
    std::vector<int> y(samples.size());
    std::copy(first.begin(), first.end(), x.row(0).begin());
    y[0] = samples[0].label;
    for (size_t i = 1; i < samples.size(); ++i) {
      std::vector<double> f = features_->extract(samples[i].synthetic);
      if (f.size() != first.size()) {
        throw Error("shadow attack '" + name() + "': inconsistent feature lengths");
      }
      std::copy(f.begin(), f.end(), x.row(i).begin());
      y[i] = samples[i].label;
    }
    if (learner_ == LearnerKind::kRandomForest) {
      model_ = train_random_forest(x, y, n_cat(), forest_params_, derive_seed(seed_, "shadow"));
    } else {
      model_ = train_logistic(x, y, n_cat(), logistic_params_);
    }
  }

  std::vector<double> score(const Dataset& synthetic) const override {
    if (!model_) throw Error("shadow attack '" + name() + "': not trained");
    return model_->predict_scores(features_->extract(synthetic));
  }

 private:
  FeatureMapPtr features_;
  LearnerKind learner_;
  LogisticParams logistic_params_;
  ForestParams forest_params_;
  uint64_t seed_;
  ClassifierPtr model_;
};

class ConstantAttack : public Attack {
 public:
  explicit ConstantAttack(size_t n_cat) : Attack("constant", n_cat) {}
  void train(std::span<const LabeledSample>) override {}
  std::vector<double> score(const Dataset&) const override {
    return std::vector<double>(n_cat(), 1.0 / static_cast<double>(n_cat()));
  }
};

}  // namespace

AttackPtr shadow_attack(std::string name, FeatureMapPtr features, LearnerKind learner,
                        size_t n_cat, uint64_t seed, LogisticParams logistic_params,
                        ForestParams forest_params) {
  return std::make_shared<ShadowAttack>(std::move(name), std::move(features), learner, n_cat,
                                        seed, logistic_params, forest_params);
}

AttackPtr closest_distance_mia(Record target, std::optional<double> threshold,
                               RecordDistance distance) {
  return std::make_shared<ClosestDistanceMia>(std::move(target), threshold, std::move(distance));
}

AttackPtr closest_distance_aia(Record partial, size_t attr, SchemaPtr schema,
                               RecordDistance distance) {
  return std::make_shared<ClosestDistanceAia>(std::move(partial), attr, std::move(schema),
                                              std::move(distance));
}

AttackPtr density_mia(Record target, double smoothing, std::optional<double> threshold) {
  return std::make_shared<DensityMia>(std::move(target), smoothing, threshold);
}

AttackPtr cap_aia(Record partial, size_t attr, SchemaPtr schema, LearnerKind learner,
                  ForestParams forest_params, LogisticParams logistic_params, uint64_t seed) {
  return std::make_shared<CapAia>(std::move(partial), attr, std::move(schema), learner,
                                  forest_params, logistic_params, seed);
}

AttackPtr constant_attack(size_t n_cat) { return std::make_shared<ConstantAttack>(n_cat); }

// --- registry -----------------------------------------------------------------

namespace {

void check_params(const nlohmann::json& params, const std::set<std::string>& allowed,
                  const std::string& attack) {
  if (params.is_null()) return;
  if (!params.is_object()) throw Error("attack '" + attack + "': params must be an object");
  for (const auto& [key, _] : params.items()) {
    if (!allowed.count(key)) {
      throw Error("attack '" + attack + "': unknown parameter '" + key + "'");
    }
  }
}

double get_number(const nlohmann::json& params, const std::string& key, double fallback) {
  if (params.is_object() && params.contains(key)) {
    if (!params[key].is_number()) throw Error("attack parameter '" + key + "' must be a number");
    return params[key].get<double>();
  }
  return fallback;
}

int get_int(const nlohmann::json& params, const std::string& key, int fallback) {
  if (params.is_object() && params.contains(key)) {
    if (!params[key].is_number_integer()) {
      throw Error("attack parameter '" + key + "' must be an integer");
    }
    return params[key].get<int>();
  }
  return fallback;
}

std::optional<double> get_optional_number(const nlohmann::json& params, const std::string& key) {
  if (params.is_object() && params.contains(key)) {
    if (!params[key].is_number()) throw Error("attack parameter '" + key + "' must be a number");
    return params[key].get<double>();
  }
  return std::nullopt;
}

LearnerKind get_learner(const nlohmann::json& params, LearnerKind fallback,
                        const std::string& attack) {
  if (!params.is_object() || !params.contains("learner")) return fallback;
  const auto& v = params["learner"];
  if (v.is_string() && v.get<std::string>() == "logistic") return LearnerKind::kLogistic;
  if (v.is_string() && v.get<std::string>() == "random-forest") return LearnerKind::kRandomForest;
  throw Error("attack '" + attack + "': learner must be 'logistic' or 'random-forest'");
}

LogisticParams logistic_from(const nlohmann::json& params) {
  LogisticParams lp;
  lp.l2 = get_number(params, "l2", lp.l2);
  lp.epochs = get_int(params, "epochs", lp.epochs);
  lp.step = get_number(params, "step", lp.step);
  return lp;
}

ForestParams forest_from(const nlohmann::json& params) {
  ForestParams fp;
  fp.trees = get_int(params, "trees", fp.trees);
  fp.max_depth = get_int(params, "max_depth", fp.max_depth);
  fp.min_leaf = get_int(params, "min_leaf", fp.min_leaf);
  fp.features_per_split = get_int(params, "features_per_split", fp.features_per_split);
  return fp;
}

std::vector<Record> goal_targets(const ThreatModel& tm) {
  if (const auto* mia = std::get_if<MiaGoal>(&tm.goal())) {
    return {mia->target};
  }
  std::vector<Record> completions;
  for (size_t v = 0; v < tm.n_cat(); ++v) completions.push_back(tm.completion(v));
  return completions;
}

const std::set<std::string> kLearnerKeys = {"learner",  "l2",       "epochs",
                                            "step",     "trees",    "max_depth",
                                            "min_leaf", "features_per_split"};

std::set<std::string> with_learner_keys(std::set<std::string> extra) {
  extra.insert(kLearnerKeys.begin(), kLearnerKeys.end());
  return extra;
}

}  // namespace

const std::vector<std::string>& registered_attack_names() {
  static const std::vector<std::string> names = {
      "closest-distance", "density",           "cap",     "groundhog",
      "groundhog-logistic", "shadow-random-queries", "constant"};
  return names;
}

AttackPtr make_attack(const std::string& name, const nlohmann::json& params,
                      const ThreatModel& tm, uint64_t seed) {
  const bool is_mia = std::holds_alternative<MiaGoal>(tm.goal());
  const auto* mia = std::get_if<MiaGoal>(&tm.goal());
  const auto* aia = std::get_if<AiaGoal>(&tm.goal());

  if (name == "constant") {
    check_params(params, {}, name);
    return constant_attack(tm.n_cat());
  }
  if (name == "closest-distance") {
    check_params(params, {"threshold"}, name);
    if (is_mia) return closest_distance_mia(mia->target, get_optional_number(params, "threshold"));
    return closest_distance_aia(aia->partial, aia->attr, tm.schema_ptr());
  }
  if (name == "density") {
    check_params(params, {"smoothing", "threshold"}, name);
    if (!is_mia) throw Error("attack 'density' supports membership goals only");
    return density_mia(mia->target, get_number(params, "smoothing", 1.0),
                       get_optional_number(params, "threshold"));
  }
  if (name == "cap") {
    check_params(params, with_learner_keys({}), name);
    if (is_mia) throw Error("attack 'cap' supports attribute-inference goals only");
    return cap_aia(aia->partial, aia->attr, tm.schema_ptr(),
                   get_learner(params, LearnerKind::kRandomForest, name), forest_from(params),
                   logistic_from(params), derive_seed(seed, "cap"));
  }
  if (name == "groundhog" || name == "groundhog-logistic") {
    check_params(params, with_learner_keys({}), name);
    FeatureMapPtr features = concat_features(
        {naive_stats_features(), histogram_features(), correlation_features()});
    LearnerKind learner = name == "groundhog" ? LearnerKind::kRandomForest
                                              : LearnerKind::kLogistic;
    learner = get_learner(params, learner, name);
    return shadow_attack(name, std::move(features), learner, tm.n_cat(),
                         derive_seed(seed, name), logistic_from(params), forest_from(params));
  }
  if (name == "shadow-random-queries") {
    check_params(params, with_learner_keys({"queries", "subset_min", "subset_max"}), name);
    const size_t k = tm.schema().attribute_count();
    size_t n_queries = static_cast<size_t>(get_int(params, "queries", 100));
    size_t lo = static_cast<size_t>(get_int(params, "subset_min", 1));
    size_t hi = static_cast<size_t>(get_int(params, "subset_max",
                                            static_cast<int>(std::min<size_t>(4, k))));
    FeatureMapPtr features = random_query_features(tm.schema(), goal_targets(tm), n_queries,
                                                   {lo, hi}, derive_seed(seed, "rq"));
    return shadow_attack(name, std::move(features),
                         get_learner(params, LearnerKind::kLogistic, name), tm.n_cat(),
                         derive_seed(seed, name), logistic_from(params), forest_from(params));
  }
  throw Error("unknown attack '" + name + "'");
}

std::vector<std::string> check_attack_spec(const std::string& name,
                                           const nlohmann::json& params, bool goal_is_mia) {
  std::vector<std::string> problems;
  const auto& names = registered_attack_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    problems.push_back("unknown attack '" + name + "'");
    return problems;
  }
  std::set<std::string> allowed;
  if (name == "constant") {
    allowed = {};
  } else if (name == "closest-distance") {
    allowed = {"threshold"};
  } else if (name == "density") {
    allowed = {"smoothing", "threshold"};
    if (!goal_is_mia) problems.push_back("attack 'density' supports membership goals only");
  } else if (name == "cap") {
    allowed = with_learner_keys({});
    if (goal_is_mia) {
      problems.push_back("attack 'cap' supports attribute-inference goals only");
    }
  } else if (name == "groundhog" || name == "groundhog-logistic") {
    allowed = with_learner_keys({});
  } else {  // shadow-random-queries
    allowed = with_learner_keys({"queries", "subset_min", "subset_max"});
  }
  if (!params.is_null()) {
    if (!params.is_object()) {
      problems.push_back("attack '" + name + "': params must be a table");
      return problems;
    }
    for (const auto& [key, _] : params.items()) {
      if (!allowed.count(key)) {
        problems.push_back("attack '" + name + "': unknown parameter '" + key + "'");
      }
    }
  }
  return problems;
}

bool attack_requires_training(const std::string& name) {
  return name == "groundhog" || name == "groundhog-logistic" ||
         name == "shadow-random-queries";
}

}  // namespace synaudit
