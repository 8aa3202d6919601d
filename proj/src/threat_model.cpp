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

#include "synaudit/threat_model.hpp"

#include <algorithm>
#include <cmath>

#include "synaudit/common.hpp"
#include "synaudit/parallel.hpp"

namespace synaudit {

// --- AuxiliaryPrior --------------------------------------------------------

AuxiliaryPrior AuxiliaryPrior::create(Dataset population, double aux_fraction,
                                      double test_fraction, size_t n_real, uint64_t seed) {
  if (aux_fraction <= 0.0 || test_fraction <= 0.0 || aux_fraction + test_fraction > 1.0 + 1e-12) {
    throw Error("auxiliary prior: fractions must be positive and sum to at most 1");
  }
  if (n_real == 0) throw Error("auxiliary prior: n_real must be >= 1");
  const size_t n = population.size();
  const size_t n_aux = static_cast<size_t>(std::floor(aux_fraction * static_cast<double>(n)));
  const size_t n_test = static_cast<size_t>(std::floor(test_fraction * static_cast<double>(n)));
  if (n_aux + n_test > n) throw Error("auxiliary prior: partitions exceed population size");
  if (n_real > n_aux || n_real > n_test) {
    throw Error("auxiliary prior: n_real " + std::to_string(n_real) +
                " exceeds a partition size (aux " + std::to_string(n_aux) + ", test " +
                std::to_string(n_test) + ")");
  }
  std::vector<size_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = i;
  Rng rng(derive_seed(seed, "aux-partition"));
  rng.shuffle(idx);
  std::vector<size_t> aux(idx.begin(), idx.begin() + n_aux);
  std::vector<size_t> test(idx.begin() + n_aux, idx.begin() + n_aux + n_test);
  return AuxiliaryPrior(std::move(population), n_real, std::move(aux), std::move(test));
}

void AuxiliaryPrior::remove_rows_equal_to(const std::vector<Record>& records) {
  auto collides = [&](size_t row) {
    const Record& r = population_.row(row);
    return std::any_of(records.begin(), records.end(),
                       [&](const Record& t) { return t == r; });
  };
  std::erase_if(aux_rows_, collides);
  std::erase_if(test_rows_, collides);
  if (n_real_ > aux_rows_.size() || n_real_ > test_rows_.size()) {
    throw Error("auxiliary prior: removing completion collisions left a partition smaller "
                "than n_real");
  }
}

// --- ThreatModel -----------------------------------------------------------

namespace {

void check_record(const Record& r, const Schema& schema, const std::string& what,
                  std::optional<size_t> skip_attr = std::nullopt) {
  const size_t k = schema.attribute_count();
  if (r.values.size() != k) throw Error(what + ": record length does not match schema");
  for (size_t i = 0; i < k; ++i) {
    if (skip_attr && i == *skip_attr) continue;
    if (r.values[i] < 0 ||
        static_cast<size_t>(r.values[i]) >= schema.attribute(i).values.size()) {
      throw Error(what + ": value index out of range for attribute '" +
                  schema.attribute(i).name + "'");
    }
  }
}

}  // namespace

ThreatModel::ThreatModel(DatasetPrior prior, GeneratorKnowledge knowledge, AttackerGoal goal,
                         size_t n_synthetic)
    : prior_(std::move(prior)), knowledge_(std::move(knowledge)), goal_(std::move(goal)),
      n_synthetic_(n_synthetic) {
  schema_ = std::visit(
      [](const auto& p) -> SchemaPtr {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, ExactPrior>) {
          return p.d_minus.schema_ptr();
        } else {
          return p.population().schema_ptr();
        }
      },
      prior_);

  if (std::holds_alternative<UncertainBox>(knowledge_)) {
    validate_meta(std::get<UncertainBox>(knowledge_).meta);
  }

  if (const auto* mia = std::get_if<MiaGoal>(&goal_)) {
    check_record(mia->target, *schema_, "mia target");
    check_record(mia->replacement, *schema_, "mia replacement");
    if (mia->target == mia->replacement) {
      throw Error("mia goal: target and replacement records must differ");
    }
    if (mia->p_in < 0.0 || mia->p_in > 1.0) throw Error("mia goal: p_in must lie in [0, 1]");
    if (std::holds_alternative<ExactPrior>(prior_) && mia->p_in != 0.5) {
      throw Error("mia goal: an exact prior fixes p_in = 1/2");
    }
  } else {
    const auto& aia = std::get<AiaGoal>(goal_);
    if (aia.attr >= schema_->attribute_count()) {
      throw Error("aia goal: attribute index out of range");
    }
    check_record(aia.partial, *schema_, "aia partial record", aia.attr);
    if (schema_->attribute(aia.attr).values.size() < 2) {
      throw Error("aia goal: sensitive attribute needs at least 2 values");
    }
    // Keep 1/l exact: population rows equal to any completion would leak
    // the sensitive value through the base draw, so drop them.
    if (auto* aux = std::get_if<AuxiliaryPrior>(&prior_)) {
      std::vector<Record> completions;
      for (size_t v = 0; v < schema_->attribute(aia.attr).values.size(); ++v) {
        completions.push_back(completion(v));
      }
      aux->remove_rows_equal_to(completions);
    }
  }
}

size_t ThreatModel::n_cat() const {
  if (std::holds_alternative<MiaGoal>(goal_)) return 2;
  return schema_->attribute(std::get<AiaGoal>(goal_).attr).values.size();
}

double ThreatModel::base_rate() const {
  if (const auto* mia = std::get_if<MiaGoal>(&goal_)) {
    return std::max(mia->p_in, 1.0 - mia->p_in);
  }
  return 1.0 / static_cast<double>(n_cat());
}

Record ThreatModel::completion(size_t v) const {
  const auto& aia = std::get<AiaGoal>(goal_);
  Record r = aia.partial;
  r.values[aia.attr] = static_cast<int32_t>(v);
  return r;
}

Dataset ThreatModel::insert_target(const Record& target, const std::vector<Record>& base) const {
  std::vector<Record> rows;
  rows.reserve(base.size() + 1);
  rows.push_back(target);
  rows.insert(rows.end(), base.begin(), base.end());
  return Dataset(schema_, std::move(rows));
}

std::vector<Record> ThreatModel::draw_base_rows(Partition partition, Rng& rng) const {
  if (const auto* exact = std::get_if<ExactPrior>(&prior_)) {
    return exact->d_minus.rows();
  }
  const auto& aux = std::get<AuxiliaryPrior>(prior_);
  const std::vector<size_t>& pool =
      partition == Partition::kTrain ? aux.aux_rows() : aux.test_rows();
  const size_t want = aux.n_real() - 1;
  if (want > pool.size()) {
    throw Error("threat model: n_real exceeds the partition size");
  }
  std::vector<size_t> picked = rng.sample_indices(pool.size(), want);
  std::vector<Record> rows;
  rows.reserve(want);
  for (size_t i : picked) rows.push_back(aux.population().row(pool[i]));
  return rows;
}

std::pair<Dataset, int> ThreatModel::draw_real(Partition partition, Rng& rng) const {
  if (const auto* mia = std::get_if<MiaGoal>(&goal_)) {
    const double p_in = std::holds_alternative<ExactPrior>(prior_) ? 0.5 : mia->p_in;
    std::vector<Record> base = draw_base_rows(partition, rng);
    if (rng.bernoulli(p_in)) {
      return {insert_target(mia->target, base), 1};
    }
    return {insert_target(mia->replacement, base), 0};
  }
  const size_t l = n_cat();
  const size_t v = rng.uniform_int(l);
  std::vector<Record> base = draw_base_rows(partition, rng);
  return {insert_target(completion(v), base), static_cast<int>(v)};
}

std::vector<LabeledSample> ThreatModel::generate_samples(size_t count, Partition partition,
                                                         uint64_t master_seed,
                                                         unsigned threads) const {
  if (partition == Partition::kTrain && !training_allowed()) {
    throw Error("threat model: training samples unavailable under no-box knowledge");
  }
  const char* tag = partition == Partition::kTrain ? "train" : "test";

  std::vector<std::optional<LabeledSample>> slots(count);
  parallel_for(count, threads, [&](size_t i) {
    Rng rng(derive_seed(master_seed, tag, i));
    auto [real, label] = draw_real(partition, rng);
    GeneratorPtr gen = std::visit(
        [&](const auto& kn) -> GeneratorPtr {
          using T = std::decay_t<decltype(kn)>;
          if constexpr (std::is_same_v<T, UncertainBox>) {
            return sample_meta(kn.meta, rng).second;
          } else {
            return kn.generator;
          }
        },
        knowledge_);
    if (!gen) throw Error("threat model: null generator");
    Dataset synthetic = gen->generate(real, n_synthetic_, rng);
    slots[i] = LabeledSample{label, std::move(synthetic)};
  });

  std::vector<LabeledSample> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// --- outlier target selection ----------------------------------------------

OutlierTarget select_outlier_target(const Dataset& dataset, size_t candidate_count, Rng& rng) {
  if (dataset.empty()) throw Error("select_outlier_target: empty dataset");
  if (candidate_count == 0) throw Error("select_outlier_target: candidate_count must be >= 1");
  const Schema& schema = dataset.schema();
  const size_t k = schema.attribute_count();
  const double n = static_cast<double>(dataset.size());

  std::vector<std::vector<int64_t>> marginals(k);
  for (size_t a = 0; a < k; ++a) marginals[a] = marginal_histogram(dataset, a);

  // Every count seen by a candidate is >= 1 (its own row), so no smoothing
  // is needed.
  auto log_likelihood = [&](const Record& r) {
    double ll = 0.0;
    for (size_t a = 0; a < k; ++a) {
      ll += std::log(static_cast<double>(marginals[a][static_cast<size_t>(r.values[a])]) / n);
    }
    return ll;
  };

  const size_t m = std::min(candidate_count, dataset.size());
  std::vector<size_t> candidates = rng.sample_indices(dataset.size(), m);
  std::sort(candidates.begin(), candidates.end());  // ties break to lowest row index

  OutlierTarget best;
  best.row_index = candidates[0];
  best.record = dataset.row(candidates[0]);
  best.log_likelihood = log_likelihood(best.record);
  for (size_t i = 1; i < candidates.size(); ++i) {
    double ll = log_likelihood(dataset.row(candidates[i]));
    if (ll < best.log_likelihood) {
      best.row_index = candidates[i];
      best.record = dataset.row(candidates[i]);
      best.log_likelihood = ll;
    }
  }
  return best;
}

}  // namespace synaudit
