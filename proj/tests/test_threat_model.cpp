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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "synaudit/common.hpp"
#include "synaudit/threat_model.hpp"
#include "test_util.hpp"

using namespace synaudit;
using namespace synaudit::test;

namespace {

// Population with globally unique rows: value pattern encodes the row id.
Dataset unique_population(const SchemaPtr& schema, size_t n) {
  std::vector<Record> rows;
  const size_t k = schema->attribute_count();
  for (size_t i = 0; i < n; ++i) {
    Record r;
    size_t rest = i;
    for (size_t a = 0; a < k; ++a) {
      const size_t card = schema->attribute(a).values.size();
      r.values.push_back(static_cast<int32_t>(rest % card));
      rest /= card;
    }
    rows.push_back(std::move(r));
  }
  return Dataset(schema, std::move(rows));
}

GeneratorPtr copy_gen() { return raw_generator(RawMode::kCopy); }

}  // namespace

TEST_CASE("exact-prior MIA: the two worlds differ in exactly one record") {
  auto schema = make_schema({2, 2, 2});
  Rng rng(1);
  Dataset d_minus = random_dataset(schema, 10, rng);
  Record t = rec({0, 0, 0});
  Record t_prime = rec({1, 1, 1});
  ThreatModel tm(ExactPrior{d_minus}, BlackBox{copy_gen()}, MiaGoal{t, t_prime}, 5);

  CHECK(tm.n_cat() == 2);
  CHECK(tm.base_rate() == doctest::Approx(0.5));

  Rng draw_rng(2);
  int in_count = 0;
  for (int i = 0; i < 200; ++i) {
    auto [real, label] = tm.draw_real(Partition::kTest, draw_rng);
    REQUIRE(real.size() == d_minus.size() + 1);
    // target or replacement sits at row 0, the base is unchanged
    CHECK(real.row(0) == (label == 1 ? t : t_prime));
    for (size_t j = 0; j < d_minus.size(); ++j) CHECK(real.row(j + 1) == d_minus.row(j));
    in_count += label;
  }
  CHECK(in_count > 60);
  CHECK(in_count < 140);
}

TEST_CASE("exact prior rejects p_in other than one half") {
  auto schema = make_schema({2, 2});
  Rng rng(3);
  Dataset d_minus = random_dataset(schema, 5, rng);
  CHECK_THROWS_AS(ThreatModel(ExactPrior{d_minus}, BlackBox{copy_gen()},
                              MiaGoal{rec({0, 0}), rec({1, 1}), 0.8}, 3),
                  Error);
}

TEST_CASE("mia goal validation") {
  auto schema = make_schema({2, 2});
  Rng rng(4);
  Dataset d_minus = random_dataset(schema, 5, rng);
  CHECK_THROWS_AS(ThreatModel(ExactPrior{d_minus}, BlackBox{copy_gen()},
                              MiaGoal{rec({0, 0}), rec({0, 0})}, 3),
                  Error);
  CHECK_THROWS_AS(ThreatModel(ExactPrior{d_minus}, BlackBox{copy_gen()},
                              MiaGoal{rec({0, 5}), rec({1, 1})}, 3),
                  Error);
}

TEST_CASE("auxiliary MIA: p_in = 1 always inserts the target") {
  auto schema = make_schema({3, 3, 3});
  Dataset population = unique_population(schema, 26);
  auto prior = AuxiliaryPrior::create(population, 0.5, 0.5, 5, 77);
  Record t = rec({2, 2, 2});        // not among the 26 encoded rows
  Record t_prime = rec({1, 2, 2});
  ThreatModel tm(prior, BlackBox{copy_gen()}, MiaGoal{t, t_prime, 1.0}, 5);
  CHECK(tm.base_rate() == doctest::Approx(1.0));
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    auto [real, label] = tm.draw_real(Partition::kTrain, rng);
    CHECK(label == 1);
    CHECK(real.row(0) == t);
    CHECK(real.size() == 5);
  }
}

TEST_CASE("auxiliary prior: partitions are disjoint and respected by draws") {
  auto schema = make_schema({4, 4, 4});
  Dataset population = unique_population(schema, 60);
  auto prior = AuxiliaryPrior::create(population, 0.5, 0.5, 8, 123);

  std::set<size_t> aux(prior.aux_rows().begin(), prior.aux_rows().end());
  std::set<size_t> test(prior.test_rows().begin(), prior.test_rows().end());
  CHECK(aux.size() == 30);
  CHECK(test.size() == 30);
  for (size_t i : aux) CHECK(test.count(i) == 0);

  Record t = rec({3, 3, 3});
  Record t_prime = rec({0, 3, 3});
  ThreatModel tm(prior, BlackBox{copy_gen()}, MiaGoal{t, t_prime}, 8);

  // Map rows back to population ids; base rows from train draws must come
  // from the aux partition and test draws from the test partition.
  auto row_id = [&](const Record& r) {
    for (size_t i = 0; i < population.size(); ++i) {
      if (population.row(i) == r) return i;
    }
    return population.size();
  };
  Rng rng(9);
  for (int i = 0; i < 40; ++i) {
    auto [train_real, l1] = tm.draw_real(Partition::kTrain, rng);
    for (size_t j = 1; j < train_real.size(); ++j) {
      size_t id = row_id(train_real.row(j));
      REQUIRE(id < population.size());
      CHECK(aux.count(id) == 1);
    }
    auto [test_real, l2] = tm.draw_real(Partition::kTest, rng);
    for (size_t j = 1; j < test_real.size(); ++j) {
      size_t id = row_id(test_real.row(j));
      REQUIRE(id < population.size());
      CHECK(test.count(id) == 1);
    }
  }
}

TEST_CASE("auxiliary prior: n_real bounds checked") {
  auto schema = make_schema({4, 4, 4});
  Dataset population = unique_population(schema, 20);
  CHECK_THROWS_AS(AuxiliaryPrior::create(population, 0.5, 0.5, 11, 1), Error);
  CHECK_THROWS_AS(AuxiliaryPrior::create(population, 0.7, 0.5, 2, 1), Error);
}

TEST_CASE("AIA: label frequencies are uniform over the sensitive values") {
  auto schema = make_schema({2, 3, 2});
  Dataset population = unique_population(schema, 12);
  auto prior = AuxiliaryPrior::create(population, 0.5, 0.5, 3, 17);
  ThreatModel tm(prior, BlackBox{copy_gen()}, AiaGoal{rec({1, -1, 1}), 1}, 3);
  CHECK(tm.n_cat() == 3);
  CHECK(tm.base_rate() == doctest::Approx(1.0 / 3.0));

  Rng rng(31);
  const int draws = 30000;
  std::vector<int> counts(3, 0);
  for (int i = 0; i < draws; ++i) {
    auto [real, label] = tm.draw_real(Partition::kTest, rng);
    counts[static_cast<size_t>(label)]++;
    CHECK(real.row(0) == tm.completion(static_cast<size_t>(label)));
  }
  for (int c : counts) {
    CHECK(std::abs(static_cast<double>(c) / draws - 1.0 / 3.0) < 0.01);
  }
}

TEST_CASE("AIA under auxiliary prior removes completion collisions") {
  auto schema = make_schema({2, 3});
  // population holds every (x, v) pair; completions of partial (1, -) are
  // (1,0), (1,1), (1,2) and must never appear as base rows
  Dataset population = unique_population(schema, 6);
  auto prior = AuxiliaryPrior::create(population, 0.5, 0.5, 1, 3);
  ThreatModel tm(prior, BlackBox{copy_gen()}, AiaGoal{rec({1, -1}), 1}, 2);
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    auto [real, label] = tm.draw_real(Partition::kTrain, rng);
    for (size_t j = 1; j < real.size(); ++j) {
      CHECK(real.row(j).values[0] == 0);  // every x=1 row was a completion
    }
  }
}

TEST_CASE("AIA base rates for two and four values") {
  auto schema = make_schema({2, 4});
  Dataset population = unique_population(schema, 8);
  auto prior = AuxiliaryPrior::create(population, 0.5, 0.5, 1, 3);
  ThreatModel tm2(prior, BlackBox{copy_gen()}, AiaGoal{rec({-1, 0}), 0}, 2);
  CHECK(tm2.base_rate() == doctest::Approx(0.5));
  ThreatModel tm4(prior, BlackBox{copy_gen()}, AiaGoal{rec({0, -1}), 1}, 2);
  CHECK(tm4.base_rate() == doctest::Approx(0.25));
}

TEST_CASE("empirical base rate calibration (MIA)") {
  auto schema = make_schema({2, 2, 2, 2});
  Dataset population = unique_population(schema, 16);
  auto prior = AuxiliaryPrior::create(population, 0.5, 0.5, 4, 5);
  ThreatModel tm(prior, BlackBox{copy_gen()}, MiaGoal{rec({1, 1, 1, 1}), rec({0, 1, 1, 1})}, 4);
  Rng rng(13);
  const int draws = 10000;
  int in_count = 0;
  for (int i = 0; i < draws; ++i) in_count += tm.draw_real(Partition::kTest, rng).second;
  CHECK(std::abs(static_cast<double>(in_count) / draws - 0.5) < 0.02);
}

TEST_CASE("generate_samples: contract") {
  auto schema = make_schema({2, 2, 2});
  Rng rng(6);
  Dataset d_minus = random_dataset(schema, 6, rng);
  Record t = rec({0, 0, 0});
  Record t_prime = rec({1, 1, 1});
  ThreatModel tm(ExactPrior{d_minus}, BlackBox{independent_marginals_generator(std::nullopt)},
                 MiaGoal{t, t_prime}, 4);

  SUBCASE("count zero gives an empty list") {
    CHECK(tm.generate_samples(0, Partition::kTrain, 1).empty());
  }
  SUBCASE("deterministic across calls and thread counts") {
    auto a = tm.generate_samples(12, Partition::kTrain, 99, 1);
    auto b = tm.generate_samples(12, Partition::kTrain, 99, 1);
    auto c = tm.generate_samples(12, Partition::kTrain, 99, 4);
    REQUIRE(a.size() == 12);
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].label == b[i].label);
      CHECK(a[i].label == c[i].label);
      for (size_t j = 0; j < a[i].synthetic.size(); ++j) {
        CHECK(a[i].synthetic.row(j) == b[i].synthetic.row(j));
        CHECK(a[i].synthetic.row(j) == c[i].synthetic.row(j));
      }
    }
  }
  SUBCASE("train and test partitions differ") {
    auto a = tm.generate_samples(6, Partition::kTrain, 99);
    auto b = tm.generate_samples(6, Partition::kTest, 99);
    bool any_diff = false;
    for (size_t i = 0; i < a.size(); ++i) {
      if (a[i].label != b[i].label) any_diff = true;
    }
    CHECK(any_diff);
  }
  SUBCASE("synthetic datasets have the configured size") {
    for (const auto& s : tm.generate_samples(5, Partition::kTest, 3)) {
      CHECK(s.synthetic.size() == 4);
    }
  }
}

TEST_CASE("no-box knowledge refuses training samples but serves test ones") {
  auto schema = make_schema({2, 2});
  Rng rng(8);
  Dataset d_minus = random_dataset(schema, 5, rng);
  ThreatModel tm(ExactPrior{d_minus}, NoBox{independent_marginals_generator(std::nullopt)},
                 MiaGoal{rec({0, 0}), rec({1, 1})}, 3);
  CHECK_FALSE(tm.training_allowed());
  CHECK_THROWS_WITH_AS(tm.generate_samples(5, Partition::kTrain, 1),
                       doctest::Contains("no-box"), Error);
  CHECK(tm.generate_samples(5, Partition::kTest, 1).size() == 5);
}

TEST_CASE("uncertain-box knowledge draws a fresh meta-parameter per sample") {
  auto schema = make_schema({2, 2});
  Rng rng(10);
  Dataset d_minus = random_dataset(schema, 40, rng);
  MetaParameterized mp;
  mp.family_name = "im";
  mp.family = [](double eps) { return independent_marginals_generator(eps); };
  mp.atoms = {{0.05, 0.5}, {50.0, 0.5}};
  ThreatModel tm(ExactPrior{d_minus}, UncertainBox{mp}, MiaGoal{rec({0, 0}), rec({1, 1})}, 30);
  auto samples = tm.generate_samples(20, Partition::kTrain, 4);
  CHECK(samples.size() == 20);
  auto again = tm.generate_samples(20, Partition::kTrain, 4);
  for (size_t i = 0; i < samples.size(); ++i) {
    for (size_t j = 0; j < samples[i].synthetic.size(); ++j) {
      CHECK(samples[i].synthetic.row(j) == again[i].synthetic.row(j));
    }
  }
}

TEST_CASE("select_outlier_target: planted outlier wins") {
  auto schema = make_schema({3, 3});
  std::vector<Record> rows;
  for (int i = 0; i < 50; ++i) rows.push_back(rec({0, 0}));
  for (int i = 0; i < 40; ++i) rows.push_back(rec({1, 1}));
  rows.push_back(rec({2, 2}));  // value 2 unique in both columns
  Dataset d = make_dataset(schema, rows);
  Rng rng(3);
  OutlierTarget out = select_outlier_target(d, 1000, rng);
  CHECK(out.record == rec({2, 2}));
  CHECK(out.row_index == 90);

  // exhaustive oracle: direct log-likelihood over all rows
  double best_ll = 1e300;
  size_t best_idx = 0;
  for (size_t i = 0; i < d.size(); ++i) {
    double ll = 0;
    for (size_t a = 0; a < 2; ++a) {
      auto h = marginal_histogram(d, a);
      ll += std::log(static_cast<double>(h[static_cast<size_t>(d.row(i).values[a])]) /
                     static_cast<double>(d.size()));
    }
    if (ll < best_ll) {
      best_ll = ll;
      best_idx = i;
    }
  }
  CHECK(out.row_index == best_idx);
  CHECK(out.log_likelihood == doctest::Approx(best_ll));
}

TEST_CASE("select_outlier_target: ties break to the lowest row index") {
  auto schema = make_schema({2});
  std::vector<Record> rows(10, rec({0}));
  Dataset d = make_dataset(schema, rows);
  Rng rng(5);
  OutlierTarget out = select_outlier_target(d, 1000, rng);
  CHECK(out.row_index == 0);
  CHECK(out.log_likelihood == doctest::Approx(0.0));
}

TEST_CASE("select_outlier_target: errors and determinism") {
  auto schema = make_schema({2});
  {
    Rng rng(1);
    Dataset empty = make_dataset(schema, {});
    CHECK_THROWS_AS(select_outlier_target(empty, 10, rng), Error);
  }
  Rng rng(2);
  Dataset d = random_dataset(schema, 40, rng);
  Rng r1(9), r2(9);
  CHECK(select_outlier_target(d, 5, r1).row_index == select_outlier_target(d, 5, r2).row_index);
}
