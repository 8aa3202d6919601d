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

#include <algorithm>
#include <cmath>

#include "synaudit/common.hpp"
#include "synaudit/learners.hpp"
#include "synaudit/rng.hpp"

using namespace synaudit;

namespace {

Matrix matrix_from(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i) {
    for (size_t j = 0; j < rows[i].size(); ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

double training_accuracy(const ClassifierPtr& model, const Matrix& x,
                         const std::vector<int>& y) {
  size_t correct = 0;
  for (size_t i = 0; i < x.rows; ++i) {
    std::vector<double> scores = model->predict_scores(x.row(i));
    size_t best = 0;
    for (size_t c = 1; c < scores.size(); ++c) {
      if (scores[c] > scores[best]) best = c;
    }
    if (best == static_cast<size_t>(y[i])) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(x.rows);
}

// Two well-separated Gaussian-ish blobs in 2d, 20 points each.
void separable_blobs(Matrix& x, std::vector<int>& y) {
  Rng rng(42);
  std::vector<std::vector<double>> rows;
  y.clear();
  for (int i = 0; i < 20; ++i) {
    rows.push_back({-2.0 + 0.5 * rng.uniform_double(), -2.0 + 0.5 * rng.uniform_double()});
    y.push_back(0);
  }
  for (int i = 0; i < 20; ++i) {
    rows.push_back({2.0 + 0.5 * rng.uniform_double(), 2.0 + 0.5 * rng.uniform_double()});
    y.push_back(1);
  }
  x = matrix_from(rows);
}

}  // namespace

TEST_CASE("logistic: separable toy set reaches training accuracy 1") {
  Matrix x;
  std::vector<int> y;
  separable_blobs(x, y);
  ClassifierPtr model = train_logistic(x, y, 2);
  CHECK(training_accuracy(model, x, y) == doctest::Approx(1.0));
}

TEST_CASE("logistic: single-class labels give a constant classifier") {
  Matrix x = matrix_from({{0.0, 1.0}, {1.0, 0.0}, {0.5, 0.5}});
  std::vector<int> y = {1, 1, 1};
  ClassifierPtr model = train_logistic(x, y, 2);
  std::vector<double> a = model->predict_scores(std::vector<double>{9.0, -9.0});
  std::vector<double> b = model->predict_scores(std::vector<double>{-9.0, 9.0});
  CHECK(a == b);
  CHECK(a[1] == doctest::Approx(1.0));
}

TEST_CASE("logistic: gradient matches central finite differences") {
  Rng rng(7);
  const size_t m = 12, p = 4, c = 3;
  Matrix x(m, p);
  std::vector<int> y(m);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < p; ++j) x.at(i, j) = 2.0 * rng.uniform_double() - 1.0;
    y[i] = static_cast<int>(rng.uniform_int(c));
  }
  Matrix w(c, p);
  std::vector<double> b(c);
  for (double& v : w.data) v = rng.uniform_double() - 0.5;
  for (double& v : b) v = rng.uniform_double() - 0.5;
  const double l2 = 1e-3;

  Matrix gw;
  std::vector<double> gb;
  logistic_loss_and_gradient(x, y, c, w, b, l2, &gw, &gb);

  const double h = 1e-6;
  double max_diff = 0.0;
  for (size_t idx = 0; idx < w.data.size(); ++idx) {
    Matrix wp = w, wm = w;
    wp.data[idx] += h;
    wm.data[idx] -= h;
    double lp = logistic_loss_and_gradient(x, y, c, wp, b, l2, nullptr, nullptr);
    double lm = logistic_loss_and_gradient(x, y, c, wm, b, l2, nullptr, nullptr);
    max_diff = std::max(max_diff, std::abs((lp - lm) / (2 * h) - gw.data[idx]));
  }
  for (size_t idx = 0; idx < b.size(); ++idx) {
    std::vector<double> bp = b, bm = b;
    bp[idx] += h;
    bm[idx] -= h;
    double lp = logistic_loss_and_gradient(x, y, c, w, bp, l2, nullptr, nullptr);
    double lm = logistic_loss_and_gradient(x, y, c, w, bm, l2, nullptr, nullptr);
    max_diff = std::max(max_diff, std::abs((lp - lm) / (2 * h) - gb[idx]));
  }
  CHECK(max_diff < 1e-5);
}

TEST_CASE("logistic: loss trace is non-increasing") {
  Rng rng(11);
  const size_t m = 30, p = 5;
  Matrix x(m, p);
  std::vector<int> y(m);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < p; ++j) x.at(i, j) = rng.uniform_double() * 4.0;
    y[i] = static_cast<int>(rng.uniform_int(3));
  }
  std::vector<double> trace;
  LogisticParams params;
  params.epochs = 80;
  train_logistic(x, y, 3, params, &trace);
  REQUIRE(trace.size() >= 2);
  for (size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-12);
}

TEST_CASE("logistic: validation") {
  Matrix x = matrix_from({{1.0, std::numeric_limits<double>::quiet_NaN()}});
  CHECK_THROWS_AS(train_logistic(x, {0}, 2), Error);
  Matrix tiny = matrix_from({{1.0}});
  CHECK_THROWS_AS(train_logistic(tiny, {0}, 2), Error);  // m < c
  Matrix ok = matrix_from({{1.0}, {2.0}});
  CHECK_THROWS_AS(train_logistic(ok, {0, 2}, 2), Error);  // label out of range
}

TEST_CASE("predict_scores is a probability vector (random inputs)") {
  Rng rng(13);
  Matrix x(25, 3);
  std::vector<int> y(25);
  for (size_t i = 0; i < 25; ++i) {
    for (size_t j = 0; j < 3; ++j) x.at(i, j) = rng.uniform_double();
    y[i] = static_cast<int>(rng.uniform_int(3));
  }
  ClassifierPtr logistic = train_logistic(x, y, 3);
  ClassifierPtr forest = train_random_forest(x, y, 3, {}, 5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> probe = {rng.uniform_double() * 10 - 5, rng.uniform_double() * 10 - 5,
                                 rng.uniform_double() * 10 - 5};
    for (const auto& model : {logistic, forest}) {
      std::vector<double> s = model->predict_scores(probe);
      REQUIRE(s.size() == 3);
      double total = 0.0;
      for (double v : s) {
        CHECK(v >= 0.0);
        total += v;
      }
      CHECK(std::abs(total - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("forest: shatters distinct rows at full depth") {
  Rng rng(17);
  const size_t m = 30, p = 4;
  Matrix x(m, p);
  std::vector<int> y(m);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < p; ++j) x.at(i, j) = rng.uniform_double();
    y[i] = static_cast<int>(rng.uniform_int(2));
  }
  ClassifierPtr model = train_random_forest(x, y, 2, {}, 3);
  CHECK(training_accuracy(model, x, y) == doctest::Approx(1.0));
}

TEST_CASE("forest: single tree, single split separates a threshold dataset") {
  Matrix x = matrix_from({{-1.0}, {-0.8}, {-0.6}, {-0.4}, {1.2}, {1.4}, {1.6}, {1.8}});
  std::vector<int> y = {0, 0, 0, 0, 1, 1, 1, 1};
  ForestParams params;
  params.trees = 1;
  params.max_depth = 1;
  params.features_per_split = 1;
  ClassifierPtr model = train_random_forest(x, y, 2, params, 9);
  CHECK(model->predict_scores(std::vector<double>{-3.0})[0] == doctest::Approx(1.0));
  CHECK(model->predict_scores(std::vector<double>{3.0})[1] == doctest::Approx(1.0));
}

TEST_CASE("forest: invariant to training-row permutation") {
  Rng rng(19);
  const size_t m = 40, p = 3;
  Matrix x(m, p);
  std::vector<int> y(m);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < p; ++j) x.at(i, j) = rng.uniform_double();
    y[i] = static_cast<int>(rng.uniform_int(2));
  }
  std::vector<size_t> perm(m);
  for (size_t i = 0; i < m; ++i) perm[i] = i;
  rng.shuffle(perm);
  Matrix xp(m, p);
  std::vector<int> yp(m);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < p; ++j) xp.at(i, j) = x.at(perm[i], j);
    yp[i] = y[perm[i]];
  }
  ForestParams params;
  params.trees = 25;
  ClassifierPtr a = train_random_forest(x, y, 2, params, 21);
  ClassifierPtr b = train_random_forest(xp, yp, 2, params, 21);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> probe = {rng.uniform_double(), rng.uniform_double(),
                                 rng.uniform_double()};
    CHECK(a->predict_scores(probe) == b->predict_scores(probe));
  }
}

TEST_CASE("forest: determinism, degenerate labels and validation") {
  Rng rng(23);
  Matrix x(10, 2);
  std::vector<int> y(10);
  for (size_t i = 0; i < 10; ++i) {
    x.at(i, 0) = rng.uniform_double();
    x.at(i, 1) = rng.uniform_double();
    y[i] = static_cast<int>(rng.uniform_int(2));
  }
  ForestParams params;
  params.trees = 10;
  ClassifierPtr a = train_random_forest(x, y, 2, params, 31);
  ClassifierPtr b = train_random_forest(x, y, 2, params, 31);
  std::vector<double> probe = {0.4, 0.6};
  CHECK(a->predict_scores(probe) == b->predict_scores(probe));

  std::vector<int> ones(10, 1);
  ClassifierPtr constant = train_random_forest(x, ones, 2, params, 31);
  CHECK(constant->predict_scores(probe)[1] == doctest::Approx(1.0));

  Matrix single = matrix_from({{1.0}});
  CHECK_THROWS_AS(train_random_forest(single, {0}, 2, params, 1), Error);
}

TEST_CASE("forest: splits stay valid for adjacent representable feature values") {
  // Feature values one ulp apart, chosen so the naive midpoint rounds onto
  // the upper value; the tree must still separate the classes.
  const double lo = std::nextafter(1.0, 2.0);
  const double hi = std::nextafter(lo, 2.0);
  REQUIRE(0.5 * (lo + hi) == hi);
  Matrix x(8, 1);
  std::vector<int> y(8);
  for (size_t i = 0; i < 8; ++i) {
    x.at(i, 0) = i < 4 ? lo : hi;
    y[i] = i < 4 ? 0 : 1;
  }
  ForestParams params;
  params.trees = 5;
  ClassifierPtr model = train_random_forest(x, y, 2, params, 3);
  CHECK(model->predict_scores(std::vector<double>{lo})[0] == doctest::Approx(1.0));
  CHECK(model->predict_scores(std::vector<double>{hi})[1] == doctest::Approx(1.0));
}
