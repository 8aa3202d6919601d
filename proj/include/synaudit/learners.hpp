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
#include <memory>
#include <span>
#include <vector>

#include "synaudit/matrix.hpp"

namespace synaudit {

// A trained classifier over real-valued feature vectors. predict_scores
// returns a probability vector over the classes (nonnegative, sums to 1)
// and is deterministic once training has finished.
class TrainedClassifier {
 public:
  virtual ~TrainedClassifier() = default;
  virtual std::vector<double> predict_scores(std::span<const double> x) const = 0;
  virtual size_t num_classes() const = 0;
};

using ClassifierPtr = std::shared_ptr<const TrainedClassifier>;

struct LogisticParams {
  double l2 = 1e-3;
  int epochs = 200;
  double step = 0.1;
};

struct ForestParams {
  int trees = 100;
  int max_depth = -1;         // -1 = unlimited
  int min_leaf = 1;
  int features_per_split = 0; // 0 = floor(sqrt(p)), at least 1
};

// Multinomial logistic regression fit by full-batch gradient descent on
// cross-entropy plus an L2 penalty. Features are standardized to zero mean
// and unit variance with training statistics stored in the model
// (zero-variance columns stay at 0). The step size is halved within an
// epoch whenever a step would increase the loss, so the loss trace is
// non-increasing. If y contains a single class the result is a constant
// classifier emitting the empirical label distribution.
//
// loss_trace, when given, receives the loss after every accepted epoch.
ClassifierPtr train_logistic(const Matrix& x, const std::vector<int>& y, size_t n_classes,
                             const LogisticParams& params = {},
                             std::vector<double>* loss_trace = nullptr);

// Bagged CART trees with Gini impurity. Each tree votes its leaf's
// majority class and predict_scores reports the fraction of trees per
// class. Randomness is keyed by tree index (not row order): training rows
// are put in a canonical sorted order first, so the forest is invariant to
// permutations of the input rows given the same seed.
ClassifierPtr train_random_forest(const Matrix& x, const std::vector<int>& y, size_t n_classes,
                                  const ForestParams& params = {}, uint64_t seed = 0);

// Loss and gradient of the logistic objective at (weights, bias); used by
// the trainer and exposed so the gradient can be checked against finite
// differences. weights is n_classes x p, bias has n_classes entries.
// Returns mean cross-entropy + 0.5 * l2 * ||weights||^2.
double logistic_loss_and_gradient(const Matrix& x, const std::vector<int>& y, size_t n_classes,
                                  const Matrix& weights, std::span<const double> bias, double l2,
                                  Matrix* grad_weights, std::vector<double>* grad_bias);

}  // namespace synaudit
