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

#include "synaudit/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "synaudit/common.hpp"
#include "synaudit/rng.hpp"

namespace synaudit {

namespace {

void check_inputs(const Matrix& x, const std::vector<int>& y, size_t n_classes) {
  if (n_classes < 2) throw Error("classifier: need at least 2 classes");
  if (x.rows != y.size()) throw Error("classifier: feature rows and labels differ in length");
  if (x.rows == 0) throw Error("classifier: empty training set");
  for (double v : x.data) {
    if (!std::isfinite(v)) throw Error("classifier: non-finite feature value");
  }
  for (int label : y) {
    if (label < 0 || static_cast<size_t>(label) >= n_classes) {
      throw Error("classifier: label out of range");
    }
  }
}

size_t distinct_labels(const std::vector<int>& y) {
  std::vector<int> sorted(y);
  std::sort(sorted.begin(), sorted.end());
  return static_cast<size_t>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
}

class ConstantClassifier : public TrainedClassifier {
 public:
  ConstantClassifier(std::vector<double> probs, size_t dim)
      : probs_(std::move(probs)), dim_(dim) {}

  std::vector<double> predict_scores(std::span<const double> x) const override {
    if (x.size() != dim_) throw Error("classifier: feature vector has wrong length");
    return probs_;
  }
  size_t num_classes() const override { return probs_.size(); }

 private:
  std::vector<double> probs_;
  size_t dim_;
};

ClassifierPtr constant_from_labels(const std::vector<int>& y, size_t n_classes, size_t dim) {
  std::vector<double> probs(n_classes, 0.0);
  for (int label : y) probs[static_cast<size_t>(label)] += 1.0;
  for (double& p : probs) p /= static_cast<double>(y.size());
  return std::make_shared<ConstantClassifier>(std::move(probs), dim);
}

// --- logistic regression ---------------------------------------------------

struct Standardizer {
  std::vector<double> mean;
  std::vector<double> inv_std;  // 0 for constant columns

  static Standardizer fit(const Matrix& x) {
    Standardizer s;
    s.mean.assign(x.cols, 0.0);
    s.inv_std.assign(x.cols, 0.0);
    for (size_t i = 0; i < x.rows; ++i) {
      for (size_t j = 0; j < x.cols; ++j) s.mean[j] += x.at(i, j);
    }
    for (double& m : s.mean) m /= static_cast<double>(x.rows);
    std::vector<double> var(x.cols, 0.0);
    for (size_t i = 0; i < x.rows; ++i) {
      for (size_t j = 0; j < x.cols; ++j) {
        double d = x.at(i, j) - s.mean[j];
        var[j] += d * d;
      }
    }
    for (size_t j = 0; j < x.cols; ++j) {
      var[j] /= static_cast<double>(x.rows);
      s.inv_std[j] = var[j] > 0.0 ? 1.0 / std::sqrt(var[j]) : 0.0;
    }
    return s;
  }

  Matrix apply(const Matrix& x) const {
    Matrix out(x.rows, x.cols);
    for (size_t i = 0; i < x.rows; ++i) {
      for (size_t j = 0; j < x.cols; ++j) {
        out.at(i, j) = (x.at(i, j) - mean[j]) * inv_std[j];
      }
    }
    return out;
  }

  std::vector<double> apply(std::span<const double> x) const {
    std::vector<double> out(x.size());
    for (size_t j = 0; j < x.size(); ++j) out[j] = (x[j] - mean[j]) * inv_std[j];
    return out;
  }
};

std::vector<double> softmax(std::span<const double> logits) {
  double mx = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

class LogisticClassifier : public TrainedClassifier {
 public:
  LogisticClassifier(Standardizer std_, Matrix weights, std::vector<double> bias)
      : standardizer_(std::move(std_)), weights_(std::move(weights)), bias_(std::move(bias)) {}

  std::vector<double> predict_scores(std::span<const double> x) const override {
    if (x.size() != weights_.cols) throw Error("classifier: feature vector has wrong length");
    std::vector<double> xs = standardizer_.apply(x);
    std::vector<double> logits(weights_.rows);
    for (size_t c = 0; c < weights_.rows; ++c) {
      double z = bias_[c];
      for (size_t j = 0; j < weights_.cols; ++j) z += weights_.at(c, j) * xs[j];
      logits[c] = z;
    }
    return softmax(logits);
  }
  size_t num_classes() const override { return weights_.rows; }

 private:
  Standardizer standardizer_;
  Matrix weights_;  // n_classes x p
  std::vector<double> bias_;
};

}  // namespace

double logistic_loss_and_gradient(const Matrix& x, const std::vector<int>& y, size_t n_classes,
                                  const Matrix& weights, std::span<const double> bias, double l2,
                                  Matrix* grad_weights, std::vector<double>* grad_bias) {
  const size_t m = x.rows;
  const size_t p = x.cols;
  if (grad_weights) *grad_weights = Matrix(n_classes, p);
  if (grad_bias) grad_bias->assign(n_classes, 0.0);

  double loss = 0.0;
  std::vector<double> logits(n_classes);
  for (size_t i = 0; i < m; ++i) {
    for (size_t c = 0; c < n_classes; ++c) {
      double z = bias[c];
      for (size_t j = 0; j < p; ++j) z += weights.at(c, j) * x.at(i, j);
      logits[c] = z;
    }
    std::vector<double> probs = softmax(logits);
    const size_t label = static_cast<size_t>(y[i]);
    loss -= std::log(std::max(probs[label], 1e-300));
    if (grad_weights) {
      for (size_t c = 0; c < n_classes; ++c) {
        double diff = probs[c] - (c == label ? 1.0 : 0.0);
        (*grad_bias)[c] += diff;
        for (size_t j = 0; j < p; ++j) grad_weights->at(c, j) += diff * x.at(i, j);
      }
    }
  }
  loss /= static_cast<double>(m);
  double reg = 0.0;
  for (double w : weights.data) reg += w * w;
  loss += 0.5 * l2 * reg;
  if (grad_weights) {
    const double inv_m = 1.0 / static_cast<double>(m);
    for (size_t c = 0; c < n_classes; ++c) {
      (*grad_bias)[c] *= inv_m;
      for (size_t j = 0; j < p; ++j) {
        grad_weights->at(c, j) = grad_weights->at(c, j) * inv_m + l2 * weights.at(c, j);
      }
    }
  }
  return loss;
}

ClassifierPtr train_logistic(const Matrix& x, const std::vector<int>& y, size_t n_classes,
                             const LogisticParams& params, std::vector<double>* loss_trace) {
  check_inputs(x, y, n_classes);
  if (x.rows < n_classes) {
    throw Error("logistic: need at least as many samples as classes");
  }
  if (distinct_labels(y) < 2) {
    return constant_from_labels(y, n_classes, x.cols);
  }
  if (params.epochs < 1 || params.step <= 0.0 || params.l2 < 0.0) {
    throw Error("logistic: invalid hyperparameters");
  }

  Standardizer standardizer = Standardizer::fit(x);
  Matrix xs = standardizer.apply(x);

  Matrix w(n_classes, x.cols);
  std::vector<double> b(n_classes, 0.0);
  Matrix gw;
  std::vector<double> gb;
  double step = params.step;
  double loss = logistic_loss_and_gradient(xs, y, n_classes, w, b, params.l2, &gw, &gb);
  if (loss_trace) loss_trace->push_back(loss);

  Matrix w_try;
  std::vector<double> b_try;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    bool accepted = false;
    for (int halvings = 0; halvings < 50; ++halvings) {
      w_try = w;
      b_try = b;
      for (size_t idx = 0; idx < w_try.data.size(); ++idx) w_try.data[idx] -= step * gw.data[idx];
      for (size_t c = 0; c < n_classes; ++c) b_try[c] -= step * gb[c];
      double trial = logistic_loss_and_gradient(xs, y, n_classes, w_try, b_try, params.l2,
                                                nullptr, nullptr);
      if (trial <= loss + 1e-12) {
        w = std::move(w_try);
        b = std::move(b_try);
        loss = trial;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // no descent direction at any representable step
    if (loss_trace) loss_trace->push_back(loss);
    loss = logistic_loss_and_gradient(xs, y, n_classes, w, b, params.l2, &gw, &gb);
  }

  return std::make_shared<LogisticClassifier>(std::move(standardizer), std::move(w),
                                              std::move(b));
}

// --- random forest -----------------------------------------------------------

namespace {

struct TreeNode {
  int feature = -1;        // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int vote = -1;
};

struct Tree {
  std::vector<TreeNode> nodes;

  int predict(std::span<const double> x) const {
    int node = 0;
    while (nodes[static_cast<size_t>(node)].feature >= 0) {
      const TreeNode& n = nodes[static_cast<size_t>(node)];
      node = x[static_cast<size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<size_t>(node)].vote;
  }
};

double gini(const std::vector<int64_t>& counts, int64_t total) {
  double g = 1.0;
  for (int64_t c : counts) {
    double f = static_cast<double>(c) / static_cast<double>(total);
    g -= f * f;
  }
  return g;
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, const std::vector<int>& y, size_t n_classes,
              const ForestParams& params, size_t features_per_split, Rng& rng)
      : x_(x), y_(y), n_classes_(n_classes), params_(params),
        features_per_split_(features_per_split), rng_(rng) {}

  Tree build(std::vector<size_t> rows) {
    tree_.nodes.clear();
    grow(std::move(rows), 0);
    return std::move(tree_);
  }

 private:
  int grow(std::vector<size_t> rows, int depth) {
    std::vector<int64_t> counts(n_classes_, 0);
    for (size_t r : rows) counts[static_cast<size_t>(y_[r])]++;
    const int64_t total = static_cast<int64_t>(rows.size());

    const int node_id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();

    auto make_leaf = [&]() {
      int vote = 0;
      for (size_t c = 1; c < n_classes_; ++c) {
        if (counts[c] > counts[static_cast<size_t>(vote)]) vote = static_cast<int>(c);
      }
      tree_.nodes[static_cast<size_t>(node_id)].vote = vote;
      return node_id;
    };

    const double parent_gini = gini(counts, total);
    bool pure = false;
    for (int64_t c : counts) {
      if (c == total) pure = true;
    }
    if (pure || rows.size() < 2 * static_cast<size_t>(params_.min_leaf) ||
        (params_.max_depth >= 0 && depth >= params_.max_depth)) {
      return make_leaf();
    }

    // Best (feature, threshold) over a random feature subset.
    int best_feature = -1;
    double best_threshold = 0.0;
    double best_gini = parent_gini - 1e-12;
    std::vector<size_t> features = rng_.sample_indices(x_.cols, features_per_split_);
    std::vector<std::pair<double, int>> vals;
    for (size_t f : features) {
      vals.clear();
      vals.reserve(rows.size());
      for (size_t r : rows) vals.emplace_back(x_.at(r, f), y_[r]);
      std::sort(vals.begin(), vals.end());
      std::vector<int64_t> left_counts(n_classes_, 0);
      for (size_t i = 0; i + 1 < vals.size(); ++i) {
        left_counts[static_cast<size_t>(vals[i].second)]++;
        if (vals[i].first == vals[i + 1].first) continue;
        const int64_t n_left = static_cast<int64_t>(i + 1);
        const int64_t n_right = total - n_left;
        if (n_left < params_.min_leaf || n_right < params_.min_leaf) continue;
        std::vector<int64_t> right_counts(n_classes_);
        for (size_t c = 0; c < n_classes_; ++c) right_counts[c] = counts[c] - left_counts[c];
        double split_gini =
            (static_cast<double>(n_left) * gini(left_counts, n_left) +
             static_cast<double>(n_right) * gini(right_counts, n_right)) /
            static_cast<double>(total);
        if (split_gini < best_gini - 1e-12) {
          best_gini = split_gini;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (vals[i].first + vals[i + 1].first);
          // The midpoint of two adjacent representable doubles can round up
          // to the right value; fall back to the left boundary so the split
          // always separates the groups.
          if (!(best_threshold < vals[i + 1].first)) best_threshold = vals[i].first;
        }
      }
    }
    if (best_feature < 0) return make_leaf();

    std::vector<size_t> left_rows, right_rows;
    for (size_t r : rows) {
      if (x_.at(r, static_cast<size_t>(best_feature)) <= best_threshold) {
        left_rows.push_back(r);
      } else {
        right_rows.push_back(r);
      }
    }
    rows.clear();
    rows.shrink_to_fit();

    tree_.nodes[static_cast<size_t>(node_id)].feature = best_feature;
    tree_.nodes[static_cast<size_t>(node_id)].threshold = best_threshold;
    int left_id = grow(std::move(left_rows), depth + 1);
    tree_.nodes[static_cast<size_t>(node_id)].left = left_id;
    int right_id = grow(std::move(right_rows), depth + 1);
    tree_.nodes[static_cast<size_t>(node_id)].right = right_id;
    return node_id;
  }

  const Matrix& x_;
  const std::vector<int>& y_;
  size_t n_classes_;
  const ForestParams& params_;
  size_t features_per_split_;
  Rng& rng_;
  Tree tree_;
};

class ForestClassifier : public TrainedClassifier {
 public:
  ForestClassifier(std::vector<Tree> trees, size_t n_classes, size_t dim)
      : trees_(std::move(trees)), n_classes_(n_classes), dim_(dim) {}

  std::vector<double> predict_scores(std::span<const double> x) const override {
    if (x.size() != dim_) throw Error("classifier: feature vector has wrong length");
    std::vector<double> votes(n_classes_, 0.0);
    for (const Tree& t : trees_) votes[static_cast<size_t>(t.predict(x))] += 1.0;
    for (double& v : votes) v /= static_cast<double>(trees_.size());
    return votes;
  }
  size_t num_classes() const override { return n_classes_; }

 private:
  std::vector<Tree> trees_;
  size_t n_classes_;
  size_t dim_;
};

}  // namespace

ClassifierPtr train_random_forest(const Matrix& x, const std::vector<int>& y, size_t n_classes,
                                  const ForestParams& params, uint64_t seed) {
  check_inputs(x, y, n_classes);
  if (x.rows < 2) throw Error("random forest: need at least 2 samples");
  if (params.trees < 1 || params.min_leaf < 1) {
    throw Error("random forest: invalid hyperparameters");
  }
  if (distinct_labels(y) < 2) {
    return constant_from_labels(y, n_classes, x.cols);
  }

  // Canonical row order: all per-tree randomness is keyed by tree index, so
  // sorting first makes training invariant to input row permutations.
  std::vector<size_t> perm(x.rows);
  std::iota(perm.begin(), perm.end(), size_t{0});
  std::sort(perm.begin(), perm.end(), [&](size_t a, size_t b) {
    for (size_t j = 0; j < x.cols; ++j) {
      if (x.at(a, j) != x.at(b, j)) return x.at(a, j) < x.at(b, j);
    }
    return y[a] < y[b];
  });
  Matrix xs(x.rows, x.cols);
  std::vector<int> ys(x.rows);
  for (size_t i = 0; i < x.rows; ++i) {
    for (size_t j = 0; j < x.cols; ++j) xs.at(i, j) = x.at(perm[i], j);
    ys[i] = y[perm[i]];
  }

  size_t fps = params.features_per_split > 0
                   ? std::min<size_t>(static_cast<size_t>(params.features_per_split), x.cols)
                   : std::max<size_t>(1, static_cast<size_t>(std::floor(std::sqrt(
                                             static_cast<double>(x.cols)))));

  std::vector<Tree> trees;
  trees.reserve(static_cast<size_t>(params.trees));
  for (int t = 0; t < params.trees; ++t) {
    Rng rng(derive_seed(seed, "tree", static_cast<uint64_t>(t)));
    std::vector<size_t> bag(xs.rows);
    for (size_t i = 0; i < xs.rows; ++i) bag[i] = rng.uniform_int(xs.rows);
    TreeBuilder builder(xs, ys, n_classes, params, fps, rng);
    trees.push_back(builder.build(std::move(bag)));
  }
  return std::make_shared<ForestClassifier>(std::move(trees), n_classes, x.cols);
}

}  // namespace synaudit
