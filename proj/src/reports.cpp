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

#include "synaudit/reports.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "synaudit/common.hpp"
#include "synaudit/parallel.hpp"

namespace synaudit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty()) {
    throw Error("scores csv: malformed number '" + s + "'");
  }
  return v;
}

}  // namespace

// --- evaluation ------------------------------------------------------------

std::vector<AttackResult> evaluate(const std::vector<AttackPtr>& attacks, const ThreatModel& tm,
                                   size_t n_test, uint64_t master_seed, unsigned threads) {
  if (attacks.empty()) throw Error("evaluate: no attacks");
  if (n_test == 0) throw Error("evaluate: n_test must be >= 1");

  std::vector<LabeledSample> samples =
      tm.generate_samples(n_test, Partition::kTest, master_seed, threads);

  std::vector<AttackResult> results(attacks.size());
  for (size_t a = 0; a < attacks.size(); ++a) {
    results[a].attack_name = attacks[a]->name();
    results[a].n_cat = attacks[a]->n_cat();
    results[a].base_rate = tm.base_rate();
    results[a].samples.resize(n_test);
  }

  parallel_for(n_test, threads, [&](size_t i) {
    for (size_t a = 0; a < attacks.size(); ++a) {
      std::vector<double> scores = attacks[a]->score(samples[i].synthetic);
      if (scores.size() != attacks[a]->n_cat()) {
        throw Error("attack '" + attacks[a]->name() + "' emitted a score vector of length " +
                    std::to_string(scores.size()));
      }
      size_t decision = attacks[a]->decide(scores);
      results[a].samples[i] = SampleOutcome{samples[i].label, std::move(scores), decision};
    }
  });
  return results;
}

// --- metrics ----------------------------------------------------------------

Metrics compute_metrics(const AttackResult& result) {
  const size_t n = result.samples.size();
  if (n == 0) throw Error("metrics: empty attack result");
  Metrics m;
  size_t correct = 0;
  for (const auto& s : result.samples) {
    if (s.decision == static_cast<size_t>(s.label)) ++correct;
  }
  m.accuracy = static_cast<double>(correct) / static_cast<double>(n);

  m.per_class.resize(result.n_cat);
  for (size_t c = 0; c < result.n_cat; ++c) {
    size_t tp = 0, pos = 0, fp = 0;
    for (const auto& s : result.samples) {
      const bool is_class = static_cast<size_t>(s.label) == c;
      if (is_class) {
        ++pos;
        if (s.decision == c) ++tp;
      } else if (s.decision == c) {
        ++fp;
      }
    }
    const size_t neg = n - pos;
    m.per_class[c].tpr = pos ? static_cast<double>(tp) / static_cast<double>(pos) : 0.0;
    m.per_class[c].fpr = neg ? static_cast<double>(fp) / static_cast<double>(neg) : 0.0;
  }

  if (result.n_cat == 2) {
    bool has_pos = false, has_neg = false;
    for (const auto& s : result.samples) (s.label == 1 ? has_pos : has_neg) = true;
    if (has_pos && has_neg) {
      std::vector<double> scores(n);
      std::vector<int> labels(n);
      for (size_t i = 0; i < n; ++i) {
        scores[i] = result.samples[i].scores[1];
        labels[i] = result.samples[i].label;
      }
      m.auc = auc(scores, labels);
    }
  }

  const double br = result.base_rate;
  if (br >= 1.0) {
    m.privacy_gain = 1.0;  // nothing can beat a certain prior
  } else {
    m.privacy_gain = 1.0 - std::max(0.0, (m.accuracy - br) / (1.0 - br));
  }
  return m;
}

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw Error("auc: scores and labels differ in length");
  const size_t n = scores.size();
  size_t n_pos = 0;
  for (int label : labels) {
    if (label != 0 && label != 1) throw Error("auc: labels must be 0/1");
    n_pos += static_cast<size_t>(label);
  }
  const size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw Error("auc: both classes must be present");

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });

  // Average ranks over tie groups, then the Mann-Whitney statistic.
  std::vector<double> rank(n);
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based
    for (size_t q = i; q <= j; ++q) rank[order[q]] = avg;
    i = j + 1;
  }
  double rank_sum = 0.0;
  for (size_t q = 0; q < n; ++q) {
    if (labels[q] == 1) rank_sum += rank[q];
  }
  const double u = rank_sum - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

ROCCurve roc_curve(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) {
    throw Error("roc_curve: scores and labels differ in length");
  }
  size_t n_pos = 0;
  for (int label : labels) {
    if (label != 0 && label != 1) throw Error("roc_curve: labels must be 0/1");
    n_pos += static_cast<size_t>(label);
  }
  const size_t n_neg = scores.size() - n_pos;
  if (n_pos == 0 || n_neg == 0) throw Error("roc_curve: both classes must be present");

  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] > scores[b]; });

  ROCCurve curve;
  curve.points.push_back({0.0, 0.0, kInf});
  size_t tp = 0, fp = 0;
  size_t i = 0;
  while (i < order.size()) {
    const double threshold = scores[order[i]];
    while (i < order.size() && scores[order[i]] == threshold) {
      if (labels[order[i]] == 1) {
        ++tp;
      } else {
        ++fp;
      }
      ++i;
    }
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(n_neg),
                            static_cast<double>(tp) / static_cast<double>(n_pos), threshold});
  }
  curve.points.push_back({1.0, 1.0, -kInf});
  return curve;
}

double ROCCurve::area() const {
  double total = 0.0;
  for (size_t i = 1; i < points.size(); ++i) {
    total += (points[i].fpr - points[i - 1].fpr) * 0.5 * (points[i].tpr + points[i - 1].tpr);
  }
  return total;
}

// --- effective epsilon --------------------------------------------------------

namespace {

double dp_ratio(double num, double den) {
  if (num <= 0.0) return 0.0;
  if (den <= 0.0) return kInf;
  return num / den;
}

}  // namespace

double eff_epsilon_point(double tp, double fp, double delta) {
  if (tp < 0.0 || tp > 1.0 || fp < 0.0 || fp > 1.0) {
    throw Error("eff_epsilon_point: rates must lie in [0, 1]");
  }
  if (delta < 0.0) throw Error("eff_epsilon_point: delta must be >= 0");
  const double r =
      std::max({1.0, dp_ratio(tp - delta, fp), dp_ratio(1.0 - fp - delta, 1.0 - tp)});
  return std::log(r);
}

namespace {

// log P[Bin(n, p) >= k] building block: log C(n, i) + i log p + (n-i) log(1-p)
// summed in log space.
class BinomialTail {
 public:
  explicit BinomialTail(int64_t n) : n_(n), log_fact_(static_cast<size_t>(n) + 1, 0.0) {
    for (int64_t i = 1; i <= n; ++i) {
      log_fact_[static_cast<size_t>(i)] =
          log_fact_[static_cast<size_t>(i - 1)] + std::log(static_cast<double>(i));
    }
  }

  // P[Bin(n, p) >= k]
  double upper(int64_t k, double p) const {
    if (k <= 0) return 1.0;
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return 1.0;
    return sum_range(k, n_, p);
  }

  // P[Bin(n, p) <= k]
  double lower(int64_t k, double p) const {
    if (k >= n_) return 1.0;
    if (p <= 0.0) return 1.0;
    if (p >= 1.0) return 0.0;
    return sum_range(0, k, p);
  }

 private:
  double sum_range(int64_t from, int64_t to, double p) const {
    const double log_p = std::log(p);
    const double log_q = std::log1p(-p);
    double max_term = -kInf;
    std::vector<double> terms;
    terms.reserve(static_cast<size_t>(to - from + 1));
    for (int64_t i = from; i <= to; ++i) {
      const double t = log_choose(i) + static_cast<double>(i) * log_p +
                       static_cast<double>(n_ - i) * log_q;
      terms.push_back(t);
      max_term = std::max(max_term, t);
    }
    double total = 0.0;
    for (double t : terms) total += std::exp(t - max_term);
    const double result = std::exp(max_term) * total;
    return std::min(result, 1.0);
  }

  double log_choose(int64_t i) const {
    return log_fact_[static_cast<size_t>(n_)] - log_fact_[static_cast<size_t>(i)] -
           log_fact_[static_cast<size_t>(n_ - i)];
  }

  int64_t n_;
  std::vector<double> log_fact_;
};

}  // namespace

BinomialInterval clopper_pearson(int64_t successes, int64_t trials, double alpha) {
  if (trials < 1) throw Error("clopper_pearson: trials must be >= 1");
  if (successes < 0 || successes > trials) {
    throw Error("clopper_pearson: successes out of range");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error("clopper_pearson: alpha must lie in (0, 1)");

  const BinomialTail tail(trials);
  const double target = alpha / 2.0;
  BinomialInterval interval;

  if (successes == 0) {
    interval.lo = 0.0;
  } else {
    // P[Bin(n, p) >= k] is increasing in p; find p with tail = alpha/2.
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double mid = 0.5 * (lo + hi);
      if (tail.upper(successes, mid) < target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    interval.lo = 0.5 * (lo + hi);
  }

  if (successes == trials) {
    interval.hi = 1.0;
  } else {
    // P[Bin(n, p) <= k] is decreasing in p.
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      double mid = 0.5 * (lo + hi);
      if (tail.lower(successes, mid) > target) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    interval.hi = 0.5 * (lo + hi);
  }
  return interval;
}

EffEpsReport estimate_eff_epsilon(const std::vector<AttackResult>& results, double delta,
                                  double confidence, double select_fraction, uint64_t seed) {
  if (results.empty()) throw Error("eff-epsilon: no attack results");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error("eff-epsilon: confidence must lie in (0, 1)");
  }
  if (!(select_fraction > 0.0 && select_fraction < 1.0)) {
    throw Error("eff-epsilon: select_fraction must lie in (0, 1)");
  }
  const size_t n = results[0].samples.size();
  for (const auto& r : results) {
    if (r.n_cat != 2) throw Error("eff-epsilon: requires a binary goal");
    if (r.samples.size() != n) throw Error("eff-epsilon: attack results differ in length");
    for (size_t i = 0; i < n; ++i) {
      if (r.samples[i].label != results[0].samples[i].label) {
        throw Error("eff-epsilon: attack results disagree on sample labels");
      }
    }
  }
  if (n < 20) throw Error("eff-epsilon: needs at least 20 test samples");

  std::vector<size_t> idx(n);
  std::iota(idx.begin(), idx.end(), size_t{0});
  Rng rng(derive_seed(seed, "eff-eps-split"));
  rng.shuffle(idx);
  size_t n_select = std::max<size_t>(1, static_cast<size_t>(std::floor(
                                            select_fraction * static_cast<double>(n))));
  if (n_select >= n) n_select = n - 1;
  std::vector<size_t> select(idx.begin(), idx.begin() + static_cast<ptrdiff_t>(n_select));
  std::vector<size_t> holdout(idx.begin() + static_cast<ptrdiff_t>(n_select), idx.end());

  auto count_classes = [&](const std::vector<size_t>& part, const char* which) {
    size_t pos = 0;
    for (size_t i : part) {
      if (results[0].samples[i].label == 1) ++pos;
    }
    if (pos == 0 || pos == part.size()) {
      throw Error(std::string("eff-epsilon: ") + which + " split contains a single class");
    }
    return pos;
  };
  const size_t select_pos = count_classes(select, "selection");
  count_classes(holdout, "holdout");

  // Greedy selection: maximize the epsilon point estimate over every attack
  // and every distinct score threshold in the selection split. Ties keep the
  // earlier attack and the lower threshold.
  size_t best_attack = 0;
  double best_tau = 0.0;
  double best_eps = -1.0;
  for (size_t a = 0; a < results.size(); ++a) {
    std::vector<double> taus;
    taus.reserve(select.size());
    for (size_t i : select) taus.push_back(results[a].samples[i].scores[1]);
    std::sort(taus.begin(), taus.end());
    taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
    for (double tau : taus) {
      size_t tp = 0, fp = 0;
      for (size_t i : select) {
        if (results[a].samples[i].scores[1] >= tau) {
          if (results[a].samples[i].label == 1) {
            ++tp;
          } else {
            ++fp;
          }
        }
      }
      const double tp_rate = static_cast<double>(tp) / static_cast<double>(select_pos);
      const double fp_rate =
          static_cast<double>(fp) / static_cast<double>(select.size() - select_pos);
      const double eps = eff_epsilon_point(tp_rate, fp_rate, delta);
      if (eps > best_eps) {
        best_eps = eps;
        best_attack = a;
        best_tau = tau;
      }
    }
  }

  EffEpsReport report;
  report.attack = results[best_attack].attack_name;
  report.threshold = best_tau;
  report.delta = delta;
  report.confidence = confidence;
  report.n_select = n_select;
  report.n_holdout = holdout.size();

  for (size_t i : holdout) {
    const auto& s = results[best_attack].samples[i];
    const bool positive_decision = s.scores[1] >= best_tau;
    if (s.label == 1) {
      positive_decision ? ++report.tp : ++report.fn;
    } else {
      positive_decision ? ++report.fp : ++report.tn;
    }
  }

  const int64_t n_pos = report.tp + report.fn;
  const int64_t n_neg = report.fp + report.tn;
  const double tp_rate = static_cast<double>(report.tp) / static_cast<double>(n_pos);
  const double fp_rate = static_cast<double>(report.fp) / static_cast<double>(n_neg);
  report.eps_point = eff_epsilon_point(tp_rate, fp_rate, delta);

  // Bonferroni: the overall 1 - confidence failure budget is split across
  // the TP and FP intervals.
  const double alpha_each = (1.0 - confidence) / 2.0;
  const BinomialInterval tp_ci = clopper_pearson(report.tp, n_pos, alpha_each);
  const BinomialInterval fp_ci = clopper_pearson(report.fp, n_neg, alpha_each);
  report.eps_lo = eff_epsilon_point(tp_ci.lo, fp_ci.hi, delta);
  report.eps_hi_heuristic = eff_epsilon_point(tp_ci.hi, fp_ci.lo, delta);
  return report;
}

// --- rendering and persistence ---------------------------------------------

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

}  // namespace

void render_roc_svg(const std::vector<std::pair<std::string, ROCCurve>>& curves,
                    const std::string& path) {
  if (curves.empty()) throw Error("render_roc_svg: no curves");

  auto sx = [](double u) { return 60.0 + 460.0 * u; };
  auto sy = [](double v) { return 430.0 - 400.0 * v; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"560\" height=\"480\" "
         "viewBox=\"0 0 560 480\">\n";
  svg << "  <rect x=\"60\" y=\"30\" width=\"460\" height=\"400\" fill=\"white\" "
         "stroke=\"#333333\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double t = tick / 4.0;
    svg << "  <line x1=\"" << fixed(sx(t), 1) << "\" y1=\"430\" x2=\"" << fixed(sx(t), 1)
        << "\" y2=\"436\" stroke=\"#333333\"/>\n";
    svg << "  <text x=\"" << fixed(sx(t), 1)
        << "\" y=\"450\" font-size=\"11\" text-anchor=\"middle\">" << fixed(t, 2)
        << "</text>\n";
    svg << "  <line x1=\"54\" y1=\"" << fixed(sy(t), 1) << "\" x2=\"60\" y2=\""
        << fixed(sy(t), 1) << "\" stroke=\"#333333\"/>\n";
    svg << "  <text x=\"48\" y=\"" << fixed(sy(t) + 4.0, 1)
        << "\" font-size=\"11\" text-anchor=\"end\">" << fixed(t, 2) << "</text>\n";
  }
  svg << "  <text x=\"290\" y=\"472\" font-size=\"12\" text-anchor=\"middle\">false positive "
         "rate</text>\n";
  svg << "  <text x=\"16\" y=\"230\" font-size=\"12\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 16 230)\">true positive rate</text>\n";

  // Random baseline.
  svg << "  <polyline points=\"" << fixed(sx(0), 1) << "," << fixed(sy(0), 1) << " "
      << fixed(sx(1), 1) << "," << fixed(sy(1), 1)
      << "\" fill=\"none\" stroke=\"#999999\" stroke-dasharray=\"6,4\"/>\n";

  for (size_t c = 0; c < curves.size(); ++c) {
    const char* color = kPalette[c % (sizeof(kPalette) / sizeof(kPalette[0]))];
    svg << "  <polyline points=\"";
    for (size_t i = 0; i < curves[c].second.points.size(); ++i) {
      const auto& pt = curves[c].second.points[i];
      if (i) svg << ' ';
      svg << fixed(sx(pt.fpr), 2) << ',' << fixed(sy(pt.tpr), 2);
    }
    svg << "\" fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
  }

  // Legend, bottom right of the plot area.
  const double legend_x = 300.0;
  double legend_y = 430.0 - 14.0 * static_cast<double>(curves.size()) - 10.0;
  for (size_t c = 0; c < curves.size(); ++c) {
    const char* color = kPalette[c % (sizeof(kPalette) / sizeof(kPalette[0]))];
    const std::string label = curves[c].first.empty() ? "unnamed" : curves[c].first;
    svg << "  <line x1=\"" << fixed(legend_x, 1) << "\" y1=\"" << fixed(legend_y - 4.0, 1)
        << "\" x2=\"" << fixed(legend_x + 24.0, 1) << "\" y2=\"" << fixed(legend_y - 4.0, 1)
        << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
    svg << "  <text x=\"" << fixed(legend_x + 30.0, 1) << "\" y=\"" << fixed(legend_y, 1)
        << "\" font-size=\"11\">" << xml_escape(label) << " (AUC="
        << fixed(curves[c].second.area(), 3) << ")</text>\n";
    legend_y += 14.0;
  }
  svg << "</svg>\n";

  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path);
  out << svg.str();
  if (!out) throw Error("write failed: " + path);
}

void write_scores_csv(const std::vector<AttackResult>& results, const std::string& path) {
  if (results.empty()) throw Error("write_scores_csv: no results");
  const size_t n_cat = results[0].n_cat;
  for (const auto& r : results) {
    if (r.n_cat != n_cat) throw Error("write_scores_csv: attacks disagree on n_cat");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path);
  out << "sample_index,attack,label";
  for (size_t c = 0; c < n_cat; ++c) out << ",score_" << c;
  out << ",decision\n";
  for (const auto& r : results) {
    for (size_t i = 0; i < r.samples.size(); ++i) {
      const auto& s = r.samples[i];
      out << i << ',' << r.attack_name << ',' << s.label;
      for (double v : s.scores) out << ',' << format_double(v);
      out << ',' << s.decision << '\n';
    }
  }
  if (!out) throw Error("write failed: " + path);
}

std::vector<AttackResult> load_scores_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open scores csv: " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error("scores csv: empty file " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::vector<std::string> header;
  {
    std::string field;
    std::istringstream hs(line);
    while (std::getline(hs, field, ',')) header.push_back(field);
  }
  if (header.size() < 5 || header[0] != "sample_index" || header[1] != "attack" ||
      header[2] != "label" || header.back() != "decision") {
    throw Error("scores csv: unexpected header in " + path);
  }
  const size_t n_cat = header.size() - 4;
  if (n_cat < 2) {
    throw Error("scores csv: needs score_0 and score_1 columns at least (" + path + ")");
  }
  for (size_t c = 0; c < n_cat; ++c) {
    if (header[3 + c] != "score_" + std::to_string(c)) {
      throw Error("scores csv: missing column score_" + std::to_string(c) + " in " + path);
    }
  }

  std::vector<AttackResult> results;
  std::map<std::string, size_t> attack_index;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (fields.size() != header.size()) {
      throw Error("scores csv: ragged row at line " + std::to_string(line_no));
    }
    const size_t sample_index = static_cast<size_t>(std::stoull(fields[0]));
    const std::string& attack = fields[1];
    auto [it, inserted] = attack_index.emplace(attack, results.size());
    if (inserted) {
      results.push_back(AttackResult{attack, n_cat, 1.0 / static_cast<double>(n_cat), {}});
    }
    AttackResult& r = results[it->second];
    if (sample_index != r.samples.size()) {
      throw Error("scores csv: sample indices out of order at line " + std::to_string(line_no));
    }
    SampleOutcome s;
    s.label = std::stoi(fields[2]);
    if (s.label < 0 || static_cast<size_t>(s.label) >= n_cat) {
      throw Error("scores csv: label out of range at line " + std::to_string(line_no));
    }
    for (size_t c = 0; c < n_cat; ++c) s.scores.push_back(parse_double(fields[3 + c]));
    s.decision = static_cast<size_t>(std::stoull(fields.back()));
    if (s.decision >= n_cat) {
      throw Error("scores csv: decision out of range at line " + std::to_string(line_no));
    }
    r.samples.push_back(std::move(s));
  }
  if (results.empty()) throw Error("scores csv: no rows in " + path);
  const size_t n = results[0].samples.size();
  for (const auto& r : results) {
    if (r.samples.size() != n) {
      throw Error("scores csv: attacks cover different sample counts in " + path);
    }
    for (size_t i = 0; i < n; ++i) {
      if (r.samples[i].label != results[0].samples[i].label) {
        throw Error("scores csv: attacks disagree on labels in " + path);
      }
    }
  }
  return results;
}

void write_json_file(const nlohmann::ordered_json& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw Error("write failed: " + path);
}

namespace {

nlohmann::ordered_json json_number(double v) {
  // JSON has no infinities; emit them as strings so documents stay valid.
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

nlohmann::ordered_json metrics_to_json(const Metrics& metrics) {
  nlohmann::ordered_json doc;
  doc["accuracy"] = metrics.accuracy;
  doc["privacy_gain"] = metrics.privacy_gain;
  doc["privacy_gain_formula"] = kPrivacyGainFormula;
  if (metrics.auc) doc["auc"] = *metrics.auc;
  nlohmann::ordered_json per_class = nlohmann::ordered_json::array();
  for (const auto& c : metrics.per_class) {
    per_class.push_back({{"tpr", c.tpr}, {"fpr", c.fpr}});
  }
  doc["per_class"] = std::move(per_class);
  return doc;
}

nlohmann::ordered_json eff_eps_to_json(const EffEpsReport& report) {
  nlohmann::ordered_json doc;
  doc["attack"] = report.attack;
  doc["threshold"] = json_number(report.threshold);
  doc["delta"] = report.delta;
  doc["confidence"] = report.confidence;
  doc["n_select"] = report.n_select;
  doc["n_holdout"] = report.n_holdout;
  doc["counts"] = {{"tp", report.tp}, {"fn", report.fn}, {"fp", report.fp}, {"tn", report.tn}};
  doc["eps_point"] = json_number(report.eps_point);
  doc["eps_lo"] = json_number(report.eps_lo);
  doc["eps_hi_heuristic"] = json_number(report.eps_hi_heuristic);
  doc["conventions"] =
      "ratios with nonpositive numerators contribute 0; positive numerator over zero "
      "denominator is inf; eps_lo uses Clopper-Pearson TP lower / FP upper bounds with a "
      "Bonferroni split of 1 - confidence; eps_hi_heuristic mirrors them and is informational";
  return doc;
}

}  // namespace synaudit
