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

#include "synaudit/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <thread>

#include "synaudit/attacks.hpp"
#include "synaudit/common.hpp"
#include "synaudit/generators.hpp"
#include "synaudit/threat_model.hpp"

namespace synaudit {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

Json record_to_json(const Schema& schema, const Record& record,
                    std::optional<size_t> skip_attr = std::nullopt) {
  Json out = Json::object();
  for (size_t a = 0; a < schema.attribute_count(); ++a) {
    if (skip_attr && a == *skip_attr) continue;
    out[schema.attribute(a).name] =
        schema.attribute(a).values[static_cast<size_t>(record.values[a])];
  }
  return out;
}

// Turns a {attribute: label} table into a Record, collecting violations.
std::optional<Record> record_from_labels(const Schema& schema,
                                         const std::map<std::string, std::string>& labels,
                                         const std::string& where,
                                         std::optional<size_t> optional_attr,
                                         std::vector<std::string>& violations) {
  Record r;
  r.values.assign(schema.attribute_count(), -1);
  bool ok = true;
  for (const auto& [name, label] : labels) {
    auto attr = schema.attribute_index(name);
    if (!attr) {
      violations.push_back(where + ": unknown attribute '" + name + "'");
      ok = false;
      continue;
    }
    auto value = schema.value_index(*attr, label);
    if (!value) {
      violations.push_back(where + ": unknown label '" + label + "' for attribute '" + name +
                           "'");
      ok = false;
      continue;
    }
    r.values[*attr] = *value;
  }
  for (size_t a = 0; a < schema.attribute_count(); ++a) {
    if (optional_attr && a == *optional_attr) continue;
    if (r.values[a] < 0) {
      violations.push_back(where + ": missing attribute '" + schema.attribute(a).name + "'");
      ok = false;
    }
  }
  if (!ok) return std::nullopt;
  return r;
}

std::optional<std::vector<size_t>> resolve_order(const Schema& schema,
                                                 const std::vector<std::string>& names,
                                                 std::vector<std::string>& violations) {
  std::vector<size_t> order;
  bool ok = true;
  for (const auto& name : names) {
    auto idx = schema.attribute_index(name);
    if (!idx) {
      violations.push_back("[generator] order: unknown attribute '" + name + "'");
      ok = false;
      continue;
    }
    order.push_back(*idx);
  }
  if (ok && order.size() != schema.attribute_count()) {
    violations.push_back("[generator] order must list every attribute exactly once");
    ok = false;
  }
  if (!ok) return std::nullopt;
  return order;
}

GeneratorPtr build_builtin_generator(const std::string& name, std::optional<double> epsilon,
                                     std::optional<std::vector<size_t>> order) {
  if (name == "raw-copy") return raw_generator(RawMode::kCopy);
  if (name == "raw-bootstrap") return raw_generator(RawMode::kBootstrap);
  if (name == "independent-marginals") return independent_marginals_generator(epsilon);
  if (name == "chain-bayes") return chain_bayes_generator(epsilon, std::move(order));
  throw Error("unknown generator '" + name + "'");
}

Dataset load_config_data(const std::string& csv, const std::optional<std::string>& schema_path) {
  if (schema_path) return load_csv(csv, load_schema_json(*schema_path));
  return load_csv(csv);
}

struct ResolvedThreatModel {
  ThreatModel tm;
  Json resolved;  // echo for the report
  GeneratorPtr eval_generator;
};

ResolvedThreatModel build_threat_model(const AuditConfig& cfg, const Dataset& data,
                                       uint64_t seed) {
  const SchemaPtr schema = data.schema_ptr();
  std::vector<std::string> violations;
  Json resolved = Json::object();

  // Goal records.
  std::optional<size_t> aia_attr;
  if (cfg.goal_kind == "aia") {
    auto idx = schema->attribute_index(cfg.aia_attribute);
    if (!idx) {
      violations.push_back("[threat_model] unknown attribute '" + cfg.aia_attribute + "'");
    } else {
      aia_attr = idx;
    }
  }

  std::optional<Record> target;
  if (cfg.auto_target) {
    if (!data.empty()) {
      Rng rng(derive_seed(seed, "target-selection"));
      OutlierTarget outlier = select_outlier_target(data, cfg.outlier_candidates, rng);
      target = outlier.record;
      resolved["target_selection"] = {{"method", "auto-outlier"},
                                      {"row_index", outlier.row_index},
                                      {"log_likelihood", outlier.log_likelihood},
                                      {"candidates", cfg.outlier_candidates}};
    } else {
      violations.push_back("[data] dataset is empty; cannot select a target");
    }
  } else {
    target = record_from_labels(*schema, cfg.target_labels, "[threat_model] target", aia_attr,
                                violations);
  }

  std::optional<Record> replacement;
  if (cfg.goal_kind == "mia" && target) {
    if (cfg.replacement_labels) {
      replacement = record_from_labels(*schema, *cfg.replacement_labels,
                                       "[threat_model] replacement", std::nullopt, violations);
      if (replacement && *replacement == *target) {
        violations.push_back("[threat_model] replacement must differ from the target");
      }
    } else {
      // Default: a population record differing from the target, fixed once
      // at resolution time and echoed below.
      Rng rng(derive_seed(seed, "replacement"));
      for (int attempt = 0; attempt < 1000 && !replacement; ++attempt) {
        const Record& candidate = data.row(rng.uniform_int(data.size()));
        if (!(candidate == *target)) replacement = candidate;
      }
      if (!replacement) {
        violations.push_back(
            "[threat_model] could not draw a replacement record differing from the target");
      }
    }
  }

  std::optional<std::vector<size_t>> chain_order;
  if (cfg.chain_order) chain_order = resolve_order(*schema, *cfg.chain_order, violations);

  if (!violations.empty()) throw ConfigValidationError(std::move(violations));

  // Attacker goal.
  AttackerGoal goal = [&]() -> AttackerGoal {
    if (cfg.goal_kind == "mia") {
      return MiaGoal{*target, *replacement, cfg.prior_kind == "exact" ? 0.5 : cfg.p_in};
    }
    Record partial = *target;
    partial.values[*aia_attr] = -1;
    return AiaGoal{std::move(partial), *aia_attr};
  }();

  // Completion / target collision handling for the exact prior pool.
  std::vector<Record> excluded;
  if (cfg.goal_kind == "mia") {
    excluded = {*target, *replacement};
  } else {
    for (size_t v = 0; v < schema->attribute(*aia_attr).values.size(); ++v) {
      Record c = *target;
      c.values[*aia_attr] = static_cast<int32_t>(v);
      excluded.push_back(std::move(c));
    }
  }

  // Dataset prior.
  DatasetPrior prior = [&]() -> DatasetPrior {
    if (cfg.prior_kind == "exact") {
      std::vector<size_t> pool;
      for (size_t i = 0; i < data.size(); ++i) {
        const Record& row = data.row(i);
        if (std::none_of(excluded.begin(), excluded.end(),
                         [&](const Record& e) { return e == row; })) {
          pool.push_back(i);
        }
      }
      if (pool.size() < cfg.n_minus) {
        throw ConfigValidationError(
            {"[threat_model] n_minus exceeds the rows available after removing records "
             "equal to the target, replacement or completions (" +
             std::to_string(pool.size()) + " available)"});
      }
      Rng rng(derive_seed(seed, "d-minus"));
      std::vector<size_t> picked = rng.sample_indices(pool.size(), cfg.n_minus);
      std::vector<Record> rows;
      rows.reserve(cfg.n_minus);
      for (size_t i : picked) rows.push_back(data.row(pool[i]));
      return ExactPrior{Dataset(schema, std::move(rows))};
    }
    return AuxiliaryPrior::create(data, cfg.aux_fraction, cfg.test_fraction, cfg.n_real,
                                  derive_seed(seed, "aux-split"));
  }();

  // Generator knowledge.
  GeneratorPtr eval_generator;
  GeneratorKnowledge knowledge = [&]() -> GeneratorKnowledge {
    if (cfg.knowledge_kind == "uncertain-box") {
      MetaParameterized meta;
      meta.family_name = cfg.generator_name;
      const std::string name = cfg.generator_name;
      const auto order_copy = chain_order;
      meta.family = [name, order_copy](double gamma) {
        return build_builtin_generator(name, gamma, order_copy);
      };
      if (cfg.epsilon_prior->uniform) {
        meta.uniform_range = cfg.epsilon_prior->uniform;
      } else {
        meta.atoms = cfg.epsilon_prior->atoms;
      }
      validate_meta(meta);
      return UncertainBox{std::move(meta)};
    }
    GeneratorPtr gen =
        cfg.generator_name == "external"
            ? external_generator(cfg.external_command, cfg.external_workdir,
                                 cfg.external_timeout_seconds)
            : build_builtin_generator(cfg.generator_name, cfg.epsilon, chain_order);
    eval_generator = gen;
    if (cfg.knowledge_kind == "no-box") return NoBox{std::move(gen)};
    return BlackBox{std::move(gen)};
  }();

  // Copy generators can only emit as many rows as the real data holds.
  if (cfg.generator_name == "raw-copy") {
    const size_t real_size = cfg.prior_kind == "exact" ? cfg.n_minus + 1 : cfg.n_real;
    if (cfg.n_synthetic > real_size) {
      throw ConfigValidationError(
          {"[generator] raw-copy cannot emit " + std::to_string(cfg.n_synthetic) +
           " rows from real datasets of " + std::to_string(real_size)});
    }
  }

  ThreatModel tm = [&] {
    try {
      return ThreatModel(std::move(prior), std::move(knowledge), std::move(goal),
                         cfg.n_synthetic);
    } catch (const ConfigValidationError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigValidationError({std::string("[threat_model] ") + e.what()});
    }
  }();

  resolved["goal"] = cfg.goal_kind;
  if (cfg.goal_kind == "mia") {
    resolved["target"] = record_to_json(*schema, *target);
    resolved["replacement"] = record_to_json(*schema, *replacement);
    resolved["p_in"] = cfg.prior_kind == "exact" ? 0.5 : cfg.p_in;
  } else {
    resolved["target"] = record_to_json(*schema, *target, aia_attr);
    resolved["sensitive_attribute"] = cfg.aia_attribute;
  }
  resolved["n_cat"] = tm.n_cat();
  resolved["base_rate"] = tm.base_rate();
  if (eval_generator) {
    resolved["generator"] = eval_generator->descriptor();
  } else {
    resolved["generator"] = cfg.generator_name + " (uncertain-box)";
  }
  resolved["notes"] = {{"correlation_features", "pearson-on-one-hot"},
                       {"target_insertion", "row 0 of the real dataset"}};

  return ResolvedThreatModel{std::move(tm), std::move(resolved), eval_generator};
}

Json attack_entry_json(const AttackSpec& spec, const std::string& final_name) {
  Json entry = Json::object();
  entry["name"] = final_name;
  if (final_name != spec.name) entry["registry_name"] = spec.name;
  entry["params"] = spec.params;
  return entry;
}

Json build_report_json(const Json& config_echo, uint64_t seed, const Json& resolved,
                       const std::vector<AttackResult>& results,
                       const std::vector<Metrics>& metrics,
                       const std::optional<EffEpsReport>& eff, const Json& artifacts) {
  Json doc = Json::object();
  doc["version"] = kVersion;
  doc["seed"] = seed;
  doc["config"] = config_echo;
  doc["resolved"] = resolved;
  Json attack_list = Json::array();
  for (size_t i = 0; i < results.size(); ++i) {
    Json entry = Json::object();
    entry["name"] = results[i].attack_name;
    entry["n_test"] = results[i].samples.size();
    entry["base_rate"] = results[i].base_rate;
    entry["metrics"] = metrics_to_json(metrics[i]);
    attack_list.push_back(std::move(entry));
  }
  doc["attacks"] = std::move(attack_list);
  if (eff) doc["eff_epsilon"] = eff_eps_to_json(*eff);
  doc["artifacts"] = artifacts;
  return doc;
}

}  // namespace

AuditArtifacts run_audit(const AuditConfig& cfg, const AuditOptions& options) {
  const uint64_t seed = options.seed_override.value_or(cfg.seed);
  const unsigned threads = resolve_threads(options.threads);
  const fs::path outdir = options.output_dir_override.value_or(cfg.output_dir);
  fs::create_directories(outdir);

  Dataset data = load_config_data(cfg.data_csv, cfg.schema_path);
  ResolvedThreatModel rtm = build_threat_model(cfg, data, seed);
  const ThreatModel& tm = rtm.tm;

  // Attacks (duplicate registry names get an ordinal suffix).
  std::vector<AttackPtr> attacks;
  std::map<std::string, int> name_counts;
  Json attack_echo = Json::array();
  for (size_t i = 0; i < cfg.attacks.size(); ++i) {
    AttackPtr attack = make_attack(cfg.attacks[i].name, cfg.attacks[i].params, tm,
                                   derive_seed(seed, "attack", i));
    int ordinal = ++name_counts[attack->name()];
    if (ordinal > 1) attack->rename(attack->name() + "#" + std::to_string(ordinal));
    attack_echo.push_back(attack_entry_json(cfg.attacks[i], attack->name()));
    attacks.push_back(std::move(attack));
  }
  rtm.resolved["attacks"] = std::move(attack_echo);

  // Train.
  if (cfg.n_train > 0) {
    std::vector<LabeledSample> train_samples =
        tm.generate_samples(cfg.n_train, Partition::kTrain, derive_seed(seed, "train-stage"),
                            threads);
    for (auto& attack : attacks) attack->train(train_samples);
  } else {
    for (const auto& attack : attacks) {
      if (attack->needs_training()) {
        throw Error("attack '" + attack->name() + "' requires training samples");
      }
    }
  }

  // Evaluate.
  std::vector<AttackResult> results =
      evaluate(attacks, tm, cfg.n_test, derive_seed(seed, "test-stage"), threads);
  std::vector<Metrics> metrics;
  metrics.reserve(results.size());
  for (const auto& r : results) metrics.push_back(compute_metrics(r));

  std::optional<EffEpsReport> eff;
  if (cfg.eff_eps) {
    eff = estimate_eff_epsilon(results, cfg.eff_eps->delta, cfg.eff_eps->confidence,
                               cfg.eff_eps->select_fraction, seed);
  }

  AuditArtifacts artifacts;
  Json artifact_echo = Json::object();

  artifacts.scores_csv = (outdir / "scores.csv").string();
  write_scores_csv(results, artifacts.scores_csv);
  artifact_echo["scores_csv"] = "scores.csv";

  if (cfg.report_roc && tm.n_cat() == 2) {
    std::vector<std::pair<std::string, ROCCurve>> curves;
    for (const auto& r : results) {
      bool has_pos = false, has_neg = false;
      for (const auto& s : r.samples) (s.label == 1 ? has_pos : has_neg) = true;
      if (!has_pos || !has_neg) continue;
      std::vector<double> scores(r.samples.size());
      std::vector<int> labels(r.samples.size());
      for (size_t i = 0; i < r.samples.size(); ++i) {
        scores[i] = r.samples[i].scores[1];
        labels[i] = r.samples[i].label;
      }
      curves.emplace_back(r.attack_name, roc_curve(scores, labels));
    }
    if (!curves.empty()) {
      artifacts.roc_svg = (outdir / "roc.svg").string();
      render_roc_svg(curves, artifacts.roc_svg);
      artifact_echo["roc_svg"] = "roc.svg";
    }
  }

  if (eff) {
    artifacts.eff_eps_json = (outdir / "eff_epsilon.json").string();
    write_json_file(eff_eps_to_json(*eff), artifacts.eff_eps_json);
    artifact_echo["eff_epsilon_json"] = "eff_epsilon.json";
  }

  artifacts.report_json = (outdir / "report.json").string();
  write_json_file(
      build_report_json(cfg.raw, seed, rtm.resolved, results, metrics, eff, artifact_echo),
      artifacts.report_json);
  return artifacts;
}

nlohmann::ordered_json select_target_report(const std::string& data_csv,
                                            const std::optional<std::string>& schema_path,
                                            size_t candidate_count, uint64_t seed) {
  Dataset data = load_config_data(data_csv, schema_path);
  Rng rng(derive_seed(seed, "target-selection"));
  OutlierTarget outlier = select_outlier_target(data, candidate_count, rng);
  Json doc = Json::object();
  doc["target"] = record_to_json(data.schema(), outlier.record);
  doc["row_index"] = outlier.row_index;
  doc["log_likelihood"] = outlier.log_likelihood;
  doc["candidates"] = std::min(candidate_count, data.size());
  doc["seed"] = seed;
  return doc;
}

void run_generate(const std::string& data_csv, const std::optional<std::string>& schema_path,
                  const GenerateSpec& spec, size_t n_out, uint64_t seed,
                  const std::string& out_csv) {
  Dataset data = load_config_data(data_csv, schema_path);
  GeneratorPtr generator;
  if (spec.generator_name == "external") {
    if (spec.external_command.empty()) {
      throw Error("generate: the external generator needs a command");
    }
    generator = external_generator(spec.external_command, spec.external_workdir,
                                   spec.external_timeout_seconds);
  } else {
    std::optional<std::vector<size_t>> order;
    if (spec.chain_order) {
      std::vector<std::string> violations;
      order = resolve_order(data.schema(), *spec.chain_order, violations);
      if (!violations.empty()) throw Error(violations.front());
    }
    generator = build_builtin_generator(spec.generator_name, spec.epsilon, std::move(order));
  }
  Rng rng(derive_seed(seed, "generate"));
  Dataset synthetic = generator->generate(data, n_out, rng);
  write_csv(synthetic, out_csv);
}

AuditArtifacts run_report(const std::string& scores_csv, const ReportSpec& spec,
                          const std::string& output_dir, uint64_t seed) {
  std::vector<AttackResult> results = load_scores_csv(scores_csv);
  const fs::path outdir(output_dir);
  fs::create_directories(outdir);

  std::vector<Metrics> metrics;
  metrics.reserve(results.size());
  for (const auto& r : results) metrics.push_back(compute_metrics(r));

  std::optional<EffEpsReport> eff;
  if (spec.eff_eps) {
    eff = estimate_eff_epsilon(results, spec.eff_eps->delta, spec.eff_eps->confidence,
                               spec.eff_eps->select_fraction, seed);
  }

  AuditArtifacts artifacts;
  Json artifact_echo = Json::object();
  if (spec.roc && results[0].n_cat == 2) {
    std::vector<std::pair<std::string, ROCCurve>> curves;
    for (const auto& r : results) {
      bool has_pos = false, has_neg = false;
      for (const auto& s : r.samples) (s.label == 1 ? has_pos : has_neg) = true;
      if (!has_pos || !has_neg) continue;
      std::vector<double> scores(r.samples.size());
      std::vector<int> labels(r.samples.size());
      for (size_t i = 0; i < r.samples.size(); ++i) {
        scores[i] = r.samples[i].scores[1];
        labels[i] = r.samples[i].label;
      }
      curves.emplace_back(r.attack_name, roc_curve(scores, labels));
    }
    if (!curves.empty()) {
      artifacts.roc_svg = (outdir / "roc.svg").string();
      render_roc_svg(curves, artifacts.roc_svg);
      artifact_echo["roc_svg"] = "roc.svg";
    }
  }
  if (eff) {
    artifacts.eff_eps_json = (outdir / "eff_epsilon.json").string();
    write_json_file(eff_eps_to_json(*eff), artifacts.eff_eps_json);
    artifact_echo["eff_epsilon_json"] = "eff_epsilon.json";
  }

  Json resolved = Json::object();
  resolved["source_scores"] = scores_csv;
  resolved["note"] = "recomputed from persisted scores; base_rate assumed 1/n_cat";
  artifacts.report_json = (outdir / "report.json").string();
  write_json_file(build_report_json(Json(nullptr), seed, resolved, results, metrics, eff,
                                    artifact_echo),
                  artifacts.report_json);
  return artifacts;
}

}  // namespace synaudit
