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

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "synaudit/common.hpp"
#include "synaudit/config.hpp"
#include "synaudit/pipeline.hpp"

namespace {

using synaudit::AuditConfig;
using synaudit::AuditOptions;
using synaudit::ConfigValidationError;
using synaudit::Error;

int run_audit_cmd(const std::string& config_path, unsigned threads, bool seed_set,
                  uint64_t seed, const std::string& output_dir) {
  AuditConfig cfg = synaudit::load_audit_config(config_path);
  AuditOptions options;
  options.threads = threads;
  if (seed_set) options.seed_override = seed;
  if (!output_dir.empty()) options.output_dir_override = output_dir;
  synaudit::AuditArtifacts artifacts = synaudit::run_audit(cfg, options);
  std::cout << "report:      " << artifacts.report_json << "\n";
  std::cout << "scores:      " << artifacts.scores_csv << "\n";
  if (!artifacts.roc_svg.empty()) std::cout << "roc:         " << artifacts.roc_svg << "\n";
  if (!artifacts.eff_eps_json.empty()) {
    std::cout << "eff-epsilon: " << artifacts.eff_eps_json << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"synaudit: adversarial privacy evaluation of synthetic data generators"};
  app.require_subcommand(1);

  // audit
  auto* audit = app.add_subcommand("audit", "Run a full audit from a TOML config");
  std::string config_path;
  unsigned threads = 0;
  uint64_t seed = 0;
  std::string output_dir;
  audit->add_option("--config", config_path, "Audit config (TOML)")->required();
  audit->add_option("--threads", threads, "Worker cap (default: all cores)");
  auto* seed_opt = audit->add_option("--seed", seed, "Override the config seed");
  audit->add_option("--output-dir", output_dir, "Override the config output directory");

  // select-target
  auto* select = app.add_subcommand("select-target", "Pick an outlier record from a dataset");
  std::string data_csv;
  std::string schema_path;
  size_t candidates = 1000;
  uint64_t select_seed = 0;
  select->add_option("--data", data_csv, "Dataset CSV")->required();
  select->add_option("--schema", schema_path, "Schema JSON sidecar");
  select->add_option("--count", candidates, "Candidate sample size (default 1000)");
  select->add_option("--seed", select_seed, "Seed for candidate sampling");

  // generate
  auto* generate = app.add_subcommand("generate", "Run one generator call");
  std::string gen_data, gen_schema, gen_name, gen_out, gen_workdir;
  std::vector<std::string> gen_order, gen_command;
  double gen_epsilon = 0.0, gen_timeout = 300.0;
  size_t gen_n_out = 0;
  uint64_t gen_seed = 0;
  generate->add_option("--data", gen_data, "Real dataset CSV")->required();
  generate->add_option("--schema", gen_schema, "Schema JSON sidecar");
  generate->add_option("--generator", gen_name,
                       "raw-copy | raw-bootstrap | independent-marginals | chain-bayes | external")
      ->required();
  auto* eps_opt = generate->add_option("--epsilon", gen_epsilon, "Privacy budget");
  generate->add_option("--order", gen_order, "chain-bayes attribute order (repeatable)");
  generate->add_option("--command", gen_command, "External generator argv (repeatable)");
  generate->add_option("--workdir", gen_workdir, "External generator temp root");
  generate->add_option("--timeout", gen_timeout, "External generator timeout (seconds)");
  generate->add_option("--n-out", gen_n_out, "Synthetic rows to emit")->required();
  generate->add_option("--seed", gen_seed, "Seed");
  generate->add_option("--output", gen_out, "Output CSV path")->required();

  // report
  auto* report = app.add_subcommand("report", "Recompute reports from a scores CSV");
  std::string scores_csv, report_out = "synaudit-report";
  uint64_t report_seed = 0;
  bool report_roc = true;
  double ee_delta = 0.0, ee_confidence = 0.95, ee_fraction = 0.10;
  report->add_option("--scores", scores_csv, "scores.csv from a previous audit")->required();
  report->add_option("--output-dir", report_out, "Output directory");
  report->add_option("--seed", report_seed, "Seed (reuse the audit seed to reproduce splits)");
  report->add_flag("--roc,!--no-roc", report_roc, "Render the ROC curve (default on)");
  auto* ee_opt = report->add_flag("--eff-epsilon", "Estimate the effective-epsilon lower bound");
  report->add_option("--delta", ee_delta, "delta for the epsilon bound");
  report->add_option("--confidence", ee_confidence, "Confidence level (default 0.95)");
  report->add_option("--select-fraction", ee_fraction, "Selection split fraction (default 0.1)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (audit->parsed()) {
      return run_audit_cmd(config_path, threads, seed_opt->count() > 0, seed, output_dir);
    }
    if (select->parsed()) {
      std::optional<std::string> schema;
      if (!schema_path.empty()) schema = schema_path;
      std::cout << synaudit::select_target_report(data_csv, schema, candidates, select_seed)
                       .dump(2)
                << std::endl;
      return 0;
    }
    if (generate->parsed()) {
      synaudit::GenerateSpec spec;
      spec.generator_name = gen_name;
      if (eps_opt->count() > 0) spec.epsilon = gen_epsilon;
      if (!gen_order.empty()) spec.chain_order = gen_order;
      spec.external_command = gen_command;
      spec.external_workdir = gen_workdir;
      spec.external_timeout_seconds = gen_timeout;
      std::optional<std::string> schema;
      if (!gen_schema.empty()) schema = gen_schema;
      synaudit::run_generate(gen_data, schema, spec, gen_n_out, gen_seed, gen_out);
      std::cout << "wrote " << gen_out << "\n";
      return 0;
    }
    if (report->parsed()) {
      synaudit::ReportSpec spec;
      spec.roc = report_roc;
      if (ee_opt->count() > 0) {
        synaudit::EffEpsSpec ee;
        ee.delta = ee_delta;
        ee.confidence = ee_confidence;
        ee.select_fraction = ee_fraction;
        spec.eff_eps = ee;
      }
      synaudit::AuditArtifacts artifacts =
          synaudit::run_report(scores_csv, spec, report_out, report_seed);
      std::cout << "report: " << artifacts.report_json << "\n";
      return 0;
    }
  } catch (const ConfigValidationError& e) {
    std::cerr << "error: invalid configuration\n";
    for (const auto& violation : e.violations()) {
      std::cerr << "  - " << violation << "\n";
    }
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
