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

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "synaudit/config.hpp"
#include "synaudit/pipeline.hpp"
#include "test_util.hpp"

using namespace synaudit;
using namespace synaudit::test;

namespace {

// Small end-to-end config over a generated dataset.
std::string small_audit_toml(const std::string& csv, bool eff_eps) {
  std::string body =
      "seed = 11\n"
      "[data]\ncsv = \"" + csv + "\"\n" +
      "[generator]\nname = \"independent-marginals\"\nepsilon = 2.0\nn_synthetic = 40\n" +
      "[threat_model]\nprior = \"exact\"\nknowledge = \"black-box\"\ngoal = \"mia\"\n" +
      "n_minus = 30\ntarget = \"auto-outlier\"\n" +
      "[[attacks]]\nname = \"shadow-random-queries\"\nqueries = 30\n" +
      "[[attacks]]\nname = \"closest-distance\"\n" +
      "[[attacks]]\nname = \"density\"\n" +
      "[runs]\nn_train = 40\nn_test = 60\n" +
      "[reports]\nmetrics = true\nroc = true\n";
  if (eff_eps) body += "[reports.eff_epsilon]\ndelta = 0.0\nconfidence = 0.95\n";
  return body;
}

void write_demo_csv(const std::string& path, size_t rows) {
  Rng rng(31);
  std::ofstream out(path);
  out << "a,b,c,d\n";
  for (size_t i = 0; i < rows; ++i) {
    out << "a" << rng.uniform_int(3) << ",b" << rng.uniform_int(2) << ",c"
        << rng.uniform_int(4) << ",d" << rng.uniform_int(2) << "\n";
  }
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(SYNAUDIT_CLI) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("run_audit emits all four artifacts") {
  TempDir tmp("audit-artifacts");
  write_demo_csv(tmp.path("d.csv"), 200);
  write_file(tmp.path("audit.toml"), small_audit_toml(tmp.path("d.csv"), true));
  AuditConfig cfg = load_audit_config(tmp.path("audit.toml"));
  AuditOptions opts;
  opts.threads = 2;
  opts.output_dir_override = tmp.path("out");
  AuditArtifacts artifacts = run_audit(cfg, opts);

  CHECK(std::filesystem::exists(artifacts.report_json));
  CHECK(std::filesystem::exists(artifacts.scores_csv));
  CHECK(std::filesystem::exists(artifacts.roc_svg));
  CHECK(std::filesystem::exists(artifacts.eff_eps_json));

  auto report = nlohmann::ordered_json::parse(read_file(artifacts.report_json));
  CHECK(report["seed"] == 11);
  CHECK(report.contains("version"));
  CHECK(report["attacks"].size() == 3);
  CHECK(report["resolved"]["n_cat"] == 2);
  CHECK(report["eff_epsilon"].contains("eps_lo"));
  for (const auto& a : report["attacks"]) {
    CHECK(a["metrics"].contains("accuracy"));
    CHECK(a["metrics"].contains("privacy_gain"));
    CHECK(a["metrics"].contains("auc"));
  }
}

TEST_CASE("run_audit is byte-deterministic and thread-count invariant") {
  TempDir tmp("audit-determinism");
  write_demo_csv(tmp.path("d.csv"), 150);
  write_file(tmp.path("audit.toml"), small_audit_toml(tmp.path("d.csv"), true));
  AuditConfig cfg = load_audit_config(tmp.path("audit.toml"));

  auto run_with = [&](const std::string& out, unsigned threads) {
    AuditOptions opts;
    opts.threads = threads;
    opts.output_dir_override = tmp.path(out);
    return run_audit(cfg, opts);
  };
  AuditArtifacts a = run_with("o1", 1);
  AuditArtifacts b = run_with("o2", 1);
  AuditArtifacts c = run_with("o3", 4);

  CHECK(read_file(a.report_json) == read_file(b.report_json));
  CHECK(read_file(a.report_json) == read_file(c.report_json));
  CHECK(read_file(a.scores_csv) == read_file(b.scores_csv));
  CHECK(read_file(a.scores_csv) == read_file(c.scores_csv));
  CHECK(read_file(a.roc_svg) == read_file(c.roc_svg));
  CHECK(read_file(a.eff_eps_json) == read_file(c.eff_eps_json));
}

TEST_CASE("seed override changes outputs") {
  TempDir tmp("audit-seed");
  write_demo_csv(tmp.path("d.csv"), 150);
  write_file(tmp.path("audit.toml"), small_audit_toml(tmp.path("d.csv"), false));
  AuditConfig cfg = load_audit_config(tmp.path("audit.toml"));
  AuditOptions o1, o2;
  o1.output_dir_override = tmp.path("s1");
  o2.output_dir_override = tmp.path("s2");
  o2.seed_override = 777;
  AuditArtifacts a = run_audit(cfg, o1);
  AuditArtifacts b = run_audit(cfg, o2);
  CHECK(read_file(a.scores_csv) != read_file(b.scores_csv));
}

TEST_CASE("run_report reproduces the audit's metrics and epsilon report") {
  TempDir tmp("report-recompute");
  write_demo_csv(tmp.path("d.csv"), 200);
  write_file(tmp.path("audit.toml"), small_audit_toml(tmp.path("d.csv"), true));
  AuditConfig cfg = load_audit_config(tmp.path("audit.toml"));
  AuditOptions opts;
  opts.output_dir_override = tmp.path("orig");
  AuditArtifacts original = run_audit(cfg, opts);

  ReportSpec spec;
  spec.roc = true;
  spec.eff_eps = EffEpsSpec{};  // same defaults as the audit config
  AuditArtifacts redo = run_report(original.scores_csv, spec, tmp.path("redo"), cfg.seed);

  auto orig_json = nlohmann::ordered_json::parse(read_file(original.report_json));
  auto redo_json = nlohmann::ordered_json::parse(read_file(redo.report_json));
  CHECK(orig_json["attacks"] == redo_json["attacks"]);
  CHECK(read_file(original.eff_eps_json) == read_file(redo.eff_eps_json));
  CHECK(read_file(original.roc_svg) == read_file(redo.roc_svg));
}

TEST_CASE("run_report reproduces metrics for multiclass (aia) scores") {
  TempDir tmp("report-aia");
  write_demo_csv(tmp.path("d.csv"), 200);
  write_file(tmp.path("audit.toml"),
             "seed = 13\n"
             "[data]\ncsv = \"" + tmp.path("d.csv") + "\"\n" +
             "[generator]\nname = \"independent-marginals\"\nn_synthetic = 30\n" +
             "[threat_model]\nprior = \"auxiliary\"\nknowledge = \"black-box\"\n"
             "goal = \"aia\"\naia_attribute = \"c\"\naux_fraction = 0.5\n"
             "test_fraction = 0.5\nn_real = 40\ntarget = \"auto-outlier\"\n" +
             "[[attacks]]\nname = \"closest-distance\"\n" +
             "[[attacks]]\nname = \"cap\"\ntrees = 10\n" +
             "[runs]\nn_train = 0\nn_test = 50\n" +
             "[reports]\nmetrics = true\nroc = false\n");
  AuditConfig cfg = load_audit_config(tmp.path("audit.toml"));
  AuditOptions opts;
  opts.output_dir_override = tmp.path("orig");
  AuditArtifacts original = run_audit(cfg, opts);
  CHECK(original.roc_svg.empty());  // multiclass goal, no ROC

  ReportSpec spec;
  spec.roc = false;
  AuditArtifacts redo = run_report(original.scores_csv, spec, tmp.path("redo"), cfg.seed);
  auto orig_json = nlohmann::ordered_json::parse(read_file(original.report_json));
  auto redo_json = nlohmann::ordered_json::parse(read_file(redo.report_json));
  CHECK(orig_json["attacks"] == redo_json["attacks"]);
  CHECK(orig_json["resolved"]["n_cat"] == 4);
}

TEST_CASE("select_target_report and run_generate") {
  TempDir tmp("helpers");
  write_demo_csv(tmp.path("d.csv"), 120);

  auto report = select_target_report(tmp.path("d.csv"), std::nullopt, 50, 3);
  CHECK(report.contains("target"));
  CHECK(report["target"].size() == 4);
  CHECK(report["log_likelihood"].get<double>() < 0.0);
  auto again = select_target_report(tmp.path("d.csv"), std::nullopt, 50, 3);
  CHECK(report == again);

  GenerateSpec spec;
  spec.generator_name = "raw-copy";
  run_generate(tmp.path("d.csv"), std::nullopt, spec, 25, 1, tmp.path("synth.csv"));
  Dataset real = load_csv(tmp.path("d.csv"));
  Dataset synth = load_csv(tmp.path("synth.csv"), real.schema_ptr());
  REQUIRE(synth.size() == 25);
  for (size_t i = 0; i < synth.size(); ++i) CHECK(synth.row(i) == real.row(i));
}

TEST_CASE("run_audit: uncertain-box knowledge with a chain order") {
  TempDir tmp("audit-uncertain");
  write_demo_csv(tmp.path("d.csv"), 150);
  write_file(tmp.path("audit.toml"),
             "seed = 21\n"
             "[data]\ncsv = \"" + tmp.path("d.csv") + "\"\n" +
             "[generator]\nname = \"chain-bayes\"\nn_synthetic = 30\n"
             "order = [\"d\", \"a\", \"c\", \"b\"]\n" +
             "[generator.epsilon_prior]\natoms = [[0.5, 0.5], [5.0, 0.5]]\n" +
             "[threat_model]\nprior = \"exact\"\nknowledge = \"uncertain-box\"\n"
             "goal = \"mia\"\nn_minus = 25\ntarget = \"auto-outlier\"\n" +
             "[[attacks]]\nname = \"closest-distance\"\n" +
             "[[attacks]]\nname = \"shadow-random-queries\"\nqueries = 25\n" +
             "[runs]\nn_train = 30\nn_test = 40\n" +
             "[reports]\nmetrics = true\nroc = true\n");
  AuditConfig cfg = load_audit_config(tmp.path("audit.toml"));
  AuditOptions opts;
  opts.output_dir_override = tmp.path("out");
  AuditArtifacts a = run_audit(cfg, opts);
  auto report = nlohmann::ordered_json::parse(read_file(a.report_json));
  CHECK(report["resolved"]["generator"] == "chain-bayes (uncertain-box)");
  CHECK(report["attacks"].size() == 2);

  // unknown attribute in the order is a validation failure, not a crash
  write_file(tmp.path("bad.toml"),
             read_file(tmp.path("audit.toml")).replace(
                 read_file(tmp.path("audit.toml")).find("\"d\", \"a\""), 8, "\"z\", \"a\""));
  AuditConfig bad = load_audit_config(tmp.path("bad.toml"));
  CHECK_THROWS_AS(run_audit(bad, opts), ConfigValidationError);
}

TEST_CASE("cli binary: bundled config completes and emits artifacts") {
  TempDir tmp("cli-bundled");
  const std::string config =
      std::string(SYNAUDIT_SOURCE_DIR) + "/configs/exact_mia_marginals.toml";
  int code = run_cli("audit --config " + config + " --threads 2 --output-dir " +
                     tmp.path("out"));
  CHECK(code == 0);
  CHECK(std::filesystem::exists(tmp.path("out") + "/report.json"));
  CHECK(std::filesystem::exists(tmp.path("out") + "/scores.csv"));
  CHECK(std::filesystem::exists(tmp.path("out") + "/roc.svg"));
  CHECK(std::filesystem::exists(tmp.path("out") + "/eff_epsilon.json"));
}

TEST_CASE("cli binary: unknown attack name exits with code 2 and is named") {
  TempDir tmp("cli-bad");
  write_demo_csv(tmp.path("d.csv"), 50);
  std::string body = small_audit_toml(tmp.path("d.csv"), false);
  body += "[[attacks]]\nname = \"make-coffee\"\n";
  write_file(tmp.path("bad.toml"), body);
  std::string cmd = std::string(SYNAUDIT_CLI) + " audit --config " + tmp.path("bad.toml") +
                    " > /dev/null 2> " + tmp.path("stderr.txt");
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 2);
  CHECK(read_file(tmp.path("stderr.txt")).find("make-coffee") != std::string::npos);
}

TEST_CASE("cli binary: runtime failures exit with code 1") {
  CHECK(run_cli("select-target --data /definitely/not/a/file.csv") == 1);
}

TEST_CASE("cli binary: generate, report and --seed override wiring") {
  TempDir tmp("cli-wiring");
  write_demo_csv(tmp.path("d.csv"), 100);

  // generate
  REQUIRE(run_cli("generate --data " + tmp.path("d.csv") +
                  " --generator chain-bayes --epsilon 3 --n-out 42 --seed 5 --output " +
                  tmp.path("synth.csv")) == 0);
  Dataset real = load_csv(tmp.path("d.csv"));
  Dataset synth = load_csv(tmp.path("synth.csv"), real.schema_ptr());
  CHECK(synth.size() == 42);

  // audit twice with different seeds via the flag
  write_file(tmp.path("audit.toml"), small_audit_toml(tmp.path("d.csv"), true));
  REQUIRE(run_cli("audit --config " + tmp.path("audit.toml") + " --output-dir " +
                  tmp.path("s1")) == 0);
  REQUIRE(run_cli("audit --config " + tmp.path("audit.toml") + " --seed 999 --output-dir " +
                  tmp.path("s2")) == 0);
  CHECK(read_file(tmp.path("s1") + "/scores.csv") != read_file(tmp.path("s2") + "/scores.csv"));

  // report recomputation through the binary reproduces the epsilon bound
  REQUIRE(run_cli("report --scores " + tmp.path("s1") + "/scores.csv" +
                  " --eff-epsilon --seed 11 --output-dir " + tmp.path("redo")) == 0);
  CHECK(read_file(tmp.path("s1") + "/eff_epsilon.json") ==
        read_file(tmp.path("redo") + "/eff_epsilon.json"));
}

TEST_CASE("cli binary: select-target prints a valid record") {
  TempDir tmp("cli-select");
  write_demo_csv(tmp.path("d.csv"), 80);
  std::string cmd = std::string(SYNAUDIT_CLI) + " select-target --data " + tmp.path("d.csv") +
                    " --seed 4 --count 40 > " + tmp.path("out.json") + " 2>/dev/null";
  REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  auto doc = nlohmann::ordered_json::parse(read_file(tmp.path("out.json")));
  Dataset d = load_csv(tmp.path("d.csv"));
  for (const auto& [name, label] : doc["target"].items()) {
    auto attr = d.schema().attribute_index(name);
    REQUIRE(attr.has_value());
    CHECK(d.schema().value_index(*attr, label.get<std::string>()).has_value());
  }
}
