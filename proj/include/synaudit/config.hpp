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
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "synaudit/common.hpp"

namespace synaudit {

// Parses the TOML subset used by audit configs into an ordered JSON tree:
// [table] and [[array-of-table]] headers, dotted/quoted keys, strings,
// integers, floats, booleans, (nested) single-line arrays, inline tables
// and # comments. Errors carry line numbers.
nlohmann::ordered_json parse_toml(const std::string& text);
nlohmann::ordered_json parse_toml_file(const std::string& path);

// Config validation failure: every violation found, not just the first.
// The CLI maps this to exit code 2.
class ConfigValidationError : public Error {
 public:
  explicit ConfigValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

struct AttackSpec {
  std::string name;
  nlohmann::ordered_json params;  // object; free-form per attack
};

struct EffEpsSpec {
  double delta = 0.0;
  double confidence = 0.95;
  double select_fraction = 0.10;
};

struct EpsilonPrior {
  std::vector<std::pair<double, double>> atoms;       // (epsilon, probability)
  std::optional<std::pair<double, double>> uniform;   // [lo, hi)
};

// A fully parsed audit configuration. Paths are resolved relative to the
// config file's directory (output_dir relative to the working directory).
struct AuditConfig {
  uint64_t seed = 0;
  std::string output_dir = "synaudit-out";

  std::string data_csv;
  std::optional<std::string> schema_path;

  std::string generator_name;
  std::optional<double> epsilon;
  std::optional<std::vector<std::string>> chain_order;  // attribute names
  std::vector<std::string> external_command;
  std::string external_workdir;
  double external_timeout_seconds = 300.0;
  std::optional<EpsilonPrior> epsilon_prior;  // uncertain-box knowledge
  size_t n_synthetic = 0;

  std::string prior_kind;      // "exact" | "auxiliary"
  std::string knowledge_kind;  // "black-box" | "no-box" | "uncertain-box"
  std::string goal_kind;       // "mia" | "aia"
  size_t n_minus = 0;          // exact prior
  double aux_fraction = 0.5;
  double test_fraction = 0.5;
  size_t n_real = 0;           // auxiliary prior
  double p_in = 0.5;
  bool auto_target = false;
  std::map<std::string, std::string> target_labels;
  std::optional<std::map<std::string, std::string>> replacement_labels;
  size_t outlier_candidates = 1000;
  std::string aia_attribute;

  std::vector<AttackSpec> attacks;
  size_t n_train = 0;
  size_t n_test = 0;

  bool report_metrics = true;
  bool report_roc = true;
  std::optional<EffEpsSpec> eff_eps;

  nlohmann::ordered_json raw;  // original document, echoed into reports
};

// Parses and validates; throws ConfigValidationError listing every
// violation. base_dir anchors relative data paths.
AuditConfig parse_audit_config(const nlohmann::ordered_json& doc, const std::string& base_dir);

AuditConfig load_audit_config(const std::string& path);

}  // namespace synaudit
