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
#include <optional>
#include <string>

#include <json.hpp>

#include "synaudit/config.hpp"
#include "synaudit/reports.hpp"

namespace synaudit {

struct AuditOptions {
  unsigned threads = 0;  // 0 = hardware concurrency
  std::optional<uint64_t> seed_override;
  std::optional<std::string> output_dir_override;
};

struct AuditArtifacts {
  std::string report_json;
  std::string scores_csv;
  std::string roc_svg;       // empty when not produced
  std::string eff_eps_json;  // empty when not requested
};

// Runs the full pipeline: build threat model, generator and attacks from
// the config, train, evaluate, and write report.json / scores.csv /
// roc.svg / eff_epsilon.json under the output directory. Every output byte
// is a function of (config, seed); the thread count never changes results.
AuditArtifacts run_audit(const AuditConfig& config, const AuditOptions& options = {});

// Data-dependent resolution shared with run_audit: outlier selection output
// for the select-target subcommand.
nlohmann::ordered_json select_target_report(const std::string& data_csv,
                                            const std::optional<std::string>& schema_path,
                                            size_t candidate_count, uint64_t seed);

struct GenerateSpec {
  std::string generator_name;
  std::optional<double> epsilon;
  std::optional<std::vector<std::string>> chain_order;
  std::vector<std::string> external_command;
  std::string external_workdir;
  double external_timeout_seconds = 300.0;
};

// One generator call: real csv in, synthetic csv out.
void run_generate(const std::string& data_csv, const std::optional<std::string>& schema_path,
                  const GenerateSpec& spec, size_t n_out, uint64_t seed,
                  const std::string& out_csv);

struct ReportSpec {
  bool roc = true;
  std::optional<EffEpsSpec> eff_eps;
};

// Recomputes metrics / ROC / effective epsilon from a persisted scores
// table. With the seed used by the original audit, the effective-epsilon
// split and bounds reproduce exactly.
AuditArtifacts run_report(const std::string& scores_csv, const ReportSpec& spec,
                          const std::string& output_dir, uint64_t seed);

}  // namespace synaudit
