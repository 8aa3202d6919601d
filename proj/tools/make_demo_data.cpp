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
//
// Regenerates the bundled census-like demo dataset (data/census_mini.csv and
// its schema sidecar). The data is fully synthetic: age drives correlated
// draws of the other attributes so the file has realistic structure without
// describing any real person.

#include <iostream>
#include <string>
#include <vector>

#include "synaudit/data.hpp"
#include "synaudit/rng.hpp"

using synaudit::Dataset;
using synaudit::Record;
using synaudit::Rng;
using synaudit::Schema;

namespace {

constexpr uint64_t kSeed = 20260101;
constexpr size_t kRows = 2000;

int32_t draw(Rng& rng, std::vector<double> weights) { return static_cast<int32_t>(rng.categorical(weights)); }

}  // namespace

int main(int argc, char** argv) {
  std::string out_csv = argc > 1 ? argv[1] : "data/census_mini.csv";
  std::string out_schema = argc > 2 ? argv[2] : "data/census_mini.schema.json";

  std::vector<Schema::Attribute> attrs = {
      {"region", {"R1", "R2", "R3", "R4", "R5", "R6", "R7", "R8"}},
      {"age_band", {"a16_24", "a25_34", "a35_44", "a45_54", "a55_64", "a65_74", "a75p"}},
      {"sex", {"female", "male"}},
      {"marital", {"single", "married", "divorced", "widowed"}},
      {"education", {"none", "gcse", "alevel", "degree", "postgrad"}},
      {"employment", {"employed", "unemployed", "retired", "student"}},
      {"health", {"excellent", "good", "fair", "bad", "very_bad"}},
      {"hours", {"none", "part_time", "full_time", "overtime"}},
  };
  auto schema = std::make_shared<Schema>(attrs);

  Rng rng(kSeed);
  std::vector<Record> rows;
  rows.reserve(kRows);
  for (size_t i = 0; i < kRows; ++i) {
    Record r;
    r.values.resize(8);
    r.values[0] = draw(rng, {0.18, 0.16, 0.15, 0.13, 0.12, 0.10, 0.09, 0.07});
    const int32_t age = draw(rng, {0.15, 0.18, 0.18, 0.17, 0.13, 0.11, 0.08});
    r.values[1] = age;
    r.values[2] = draw(rng, {0.51, 0.49});

    switch (age) {
      case 0: r.values[3] = draw(rng, {0.90, 0.08, 0.01, 0.01}); break;
      case 1: r.values[3] = draw(rng, {0.45, 0.48, 0.06, 0.01}); break;
      case 2: r.values[3] = draw(rng, {0.22, 0.62, 0.14, 0.02}); break;
      case 3: r.values[3] = draw(rng, {0.14, 0.62, 0.20, 0.04}); break;
      case 4: r.values[3] = draw(rng, {0.10, 0.62, 0.20, 0.08}); break;
      case 5: r.values[3] = draw(rng, {0.07, 0.60, 0.15, 0.18}); break;
      default: r.values[3] = draw(rng, {0.05, 0.45, 0.10, 0.40}); break;
    }

    if (age == 0) {
      r.values[4] = draw(rng, {0.10, 0.45, 0.35, 0.09, 0.01});
    } else if (age <= 2) {
      r.values[4] = draw(rng, {0.07, 0.28, 0.28, 0.28, 0.09});
    } else if (age <= 4) {
      r.values[4] = draw(rng, {0.13, 0.35, 0.25, 0.21, 0.06});
    } else {
      r.values[4] = draw(rng, {0.30, 0.38, 0.17, 0.12, 0.03});
    }

    if (age >= 5) {
      r.values[5] = draw(rng, {0.08, 0.02, 0.89, 0.01});
    } else if (age == 0) {
      r.values[5] = draw(rng, {0.52, 0.10, 0.01, 0.37});
    } else {
      r.values[5] = draw(rng, {0.84, 0.08, 0.05, 0.03});
    }

    switch (age) {
      case 0:
      case 1: r.values[6] = draw(rng, {0.45, 0.40, 0.11, 0.03, 0.01}); break;
      case 2:
      case 3: r.values[6] = draw(rng, {0.28, 0.45, 0.20, 0.05, 0.02}); break;
      case 4:
      case 5: r.values[6] = draw(rng, {0.15, 0.42, 0.28, 0.11, 0.04}); break;
      default: r.values[6] = draw(rng, {0.07, 0.30, 0.36, 0.19, 0.08}); break;
    }

    switch (r.values[5]) {
      case 0: r.values[7] = draw(rng, {0.02, 0.22, 0.62, 0.14}); break;  // employed
      case 3: r.values[7] = draw(rng, {0.55, 0.40, 0.04, 0.01}); break;  // student
      default: r.values[7] = draw(rng, {0.93, 0.05, 0.01, 0.01}); break;
    }
    rows.push_back(std::move(r));
  }

  Dataset dataset(schema, std::move(rows));
  synaudit::write_csv(dataset, out_csv);
  synaudit::write_schema_json(*schema, out_schema);
  std::cout << "wrote " << out_csv << " (" << dataset.size() << " rows) and " << out_schema
            << "\n";
  return 0;
}
