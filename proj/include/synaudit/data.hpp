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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "synaudit/matrix.hpp"
#include "synaudit/rng.hpp"

namespace synaudit {

// Categorical tabular schema: an ordered list of attributes, each with an
// ordered finite set of value labels. Attribute and value order is fixed at
// construction; one-hot layouts and feature vectors depend on it.
//
// Labels are restricted to [A-Za-z0-9_ .-] so CSV files never need quoting.
class Schema {
 public:
  struct Attribute {
    std::string name;
    std::vector<std::string> values;
  };

  explicit Schema(std::vector<Attribute> attributes);

  size_t attribute_count() const { return attributes_.size(); }
  const Attribute& attribute(size_t i) const { return attributes_[i]; }
  const std::vector<Attribute>& attributes() const { return attributes_; }

  std::optional<size_t> attribute_index(std::string_view name) const;
  std::optional<int32_t> value_index(size_t attr, std::string_view label) const;

  // One-hot layout: column blocks in attribute order, values in value order.
  size_t one_hot_width() const { return offsets_.back(); }
  size_t one_hot_offset(size_t attr) const { return offsets_[attr]; }

  bool same_as(const Schema& other) const;

 private:
  std::vector<Attribute> attributes_;
  std::map<std::string, size_t, std::less<>> name_index_;
  std::vector<std::map<std::string, int32_t, std::less<>>> value_index_;
  std::vector<size_t> offsets_;  // size k+1, prefix sums of |X_i|
};

using SchemaPtr = std::shared_ptr<const Schema>;

// One row: category indices, values[i] in [0, |X_i|).
struct Record {
  std::vector<int32_t> values;
  bool operator==(const Record& other) const = default;
};

// Multiset of records over a fixed schema. Row order is preserved (and
// meaningful for reproducibility) but all dataset-level statistics are
// order-invariant. Immutable after construction; safe to share across
// threads.
class Dataset {
 public:
  Dataset(SchemaPtr schema, std::vector<Record> rows);

  const Schema& schema() const { return *schema_; }
  const SchemaPtr& schema_ptr() const { return schema_; }
  size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  const Record& row(size_t i) const { return rows_[i]; }
  const std::vector<Record>& rows() const { return rows_; }

 private:
  SchemaPtr schema_;
  std::vector<Record> rows_;
};

// --- CSV and schema JSON I/O -------------------------------------------

// Loads a CSV file (header row mandatory). With a schema, every cell must
// be a known label; without one, the schema is inferred with each
// attribute's values sorted lexicographically so the same file always
// yields the same encoding. Continuous columns are rejected: inference
// fails when an attribute exceeds kMaxInferredValues distinct labels.
Dataset load_csv(const std::string& path);
Dataset load_csv(const std::string& path, SchemaPtr schema);

inline constexpr size_t kMaxInferredValues = 1024;

// Writes the dataset as CSV. Round-trips with load_csv under the same
// schema; row order and duplicates are preserved.
void write_csv(const Dataset& dataset, const std::string& path);

SchemaPtr load_schema_json(const std::string& path);
void write_schema_json(const Schema& schema, const std::string& path);

// --- record / dataset queries ------------------------------------------

// Number of positions where two records differ. A metric on records of a
// fixed schema.
int hamming(const Record& a, const Record& b);

// Fraction of rows matching `target` on every attribute in `attrs`.
// attrs = {} matches everything (returns 1.0). Errors on an empty dataset.
double counting_query(const Dataset& dataset, const Record& target,
                      std::span<const size_t> attrs);

// Per-value counts for one attribute; sums to the dataset size.
std::vector<int64_t> marginal_histogram(const Dataset& dataset, size_t attr);

// N x one_hot_width() indicator matrix; each row has exactly k ones.
Matrix one_hot(const Dataset& dataset);

// n rows drawn uniformly without replacement. Errors when n exceeds the
// dataset size.
Dataset subsample(const Dataset& dataset, size_t n, Rng& rng);

}  // namespace synaudit
