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

#include "synaudit/data.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "synaudit/common.hpp"

namespace synaudit {

namespace {

bool valid_label_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
         c == '_' || c == ' ' || c == '.' || c == '-';
}

void check_label(std::string_view label, const std::string& context) {
  if (label.empty()) throw Error(context + ": empty label");
  for (char c : label) {
    if (!valid_label_char(c)) {
      throw Error(context + ": label '" + std::string(label) +
                  "' contains characters outside [A-Za-z0-9_ .-]");
    }
  }
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else {
      field.push_back(c);
    }
  }
  out.push_back(field);
  return out;
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

// --- Schema --------------------------------------------------------------

Schema::Schema(std::vector<Attribute> attributes) : attributes_(std::move(attributes)) {
  if (attributes_.empty()) throw Error("schema: needs at least one attribute");
  offsets_.push_back(0);
  for (size_t i = 0; i < attributes_.size(); ++i) {
    const Attribute& attr = attributes_[i];
    check_label(attr.name, "schema attribute name");
    if (!name_index_.emplace(attr.name, i).second) {
      throw Error("schema: duplicate attribute name '" + attr.name + "'");
    }
    if (attr.values.empty()) {
      throw Error("schema: attribute '" + attr.name + "' has no values");
    }
    value_index_.emplace_back();
    for (size_t v = 0; v < attr.values.size(); ++v) {
      check_label(attr.values[v], "schema value for '" + attr.name + "'");
      if (!value_index_.back().emplace(attr.values[v], static_cast<int32_t>(v)).second) {
        throw Error("schema: duplicate value '" + attr.values[v] + "' in attribute '" +
                    attr.name + "'");
      }
    }
    offsets_.push_back(offsets_.back() + attr.values.size());
  }
}

std::optional<size_t> Schema::attribute_index(std::string_view name) const {
  auto it = name_index_.find(name);
  if (it == name_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int32_t> Schema::value_index(size_t attr, std::string_view label) const {
  const auto& m = value_index_[attr];
  auto it = m.find(label);
  if (it == m.end()) return std::nullopt;
  return it->second;
}

bool Schema::same_as(const Schema& other) const {
  if (this == &other) return true;
  if (attributes_.size() != other.attributes_.size()) return false;
  for (size_t i = 0; i < attributes_.size(); ++i) {
    if (attributes_[i].name != other.attributes_[i].name) return false;
    if (attributes_[i].values != other.attributes_[i].values) return false;
  }
  return true;
}

// --- Dataset ---------------------------------------------------------------

Dataset::Dataset(SchemaPtr schema, std::vector<Record> rows)
    : schema_(std::move(schema)), rows_(std::move(rows)) {
  if (!schema_) throw Error("dataset: null schema");
  const size_t k = schema_->attribute_count();
  for (const Record& r : rows_) {
    if (r.values.size() != k) throw Error("dataset: row length does not match schema");
    for (size_t i = 0; i < k; ++i) {
      int32_t v = r.values[i];
      if (v < 0 || static_cast<size_t>(v) >= schema_->attribute(i).values.size()) {
        throw Error("dataset: value index out of range for attribute '" +
                    schema_->attribute(i).name + "'");
      }
    }
  }
}

// --- CSV ---------------------------------------------------------------

namespace {

Dataset load_csv_impl(const std::string& path, SchemaPtr schema) {
  std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw Error("csv: missing header row in " + path);

  std::vector<std::string> header = split_fields(lines[0]);
  const size_t k = header.size();
  for (const auto& name : header) check_label(name, path + ": header");

  if (schema) {
    if (schema->attribute_count() != k) {
      throw Error("csv: column count " + std::to_string(k) + " does not match schema (" +
                  std::to_string(schema->attribute_count()) + ") in " + path);
    }
    for (size_t i = 0; i < k; ++i) {
      if (schema->attribute(i).name != header[i]) {
        throw Error("csv: column '" + header[i] + "' does not match schema attribute '" +
                    schema->attribute(i).name + "' in " + path);
      }
    }
  }

  std::vector<std::vector<std::string>> body;
  for (size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty() && ln + 1 == lines.size()) break;  // trailing newline
    std::vector<std::string> fields = split_fields(lines[ln]);
    if (fields.size() != k) {
      throw Error("csv: ragged row at line " + std::to_string(ln + 1) + " in " + path +
                  " (expected " + std::to_string(k) + " fields, got " +
                  std::to_string(fields.size()) + ")");
    }
    for (const auto& f : fields) check_label(f, path + ": line " + std::to_string(ln + 1));
    body.push_back(std::move(fields));
  }

  if (!schema) {
    // Infer: distinct labels per column, sorted lexicographically so the
    // same file always produces the same encoding.
    std::vector<std::set<std::string>> values(k);
    for (const auto& row : body) {
      for (size_t i = 0; i < k; ++i) {
        values[i].insert(row[i]);
        if (values[i].size() > kMaxInferredValues) {
          throw Error("csv: attribute '" + header[i] + "' exceeds " +
                      std::to_string(kMaxInferredValues) +
                      " distinct labels; continuous attributes are not supported");
        }
      }
    }
    std::vector<Schema::Attribute> attrs(k);
    for (size_t i = 0; i < k; ++i) {
      attrs[i].name = header[i];
      if (values[i].empty()) {
        // Header-only file: synthesize a single placeholder value so the
        // schema stays well-formed.
        attrs[i].values = {"_empty"};
      } else {
        attrs[i].values.assign(values[i].begin(), values[i].end());
      }
    }
    schema = std::make_shared<Schema>(std::move(attrs));
  }

  std::vector<Record> rows;
  rows.reserve(body.size());
  for (size_t r = 0; r < body.size(); ++r) {
    Record rec;
    rec.values.resize(k);
    for (size_t i = 0; i < k; ++i) {
      auto idx = schema->value_index(i, body[r][i]);
      if (!idx) {
        throw Error("csv: unknown label '" + body[r][i] + "' for attribute '" +
                    schema->attribute(i).name + "' at line " + std::to_string(r + 2) +
                    " in " + path);
      }
      rec.values[i] = *idx;
    }
    rows.push_back(std::move(rec));
  }
  return Dataset(std::move(schema), std::move(rows));
}

}  // namespace

Dataset load_csv(const std::string& path) { return load_csv_impl(path, nullptr); }

Dataset load_csv(const std::string& path, SchemaPtr schema) {
  if (!schema) throw Error("load_csv: null schema");
  return load_csv_impl(path, std::move(schema));
}

void write_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path);
  const Schema& schema = dataset.schema();
  const size_t k = schema.attribute_count();
  for (size_t i = 0; i < k; ++i) {
    if (i) out << ',';
    out << schema.attribute(i).name;
  }
  out << '\n';
  for (const Record& r : dataset.rows()) {
    for (size_t i = 0; i < k; ++i) {
      if (i) out << ',';
      out << schema.attribute(i).values[static_cast<size_t>(r.values[i])];
    }
    out << '\n';
  }
  if (!out) throw Error("write failed: " + path);
}

SchemaPtr load_schema_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open schema file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error("schema json parse error in " + path + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("attributes") || !doc["attributes"].is_array()) {
    throw Error("schema json: expected {\"attributes\": [...]} in " + path);
  }
  std::vector<Schema::Attribute> attrs;
  for (const auto& a : doc["attributes"]) {
    if (!a.is_object() || !a.contains("name") || !a.contains("values") ||
        !a["name"].is_string() || !a["values"].is_array()) {
      throw Error("schema json: each attribute needs a name and a values array (" + path + ")");
    }
    Schema::Attribute attr;
    attr.name = a["name"].get<std::string>();
    for (const auto& v : a["values"]) {
      if (!v.is_string()) throw Error("schema json: values must be strings (" + path + ")");
      attr.values.push_back(v.get<std::string>());
    }
    attrs.push_back(std::move(attr));
  }
  return std::make_shared<Schema>(std::move(attrs));
}

void write_schema_json(const Schema& schema, const std::string& path) {
  nlohmann::ordered_json doc;
  doc["attributes"] = nlohmann::ordered_json::array();
  for (const auto& attr : schema.attributes()) {
    nlohmann::ordered_json a;
    a["name"] = attr.name;
    a["values"] = attr.values;
    doc["attributes"].push_back(std::move(a));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open file for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw Error("write failed: " + path);
}

// --- queries -------------------------------------------------------------

int hamming(const Record& a, const Record& b) {
  if (a.values.size() != b.values.size()) {
    throw Error("hamming: records have different lengths");
  }
  int d = 0;
  for (size_t i = 0; i < a.values.size(); ++i) {
    if (a.values[i] != b.values[i]) ++d;
  }
  return d;
}

double counting_query(const Dataset& dataset, const Record& target,
                      std::span<const size_t> attrs) {
  if (dataset.empty()) throw Error("counting_query: empty dataset");
  const size_t k = dataset.schema().attribute_count();
  if (target.values.size() != k) throw Error("counting_query: target length mismatch");
  for (size_t a : attrs) {
    if (a >= k) throw Error("counting_query: attribute index out of range");
  }
  size_t count = 0;
  for (const Record& r : dataset.rows()) {
    bool match = true;
    for (size_t a : attrs) {
      if (r.values[a] != target.values[a]) {
        match = false;
        break;
      }
    }
    if (match) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(dataset.size());
}

std::vector<int64_t> marginal_histogram(const Dataset& dataset, size_t attr) {
  if (attr >= dataset.schema().attribute_count()) {
    throw Error("marginal_histogram: attribute index out of range");
  }
  std::vector<int64_t> counts(dataset.schema().attribute(attr).values.size(), 0);
  for (const Record& r : dataset.rows()) {
    counts[static_cast<size_t>(r.values[attr])]++;
  }
  return counts;
}

Matrix one_hot(const Dataset& dataset) {
  const Schema& schema = dataset.schema();
  const size_t k = schema.attribute_count();
  Matrix m(dataset.size(), schema.one_hot_width());
  for (size_t i = 0; i < dataset.size(); ++i) {
    const Record& r = dataset.row(i);
    for (size_t a = 0; a < k; ++a) {
      m.at(i, schema.one_hot_offset(a) + static_cast<size_t>(r.values[a])) = 1.0;
    }
  }
  return m;
}

Dataset subsample(const Dataset& dataset, size_t n, Rng& rng) {
  if (n > dataset.size()) {
    throw Error("subsample: requested " + std::to_string(n) + " rows from a dataset of " +
                std::to_string(dataset.size()));
  }
  std::vector<size_t> picked = rng.sample_indices(dataset.size(), n);
  std::vector<Record> rows;
  rows.reserve(n);
  for (size_t idx : picked) rows.push_back(dataset.row(idx));
  return Dataset(dataset.schema_ptr(), std::move(rows));
}

}  // namespace synaudit
