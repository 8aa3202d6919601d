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

#include "synaudit/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "synaudit/attacks.hpp"

namespace synaudit {

// --- TOML subset parser -------------------------------------------------------

namespace {

using Json = nlohmann::ordered_json;

[[noreturn]] void toml_error(size_t line, const std::string& message) {
  throw Error("toml: line " + std::to_string(line) + ": " + message);
}

std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

// Cuts a trailing comment, honoring quoted strings.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
    if (c == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::string parse_basic_string(std::string_view s, size_t& pos, size_t line) {
  if (pos >= s.size() || s[pos] != '"') toml_error(line, "expected a string");
  ++pos;
  std::string out;
  while (pos < s.size()) {
    char c = s[pos];
    if (c == '\\') {
      if (pos + 1 >= s.size()) toml_error(line, "dangling escape in string");
      char e = s[pos + 1];
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case 'r': out += '\r'; break;
        default: toml_error(line, std::string("unsupported escape \\") + e);
      }
      pos += 2;
      continue;
    }
    if (c == '"') {
      ++pos;
      return out;
    }
    out += c;
    ++pos;
  }
  toml_error(line, "unterminated string");
}

void skip_ws(std::string_view s, size_t& pos) {
  while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
}

Json parse_value(std::string_view s, size_t& pos, size_t line);

Json parse_array(std::string_view s, size_t& pos, size_t line) {
  ++pos;  // consume '['
  Json arr = Json::array();
  skip_ws(s, pos);
  if (pos < s.size() && s[pos] == ']') {
    ++pos;
    return arr;
  }
  for (;;) {
    arr.push_back(parse_value(s, pos, line));
    skip_ws(s, pos);
    if (pos >= s.size()) toml_error(line, "unterminated array");
    if (s[pos] == ',') {
      ++pos;
      skip_ws(s, pos);
      if (pos < s.size() && s[pos] == ']') {  // trailing comma
        ++pos;
        return arr;
      }
      continue;
    }
    if (s[pos] == ']') {
      ++pos;
      return arr;
    }
    toml_error(line, "expected ',' or ']' in array");
  }
}

std::string parse_key_part(std::string_view s, size_t& pos, size_t line) {
  skip_ws(s, pos);
  if (pos < s.size() && s[pos] == '"') return parse_basic_string(s, pos, line);
  size_t start = pos;
  while (pos < s.size() &&
         (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' || s[pos] == '-')) {
    ++pos;
  }
  if (pos == start) toml_error(line, "expected a key");
  return std::string(s.substr(start, pos - start));
}

Json parse_inline_table(std::string_view s, size_t& pos, size_t line) {
  ++pos;  // consume '{'
  Json obj = Json::object();
  skip_ws(s, pos);
  if (pos < s.size() && s[pos] == '}') {
    ++pos;
    return obj;
  }
  for (;;) {
    std::string key = parse_key_part(s, pos, line);
    skip_ws(s, pos);
    if (pos >= s.size() || s[pos] != '=') toml_error(line, "expected '=' in inline table");
    ++pos;
    skip_ws(s, pos);
    if (obj.contains(key)) toml_error(line, "duplicate key '" + key + "'");
    obj[key] = parse_value(s, pos, line);
    skip_ws(s, pos);
    if (pos >= s.size()) toml_error(line, "unterminated inline table");
    if (s[pos] == ',') {
      ++pos;
      continue;
    }
    if (s[pos] == '}') {
      ++pos;
      return obj;
    }
    toml_error(line, "expected ',' or '}' in inline table");
  }
}

Json parse_scalar(std::string_view token, size_t line) {
  if (token == "true") return true;
  if (token == "false") return false;
  if (token.empty()) toml_error(line, "missing value");
  // integer?
  {
    int64_t v = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec == std::errc() && ptr == token.data() + token.size()) return v;
  }
  // float?
  {
    std::string owned(token);
    char* end = nullptr;
    double v = std::strtod(owned.c_str(), &end);
    if (end == owned.c_str() + owned.size()) return v;
  }
  toml_error(line, "cannot parse value '" + std::string(token) + "'");
}

Json parse_value(std::string_view s, size_t& pos, size_t line) {
  skip_ws(s, pos);
  if (pos >= s.size()) toml_error(line, "missing value");
  char c = s[pos];
  if (c == '"') return parse_basic_string(s, pos, line);
  if (c == '[') return parse_array(s, pos, line);
  if (c == '{') return parse_inline_table(s, pos, line);
  size_t start = pos;
  while (pos < s.size() && s[pos] != ',' && s[pos] != ']' && s[pos] != '}' && s[pos] != ' ' &&
         s[pos] != '\t') {
    ++pos;
  }
  return parse_scalar(s.substr(start, pos - start), line);
}

std::vector<std::string> parse_key_path(std::string_view s, size_t& pos, size_t line) {
  std::vector<std::string> parts;
  for (;;) {
    parts.push_back(parse_key_part(s, pos, line));
    skip_ws(s, pos);
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      continue;
    }
    return parts;
  }
}

// Walks/creates nested tables; a path segment landing on an array of tables
// descends into its last element.
Json* navigate(Json* node, const std::vector<std::string>& path, size_t count, size_t line) {
  for (size_t i = 0; i < count; ++i) {
    if (node->is_array()) {
      if (node->empty()) toml_error(line, "cannot extend an empty table array");
      node = &node->back();
    }
    if (!node->is_object()) toml_error(line, "key path collides with a non-table value");
    Json& child = (*node)[path[i]];
    if (child.is_null()) child = Json::object();
    node = &child;
  }
  if (node->is_array()) {
    if (node->empty()) toml_error(line, "cannot extend an empty table array");
    node = &node->back();
  }
  return node;
}

}  // namespace

nlohmann::ordered_json parse_toml(const std::string& text) {
  Json root = Json::object();
  Json* current = &root;
  std::set<std::string> defined_tables;

  std::istringstream in(text);
  std::string raw_line;
  size_t line_no = 0;
  while (std::getline(in, raw_line)) {
    ++line_no;
    if (!raw_line.empty() && raw_line.back() == '\r') raw_line.pop_back();
    std::string line = trim(strip_comment(raw_line));
    if (line.empty()) continue;

    if (line.rfind("[[", 0) == 0) {
      size_t pos = 2;
      std::vector<std::string> path = parse_key_path(line, pos, line_no);
      skip_ws(line, pos);
      if (line.substr(pos, 2) != "]]") {
        toml_error(line_no, "malformed table array header");
      }
      pos += 2;
      skip_ws(line, pos);
      if (pos != line.size()) toml_error(line_no, "trailing characters after table header");
      Json* parent = navigate(&root, path, path.size() - 1, line_no);
      Json& slot = (*parent)[path.back()];
      if (slot.is_null()) slot = Json::array();
      if (!slot.is_array()) toml_error(line_no, "table array collides with existing key");
      slot.push_back(Json::object());
      current = &slot.back();
      continue;
    }

    if (line.front() == '[') {
      size_t pos = 1;
      std::vector<std::string> path = parse_key_path(line, pos, line_no);
      skip_ws(line, pos);
      if (pos >= line.size() || line[pos] != ']') toml_error(line_no, "malformed table header");
      ++pos;
      skip_ws(line, pos);
      if (pos != line.size()) toml_error(line_no, "trailing characters after table header");
      std::string joined;
      for (const auto& p : path) joined += p + ".";
      if (!defined_tables.insert(joined).second) {
        toml_error(line_no, "table [" + joined.substr(0, joined.size() - 1) +
                                "] defined more than once");
      }
      current = navigate(&root, path, path.size(), line_no);
      continue;
    }

    size_t pos = 0;
    std::vector<std::string> path = parse_key_path(line, pos, line_no);
    skip_ws(line, pos);
    if (pos >= line.size() || line[pos] != '=') toml_error(line_no, "expected '='");
    ++pos;
    Json value = parse_value(line, pos, line_no);
    skip_ws(line, pos);
    if (pos != line.size()) toml_error(line_no, "trailing characters after value");

    Json* parent = navigate(current, path, path.size() - 1, line_no);
    if (parent->contains(path.back())) {
      toml_error(line_no, "duplicate key '" + path.back() + "'");
    }
    (*parent)[path.back()] = std::move(value);
  }
  return root;
}

nlohmann::ordered_json parse_toml_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_toml(buf.str());
}

// --- audit config -----------------------------------------------------------

ConfigValidationError::ConfigValidationError(std::vector<std::string> violations)
    : Error("config validation failed:\n  - " + [&violations] {
        std::string joined;
        for (size_t i = 0; i < violations.size(); ++i) {
          if (i) joined += "\n  - ";
          joined += violations[i];
        }
        return joined;
      }()),
      violations_(std::move(violations)) {}

namespace {

class SectionReader {
 public:
  SectionReader(const Json* node, std::string name, std::vector<std::string>& errors)
      : node_(node), name_(std::move(name)), errors_(errors) {}

  bool present() const { return node_ != nullptr && !node_->is_null(); }

  void require_object() {
    if (present() && !node_->is_object()) {
      error("must be a table");
      node_ = nullptr;
    }
  }

  const Json* field(const std::string& key) {
    seen_.insert(key);
    if (!present() || !node_->is_object() || !node_->contains(key)) return nullptr;
    return &(*node_)[key];
  }

  std::optional<std::string> get_string(const std::string& key) {
    const Json* f = field(key);
    if (!f) return std::nullopt;
    if (!f->is_string()) {
      error("'" + key + "' must be a string");
      return std::nullopt;
    }
    return f->get<std::string>();
  }

  std::optional<double> get_number(const std::string& key) {
    const Json* f = field(key);
    if (!f) return std::nullopt;
    if (!f->is_number()) {
      error("'" + key + "' must be a number");
      return std::nullopt;
    }
    return f->get<double>();
  }

  std::optional<int64_t> get_integer(const std::string& key) {
    const Json* f = field(key);
    if (!f) return std::nullopt;
    if (!f->is_number_integer()) {
      error("'" + key + "' must be an integer");
      return std::nullopt;
    }
    return f->get<int64_t>();
  }

  std::optional<size_t> get_count(const std::string& key) {
    auto v = get_integer(key);
    if (!v) return std::nullopt;
    if (*v < 0) {
      error("'" + key + "' must be >= 0");
      return std::nullopt;
    }
    return static_cast<size_t>(*v);
  }

  std::optional<bool> get_bool(const std::string& key) {
    const Json* f = field(key);
    if (!f) return std::nullopt;
    if (!f->is_boolean()) {
      error("'" + key + "' must be a boolean");
      return std::nullopt;
    }
    return f->get<bool>();
  }

  void finish() {
    if (!present() || !node_->is_object()) return;
    for (const auto& [key, _] : node_->items()) {
      if (!seen_.count(key)) error("unknown key '" + key + "'");
    }
  }

  void error(const std::string& message) { errors_.push_back("[" + name_ + "] " + message); }

  const Json* node() const { return node_; }

 private:
  const Json* node_;
  std::string name_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

std::optional<std::map<std::string, std::string>> read_record_table(const Json* node,
                                                                    const std::string& where,
                                                                    std::vector<std::string>& errors) {
  if (!node->is_object()) {
    errors.push_back("[" + where + "] must be a table of attribute = \"label\" pairs");
    return std::nullopt;
  }
  std::map<std::string, std::string> labels;
  for (const auto& [key, value] : node->items()) {
    if (!value.is_string()) {
      errors.push_back("[" + where + "] value for '" + key + "' must be a string label");
      continue;
    }
    labels[key] = value.get<std::string>();
  }
  return labels;
}

const std::set<std::string> kGeneratorNames = {"raw-copy", "raw-bootstrap",
                                               "independent-marginals", "chain-bayes",
                                               "external"};

std::string resolve_path(const std::string& base_dir, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

}  // namespace

AuditConfig parse_audit_config(const nlohmann::ordered_json& doc, const std::string& base_dir) {
  std::vector<std::string> errors;
  AuditConfig cfg;
  cfg.raw = doc;

  if (!doc.is_object()) {
    throw ConfigValidationError({"config root must be a table"});
  }

  SectionReader root(&doc, "config", errors);
  if (auto seed = root.get_integer("seed")) {
    if (*seed < 0) {
      root.error("'seed' must be >= 0");
    } else {
      cfg.seed = static_cast<uint64_t>(*seed);
    }
  }
  if (auto out = root.get_string("output_dir")) cfg.output_dir = *out;

  // [data]
  SectionReader data(root.field("data"), "data", errors);
  data.require_object();
  if (!data.present()) {
    errors.push_back("[data] section is required");
  } else {
    if (auto csv = data.get_string("csv")) {
      cfg.data_csv = resolve_path(base_dir, *csv);
      if (!std::filesystem::exists(cfg.data_csv)) {
        data.error("csv file does not exist: " + cfg.data_csv);
      }
    } else {
      data.error("'csv' is required");
    }
    if (auto schema = data.get_string("schema")) {
      cfg.schema_path = resolve_path(base_dir, *schema);
      if (!std::filesystem::exists(*cfg.schema_path)) {
        data.error("schema file does not exist: " + *cfg.schema_path);
      }
    }
    data.finish();
  }

  // [generator]
  SectionReader gen(root.field("generator"), "generator", errors);
  gen.require_object();
  if (!gen.present()) {
    errors.push_back("[generator] section is required");
  } else {
    if (auto name = gen.get_string("name")) {
      cfg.generator_name = *name;
      if (!kGeneratorNames.count(*name)) {
        gen.error("unknown generator '" + *name + "'");
      }
    } else {
      gen.error("'name' is required");
    }
    if (auto eps = gen.get_number("epsilon")) {
      if (*eps <= 0.0) {
        gen.error("'epsilon' must be positive");
      } else {
        cfg.epsilon = eps;
      }
    }
    if (auto n = gen.get_count("n_synthetic")) {
      cfg.n_synthetic = *n;
      if (*n == 0) gen.error("'n_synthetic' must be >= 1");
    } else {
      gen.error("'n_synthetic' is required");
    }
    if (const Json* order = gen.field("order")) {
      if (!order->is_array()) {
        gen.error("'order' must be an array of attribute names");
      } else {
        std::vector<std::string> names;
        for (const auto& v : *order) {
          if (!v.is_string()) {
            gen.error("'order' entries must be strings");
            break;
          }
          names.push_back(v.get<std::string>());
        }
        cfg.chain_order = std::move(names);
      }
    }
    if (const Json* cmd = gen.field("command")) {
      if (!cmd->is_array() || cmd->empty()) {
        gen.error("'command' must be a non-empty array of strings");
      } else {
        for (const auto& v : *cmd) {
          if (!v.is_string()) {
            gen.error("'command' entries must be strings");
            break;
          }
          cfg.external_command.push_back(v.get<std::string>());
        }
      }
    }
    if (auto wd = gen.get_string("workdir")) cfg.external_workdir = *wd;
    if (auto ts = gen.get_number("timeout_seconds")) {
      if (*ts <= 0.0) {
        gen.error("'timeout_seconds' must be positive");
      } else {
        cfg.external_timeout_seconds = *ts;
      }
    }
    if (const Json* prior = gen.field("epsilon_prior")) {
      SectionReader pr(prior, "generator.epsilon_prior", errors);
      pr.require_object();
      if (pr.present()) {
        EpsilonPrior ep;
        if (const Json* atoms = pr.field("atoms")) {
          if (!atoms->is_array()) {
            pr.error("'atoms' must be an array of [epsilon, probability] pairs");
          } else {
            for (const auto& a : *atoms) {
              if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
                pr.error("'atoms' entries must be [epsilon, probability] pairs");
                break;
              }
              ep.atoms.emplace_back(a[0].get<double>(), a[1].get<double>());
            }
          }
        }
        if (const Json* uni = pr.field("uniform")) {
          if (!uni->is_array() || uni->size() != 2 || !(*uni)[0].is_number() ||
              !(*uni)[1].is_number()) {
            pr.error("'uniform' must be [lo, hi]");
          } else {
            ep.uniform = {(*uni)[0].get<double>(), (*uni)[1].get<double>()};
          }
        }
        if (ep.atoms.empty() == !ep.uniform.has_value()) {
          pr.error("exactly one of 'atoms' or 'uniform' must be given");
        } else {
          cfg.epsilon_prior = std::move(ep);
        }
        pr.finish();
      }
    }
    gen.finish();

    const bool is_external = cfg.generator_name == "external";
    const bool is_dp_capable =
        cfg.generator_name == "independent-marginals" || cfg.generator_name == "chain-bayes";
    if (is_external && cfg.external_command.empty()) {
      gen.error("'command' is required for the external generator");
    }
    if (!is_external && !cfg.external_command.empty()) {
      gen.error("'command' only applies to the external generator");
    }
    if (cfg.epsilon && !is_dp_capable) {
      gen.error("'epsilon' only applies to independent-marginals and chain-bayes");
    }
    if (cfg.chain_order && cfg.generator_name != "chain-bayes") {
      gen.error("'order' only applies to chain-bayes");
    }
  }

  // [threat_model]
  SectionReader tm(root.field("threat_model"), "threat_model", errors);
  tm.require_object();
  if (!tm.present()) {
    errors.push_back("[threat_model] section is required");
  } else {
    if (auto prior = tm.get_string("prior")) {
      cfg.prior_kind = *prior;
      if (*prior != "exact" && *prior != "auxiliary") {
        tm.error("'prior' must be 'exact' or 'auxiliary'");
      }
    } else {
      tm.error("'prior' is required");
    }
    if (auto knowledge = tm.get_string("knowledge")) {
      cfg.knowledge_kind = *knowledge;
      if (*knowledge != "black-box" && *knowledge != "no-box" && *knowledge != "uncertain-box") {
        tm.error("'knowledge' must be 'black-box', 'no-box' or 'uncertain-box'");
      }
    } else {
      tm.error("'knowledge' is required");
    }
    if (auto goal = tm.get_string("goal")) {
      cfg.goal_kind = *goal;
      if (*goal != "mia" && *goal != "aia") tm.error("'goal' must be 'mia' or 'aia'");
    } else {
      tm.error("'goal' is required");
    }
    bool has_n_minus = false, has_aux_fields = false, has_p_in = false;
    if (auto n = tm.get_count("n_minus")) {
      cfg.n_minus = *n;
      has_n_minus = true;
    }
    if (auto f = tm.get_number("aux_fraction")) {
      cfg.aux_fraction = *f;
      has_aux_fields = true;
    }
    if (auto f = tm.get_number("test_fraction")) {
      cfg.test_fraction = *f;
      has_aux_fields = true;
    }
    if (auto n = tm.get_count("n_real")) {
      cfg.n_real = *n;
      has_aux_fields = true;
    }
    if (auto p = tm.get_number("p_in")) {
      cfg.p_in = *p;
      has_p_in = true;
      if (*p < 0.0 || *p > 1.0) tm.error("'p_in' must lie in [0, 1]");
    }
    if (auto c = tm.get_count("outlier_candidates")) {
      cfg.outlier_candidates = *c;
      if (*c == 0) tm.error("'outlier_candidates' must be >= 1");
    }
    if (const Json* target = tm.field("target")) {
      if (target->is_string()) {
        if (target->get<std::string>() == "auto-outlier") {
          cfg.auto_target = true;
        } else {
          tm.error("'target' must be \"auto-outlier\" or a record table");
        }
      } else if (auto labels = read_record_table(target, "threat_model.target", errors)) {
        cfg.target_labels = std::move(*labels);
      }
    } else {
      tm.error("'target' is required (\"auto-outlier\" or a record table)");
    }
    if (const Json* repl = tm.field("replacement")) {
      if (auto labels = read_record_table(repl, "threat_model.replacement", errors)) {
        cfg.replacement_labels = std::move(*labels);
      }
    }
    if (auto attr = tm.get_string("aia_attribute")) cfg.aia_attribute = *attr;
    tm.finish();

    if (cfg.prior_kind == "exact" && cfg.n_minus == 0) {
      tm.error("'n_minus' (>= 1) is required for the exact prior");
    }
    if (cfg.prior_kind == "auxiliary") {
      if (cfg.n_real == 0) tm.error("'n_real' (>= 1) is required for the auxiliary prior");
      if (cfg.aux_fraction <= 0.0 || cfg.test_fraction <= 0.0 ||
          cfg.aux_fraction + cfg.test_fraction > 1.0 + 1e-12) {
        tm.error("'aux_fraction' and 'test_fraction' must be positive and sum to at most 1");
      }
    }
    if (cfg.goal_kind == "aia" && cfg.aia_attribute.empty()) {
      tm.error("'aia_attribute' is required for attribute-inference goals");
    }
    if (cfg.goal_kind == "mia" && cfg.prior_kind == "exact" && cfg.p_in != 0.5) {
      tm.error("the exact prior fixes p_in = 1/2");
    }
    if (cfg.goal_kind == "aia" && cfg.replacement_labels) {
      tm.error("'replacement' only applies to membership goals");
    }
    if (cfg.goal_kind == "aia" && has_p_in) {
      tm.error("'p_in' only applies to membership goals");
    }
    if (cfg.prior_kind == "auxiliary" && has_n_minus) {
      tm.error("'n_minus' only applies to the exact prior");
    }
    if (cfg.prior_kind == "exact" && has_aux_fields) {
      tm.error("'aux_fraction', 'test_fraction' and 'n_real' only apply to the auxiliary prior");
    }
    if (cfg.knowledge_kind == "uncertain-box") {
      if (!cfg.epsilon_prior) {
        errors.push_back(
            "[generator] 'epsilon_prior' is required under uncertain-box knowledge");
      }
      if (cfg.generator_name != "independent-marginals" && cfg.generator_name != "chain-bayes") {
        errors.push_back(
            "[generator] uncertain-box knowledge requires a built-in DP generator");
      }
      if (cfg.epsilon) {
        errors.push_back("[generator] 'epsilon' and 'epsilon_prior' are mutually exclusive");
      }
    } else if (cfg.epsilon_prior) {
      errors.push_back("[generator] 'epsilon_prior' requires uncertain-box knowledge");
    }
  }

  // [[attacks]]
  const Json* attacks = root.field("attacks");
  if (!attacks || !attacks->is_array() || attacks->empty()) {
    errors.push_back("[[attacks]] needs at least one entry");
  } else {
    const bool goal_is_mia = cfg.goal_kind != "aia";
    for (size_t i = 0; i < attacks->size(); ++i) {
      const Json& entry = (*attacks)[i];
      if (!entry.is_object() || !entry.contains("name") || !entry["name"].is_string()) {
        errors.push_back("[[attacks]] entry " + std::to_string(i + 1) +
                         " needs a string 'name'");
        continue;
      }
      AttackSpec spec;
      spec.name = entry["name"].get<std::string>();
      spec.params = Json::object();
      for (const auto& [key, value] : entry.items()) {
        if (key != "name") spec.params[key] = value;
      }
      for (const std::string& problem : check_attack_spec(spec.name, spec.params, goal_is_mia)) {
        errors.push_back("[[attacks]] entry " + std::to_string(i + 1) + ": " + problem);
      }
      cfg.attacks.push_back(std::move(spec));
    }
  }

  // [runs]
  SectionReader runs(root.field("runs"), "runs", errors);
  runs.require_object();
  if (!runs.present()) {
    errors.push_back("[runs] section is required");
  } else {
    if (auto n = runs.get_count("n_train")) cfg.n_train = *n;
    if (auto n = runs.get_count("n_test")) {
      cfg.n_test = *n;
      if (*n == 0) runs.error("'n_test' must be >= 1");
    } else {
      runs.error("'n_test' is required");
    }
    runs.finish();

    if (cfg.knowledge_kind == "no-box" && cfg.n_train > 0) {
      runs.error("training samples are unavailable under no-box knowledge; set n_train = 0");
    }
    bool any_needs_training = false;
    for (const auto& spec : cfg.attacks) {
      if (attack_requires_training(spec.name)) {
        any_needs_training = true;
        if (cfg.n_train == 0) {
          runs.error("attack '" + spec.name + "' requires training samples (n_train >= 2)");
        }
      }
    }
    if (any_needs_training && cfg.n_train == 1) {
      runs.error("shadow attacks need at least 2 training samples");
    }
  }

  // [reports]
  SectionReader reports(root.field("reports"), "reports", errors);
  reports.require_object();
  if (reports.present()) {
    if (auto m = reports.get_bool("metrics")) cfg.report_metrics = *m;
    if (auto r = reports.get_bool("roc")) cfg.report_roc = *r;
    if (const Json* ee = reports.field("eff_epsilon")) {
      SectionReader es(ee, "reports.eff_epsilon", errors);
      es.require_object();
      if (es.present()) {
        EffEpsSpec spec;
        if (auto d = es.get_number("delta")) {
          spec.delta = *d;
          if (*d < 0.0) es.error("'delta' must be >= 0");
        }
        if (auto c = es.get_number("confidence")) {
          spec.confidence = *c;
          if (!(*c > 0.0 && *c < 1.0)) es.error("'confidence' must lie in (0, 1)");
        }
        if (auto f = es.get_number("select_fraction")) {
          spec.select_fraction = *f;
          if (!(*f > 0.0 && *f < 1.0)) es.error("'select_fraction' must lie in (0, 1)");
        }
        es.finish();
        cfg.eff_eps = spec;
        if (cfg.goal_kind == "aia") {
          es.error("effective-epsilon estimation requires a binary (mia) goal");
        }
        if (cfg.n_test < 20) es.error("effective-epsilon estimation needs n_test >= 20");
      }
    }
    reports.finish();
  }

  root.finish();

  if (!errors.empty()) throw ConfigValidationError(std::move(errors));
  return cfg;
}

AuditConfig load_audit_config(const std::string& path) {
  nlohmann::ordered_json doc = parse_toml_file(path);
  std::string base_dir = std::filesystem::path(path).parent_path().string();
  return parse_audit_config(doc, base_dir);
}

}  // namespace synaudit
