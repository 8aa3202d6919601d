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

#include "synaudit/generators.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "synaudit/common.hpp"

namespace synaudit {

namespace {

// Clamps negatives to zero and normalizes to a probability vector; uniform
// fallback when all mass clamps away.
std::vector<double> clamp_normalize(std::vector<double> counts) {
  double total = 0.0;
  for (double& c : counts) {
    if (c < 0.0) c = 0.0;
    total += c;
  }
  if (total <= 0.0) {
    std::fill(counts.begin(), counts.end(), 1.0 / static_cast<double>(counts.size()));
  } else {
    for (double& c : counts) c /= total;
  }
  return counts;
}

class RawGenerator : public Generator {
 public:
  explicit RawGenerator(RawMode mode) : mode_(mode) {}

  Dataset generate(const Dataset& real, size_t n_out, Rng& rng) const override {
    std::vector<Record> rows;
    rows.reserve(n_out);
    if (mode_ == RawMode::kCopy) {
      if (n_out > real.size()) {
        throw Error("raw copy generator: n_out " + std::to_string(n_out) +
                    " exceeds real dataset size " + std::to_string(real.size()));
      }
      for (size_t i = 0; i < n_out; ++i) rows.push_back(real.row(i));
    } else {
      if (n_out > 0 && real.empty()) {
        throw Error("raw bootstrap generator: cannot resample an empty dataset");
      }
      for (size_t i = 0; i < n_out; ++i) {
        rows.push_back(real.row(rng.uniform_int(real.size())));
      }
    }
    return Dataset(real.schema_ptr(), std::move(rows));
  }

  std::string descriptor() const override {
    return mode_ == RawMode::kCopy ? "raw-copy" : "raw-bootstrap";
  }

 private:
  RawMode mode_;
};

class IndependentMarginalsGenerator : public Generator {
 public:
  explicit IndependentMarginalsGenerator(std::optional<double> epsilon) : epsilon_(epsilon) {
    if (epsilon_ && *epsilon_ <= 0.0) {
      throw Error("independent marginals generator: epsilon must be positive");
    }
  }

  Dataset generate(const Dataset& real, size_t n_out, Rng& rng) const override {
    const Schema& schema = real.schema();
    const size_t k = schema.attribute_count();
    std::vector<std::vector<double>> marginals(k);
    for (size_t a = 0; a < k; ++a) {
      std::vector<int64_t> counts = marginal_histogram(real, a);
      std::vector<double> noisy(counts.begin(), counts.end());
      if (epsilon_) {
        const double scale = static_cast<double>(k) / *epsilon_;
        for (double& c : noisy) c += rng.laplace(scale);
      }
      marginals[a] = clamp_normalize(std::move(noisy));
    }
    std::vector<Record> rows;
    rows.reserve(n_out);
    for (size_t i = 0; i < n_out; ++i) {
      Record r;
      r.values.resize(k);
      for (size_t a = 0; a < k; ++a) {
        r.values[a] = static_cast<int32_t>(rng.categorical(marginals[a]));
      }
      rows.push_back(std::move(r));
    }
    return Dataset(real.schema_ptr(), std::move(rows));
  }

  std::string descriptor() const override {
    std::ostringstream os;
    os << "independent-marginals";
    if (epsilon_) os << "(eps=" << *epsilon_ << ")";
    return os.str();
  }

 private:
  std::optional<double> epsilon_;
};

class ChainBayesGenerator : public Generator {
 public:
  ChainBayesGenerator(std::optional<double> epsilon, std::optional<std::vector<size_t>> order)
      : epsilon_(epsilon), order_(std::move(order)) {
    if (epsilon_ && *epsilon_ <= 0.0) {
      throw Error("chain bayes generator: epsilon must be positive");
    }
  }

  Dataset generate(const Dataset& real, size_t n_out, Rng& rng) const override {
    const Schema& schema = real.schema();
    const size_t k = schema.attribute_count();
    std::vector<size_t> order = resolve_order(k);

    const double scale = epsilon_ ? static_cast<double>(k) / *epsilon_ : 0.0;
    auto noise = [&](double c) { return epsilon_ ? c + rng.laplace(scale) : c; };

    // Root marginal over x_{order[0]}.
    const size_t m0 = schema.attribute(order[0]).values.size();
    std::vector<double> root(m0, 0.0);
    for (const Record& r : real.rows()) root[static_cast<size_t>(r.values[order[0]])] += 1.0;
    for (double& c : root) c = noise(c);
    root = clamp_normalize(std::move(root));

    // Conditional tables p(x_{order[i]} | x_{order[i-1]}), one normalized
    // row per conditioning context.
    std::vector<std::vector<std::vector<double>>> cond(k);
    for (size_t i = 1; i < k; ++i) {
      const size_t prev_card = schema.attribute(order[i - 1]).values.size();
      const size_t cur_card = schema.attribute(order[i]).values.size();
      std::vector<std::vector<double>> table(prev_card, std::vector<double>(cur_card, 0.0));
      for (const Record& r : real.rows()) {
        table[static_cast<size_t>(r.values[order[i - 1]])]
             [static_cast<size_t>(r.values[order[i]])] += 1.0;
      }
      for (auto& row : table) {
        for (double& c : row) c = noise(c);
        row = clamp_normalize(std::move(row));
      }
      cond[i] = std::move(table);
    }

    std::vector<Record> rows;
    rows.reserve(n_out);
    for (size_t n = 0; n < n_out; ++n) {
      Record r;
      r.values.resize(k);
      size_t prev = rng.categorical(root);
      r.values[order[0]] = static_cast<int32_t>(prev);
      for (size_t i = 1; i < k; ++i) {
        size_t cur = rng.categorical(cond[i][prev]);
        r.values[order[i]] = static_cast<int32_t>(cur);
        prev = cur;
      }
      rows.push_back(std::move(r));
    }
    return Dataset(real.schema_ptr(), std::move(rows));
  }

  std::string descriptor() const override {
    std::ostringstream os;
    os << "chain-bayes";
    if (epsilon_) os << "(eps=" << *epsilon_ << ")";
    return os.str();
  }

 private:
  std::vector<size_t> resolve_order(size_t k) const {
    if (!order_) {
      std::vector<size_t> o(k);
      std::iota(o.begin(), o.end(), size_t{0});
      return o;
    }
    if (order_->size() != k) {
      throw Error("chain bayes generator: order must list every attribute exactly once");
    }
    std::vector<bool> seen(k, false);
    for (size_t a : *order_) {
      if (a >= k || seen[a]) {
        throw Error("chain bayes generator: order is not a permutation of the attributes");
      }
      seen[a] = true;
    }
    return *order_;
  }

  std::optional<double> epsilon_;
  std::optional<std::vector<size_t>> order_;
};

// --- external subprocess generator ---------------------------------------

std::filesystem::path default_workdir() {
  if (const char* env = std::getenv("SYNTH_AUDIT_TMPDIR"); env && *env) {
    return env;
  }
  return std::filesystem::temp_directory_path();
}

std::string read_tail(const std::filesystem::path& path, size_t max_bytes = 4096) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "";
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string s = buf.str();
  if (s.size() > max_bytes) s = "..." + s.substr(s.size() - max_bytes);
  return s;
}

struct RunResult {
  int exit_code = -1;
  bool timed_out = false;
};

RunResult run_command(const std::vector<std::string>& argv,
                      const std::filesystem::path& log_path, double timeout_seconds) {
  std::vector<char*> cargv;
  cargv.reserve(argv.size() + 1);
  for (const auto& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
  cargv.push_back(nullptr);

  pid_t pid = fork();
  if (pid < 0) throw Error("external generator: fork failed");
  if (pid == 0) {
    int fd = ::open(log_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    if (fd >= 0) {
      ::dup2(fd, STDOUT_FILENO);
      ::dup2(fd, STDERR_FILENO);
      ::close(fd);
    }
    ::execvp(cargv[0], cargv.data());
    ::_exit(127);
  }

  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_seconds);
  RunResult res;
  for (;;) {
    int status = 0;
    pid_t done = ::waitpid(pid, &status, WNOHANG);
    if (done == pid) {
      if (WIFEXITED(status)) {
        res.exit_code = WEXITSTATUS(status);
      } else if (WIFSIGNALED(status)) {
        res.exit_code = 128 + WTERMSIG(status);
      }
      return res;
    }
    if (done < 0) throw Error("external generator: waitpid failed");
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      res.timed_out = true;
      return res;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
}

class ExternalGenerator : public Generator {
 public:
  ExternalGenerator(std::vector<std::string> command, std::string workdir,
                    double timeout_seconds)
      : command_(std::move(command)), workdir_(std::move(workdir)),
        timeout_seconds_(timeout_seconds) {
    if (command_.empty()) throw Error("external generator: empty command");
    if (timeout_seconds_ <= 0.0) throw Error("external generator: timeout must be positive");
  }

  Dataset generate(const Dataset& real, size_t n_out, Rng& rng) const override {
    namespace fs = std::filesystem;
    fs::path base = workdir_.empty() ? default_workdir() : fs::path(workdir_);
    fs::create_directories(base);
    std::string tmpl = (base / "synaudit-XXXXXX").string();
    std::vector<char> buf(tmpl.begin(), tmpl.end());
    buf.push_back('\0');
    if (::mkdtemp(buf.data()) == nullptr) {
      throw Error("external generator: cannot create temp directory under " + base.string());
    }
    fs::path dir(buf.data());
    fs::path input_csv = dir / "input.csv";
    fs::path schema_json = dir / "schema.json";
    fs::path output_csv = dir / "output.csv";
    fs::path log_path = dir / "subprocess.log";

    write_csv(real, input_csv.string());
    write_schema_json(real.schema(), schema_json.string());

    const uint64_t seed = rng.next_u64();
    std::vector<std::string> argv = command_;
    argv.insert(argv.end(), {"--input", input_csv.string(), "--schema", schema_json.string(),
                             "--output", output_csv.string(), "--size", std::to_string(n_out),
                             "--seed", std::to_string(seed)});

    RunResult res = run_command(argv, log_path, timeout_seconds_);
    if (res.timed_out) {
      throw Error("external generator: timed out after " + std::to_string(timeout_seconds_) +
                  " s (files retained in " + dir.string() + ")");
    }
    if (res.exit_code != 0) {
      throw Error("external generator: command exited with status " +
                  std::to_string(res.exit_code) + "; output: " + read_tail(log_path) +
                  " (files retained in " + dir.string() + ")");
    }
    if (!fs::exists(output_csv)) {
      throw Error("external generator: command produced no output file (files retained in " +
                  dir.string() + ")");
    }
    Dataset out = [&] {
      try {
        return load_csv(output_csv.string(), real.schema_ptr());
      } catch (const Error& e) {
        throw Error(std::string("external generator: invalid output: ") + e.what() +
                    " (files retained in " + dir.string() + ")");
      }
    }();
    if (out.size() != n_out) {
      throw Error("external generator: expected " + std::to_string(n_out) + " rows, got " +
                  std::to_string(out.size()) + " (files retained in " + dir.string() + ")");
    }
    std::error_code ec;
    fs::remove_all(dir, ec);  // best effort; success path only
    return out;
  }

  std::string descriptor() const override { return "external(" + command_.front() + ")"; }

 private:
  std::vector<std::string> command_;
  std::string workdir_;
  double timeout_seconds_;
};

}  // namespace

GeneratorPtr raw_generator(RawMode mode) { return std::make_shared<RawGenerator>(mode); }

GeneratorPtr independent_marginals_generator(std::optional<double> epsilon) {
  return std::make_shared<IndependentMarginalsGenerator>(epsilon);
}

GeneratorPtr chain_bayes_generator(std::optional<double> epsilon,
                                   std::optional<std::vector<size_t>> order) {
  return std::make_shared<ChainBayesGenerator>(epsilon, std::move(order));
}

GeneratorPtr external_generator(std::vector<std::string> command, std::string workdir,
                                double timeout_seconds) {
  return std::make_shared<ExternalGenerator>(std::move(command), std::move(workdir),
                                             timeout_seconds);
}

void validate_meta(const MetaParameterized& mp) {
  if (!mp.family) throw Error("meta prior: missing generator family");
  const bool has_atoms = !mp.atoms.empty();
  const bool has_range = mp.uniform_range.has_value();
  if (has_atoms == has_range) {
    throw Error("meta prior: exactly one of atoms or uniform range must be set");
  }
  if (has_atoms) {
    double total = 0.0;
    for (const auto& [gamma, p] : mp.atoms) {
      if (p < 0.0) throw Error("meta prior: negative probability");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
      throw Error("meta prior: atom probabilities sum to " + std::to_string(total) +
                  ", expected 1");
    }
  } else {
    if (!(mp.uniform_range->first < mp.uniform_range->second)) {
      throw Error("meta prior: uniform range must have lo < hi");
    }
  }
}

std::pair<double, GeneratorPtr> sample_meta(const MetaParameterized& mp, Rng& rng) {
  validate_meta(mp);
  double gamma;
  if (!mp.atoms.empty()) {
    std::vector<double> weights;
    weights.reserve(mp.atoms.size());
    for (const auto& [g, p] : mp.atoms) weights.push_back(p);
    gamma = mp.atoms[rng.categorical(weights)].first;
  } else {
    const auto [lo, hi] = *mp.uniform_range;
    gamma = lo + rng.uniform_double() * (hi - lo);
  }
  return {gamma, mp.family(gamma)};
}

}  // namespace synaudit
