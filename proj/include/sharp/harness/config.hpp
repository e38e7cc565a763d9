// Copyright 2026 The sharp-pg Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Experiment configuration: a flat `key = value` text format with dotted
// keys and `#` comments. Unknown or repeated keys are errors.

#ifndef SHARP_HARNESS_CONFIG_HPP
#define SHARP_HARNESS_CONFIG_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sharp/core.hpp"
#include "sharp/environments.hpp"
#include "sharp/mdp.hpp"
#include "sharp/policy.hpp"

namespace sharp {

class config_error : public invalid_argument {
 public:
  using invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  // environment
  std::string env_kind = "two_state";  // two_state | gridworld | tabular | point_mass | pendulum
  std::string env_file;                // tabular only, relative to the config file
  std::map<std::string, double> env_params;

  // policy
  std::string policy_kind;  // softmax | gaussian_linear | gaussian_mlp; empty picks by environment
  std::vector<int> policy_hidden{8, 8};
  double policy_log_std_init = 0.0;
  std::uint64_t policy_seed = 0;

  // algorithm
  std::string algorithm = "sharp";  // sharp | reinforce | storm_is | svrpg | hapg | page_pg
  double alpha0 = 1.5;
  double eta0 = 0.1;
  int q = 10;
  int batch = 10;
  int batch_check = 50;
  std::optional<double> page_prob;
  double step_size = 0.01;
  bool use_baseline = false;
  bool normalize = false;

  // protocol
  int n_runs = 5;
  long max_probes = 0;
  std::uint64_t seed_base = 0;
  std::string output_dir = "out";
  int probe_grid = 100;
  int workers = 0;  // 0 = hardware concurrency
  bool record_wall_time = false;
  bool exact_eval = false;  // tabular: log exact J in the return column
  bool exact_grad = false;  // tabular: log grad_norm_exact and eps_norm_sq

  std::filesystem::path base_dir = ".";
  std::string source_text;                          // bytes the config was parsed from
  std::map<std::string, std::string> entries;       // echo of every key that was set
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) {
    throw config_error("config: '" + key + "' expects a number, got '" + value + "'");
  }
  return out;
}

template <class Int>
Int parse_int(const std::string& key, const std::string& value) {
  Int out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw config_error("config: '" + key + "' expects an integer, got '" + value + "'");
  }
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw config_error("config: '" + key + "' expects true or false, got '" + value + "'");
}

inline std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_int<int>(key, trim(item)));
  if (out.empty()) throw config_error("config: '" + key + "' expects a comma-separated list");
  return out;
}

inline void expect_one_of(const std::string& key, const std::string& value, std::initializer_list<const char*> options) {
  for (const char* o : options) {
    if (value == o) return;
  }
  std::string joined;
  for (const char* o : options) joined += std::string(joined.empty() ? "" : " | ") + o;
  throw config_error("config: '" + key + "' must be one of " + joined + ", got '" + value + "'");
}

}  // namespace detail

/// Sets one key. Used by the parser and by sweep overrides.
inline void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  using detail::parse_bool;
  using detail::parse_double;
  using detail::parse_int;
  if (key == "env.kind") {
    detail::expect_one_of(key, value, {"two_state", "gridworld", "tabular", "point_mass", "pendulum"});
    c.env_kind = value;
  } else if (key == "env.file") {
    c.env_file = value;
  } else if (key.starts_with("env.") && key.size() > 4) {
    c.env_params[key.substr(4)] = parse_double(key, value);
  } else if (key == "policy.kind") {
    detail::expect_one_of(key, value, {"softmax", "gaussian_linear", "gaussian_mlp"});
    c.policy_kind = value;
  } else if (key == "policy.hidden") {
    c.policy_hidden = detail::parse_int_list(key, value);
  } else if (key == "policy.log_std_init") {
    c.policy_log_std_init = parse_double(key, value);
  } else if (key == "policy.seed") {
    c.policy_seed = parse_int<std::uint64_t>(key, value);
  } else if (key == "algorithm") {
    detail::expect_one_of(key, value, {"sharp", "reinforce", "storm_is", "svrpg", "hapg", "page_pg"});
    c.algorithm = value;
  } else if (key == "alpha0") {
    c.alpha0 = parse_double(key, value);
  } else if (key == "eta0") {
    c.eta0 = parse_double(key, value);
  } else if (key == "q") {
    c.q = parse_int<int>(key, value);
  } else if (key == "batch") {
    c.batch = parse_int<int>(key, value);
  } else if (key == "batch_check") {
    c.batch_check = parse_int<int>(key, value);
  } else if (key == "page_prob") {
    c.page_prob = parse_double(key, value);
  } else if (key == "step_size") {
    c.step_size = parse_double(key, value);
  } else if (key == "use_baseline") {
    c.use_baseline = parse_bool(key, value);
  } else if (key == "normalize") {
    c.normalize = parse_bool(key, value);
  } else if (key == "n_runs") {
    c.n_runs = parse_int<int>(key, value);
  } else if (key == "max_probes") {
    c.max_probes = parse_int<long>(key, value);
  } else if (key == "seed_base") {
    c.seed_base = parse_int<std::uint64_t>(key, value);
  } else if (key == "output_dir") {
    c.output_dir = value;
  } else if (key == "probe_grid") {
    c.probe_grid = parse_int<int>(key, value);
  } else if (key == "workers") {
    c.workers = parse_int<int>(key, value);
  } else if (key == "record_wall_time") {
    c.record_wall_time = parse_bool(key, value);
  } else if (key == "exact_eval") {
    c.exact_eval = parse_bool(key, value);
  } else if (key == "exact_grad") {
    c.exact_grad = parse_bool(key, value);
  } else {
    throw config_error("config: unknown key '" + key + "'");
  }
  c.entries[key] = value;
}

using Environment = std::variant<TabularMdp, ContinuousEnv>;
using AnyPolicy = std::variant<SoftmaxTabular, GaussianLinear, GaussianMlp>;

inline bool is_tabular_kind(const std::string& kind) {
  return kind == "two_state" || kind == "gridworld" || kind == "tabular";
}

inline Environment make_environment(const ExperimentConfig& c) {
  auto take = [&](const std::string& name, double fallback) {
    const auto it = c.env_params.find(name);
    return it == c.env_params.end() ? fallback : it->second;
  };
  auto only = [&](std::initializer_list<const char*> allowed) {
    for (const auto& [name, value] : c.env_params) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || name == a;
      if (!ok) throw config_error("config: env." + name + " is not a parameter of " + c.env_kind);
    }
  };
  auto horizon = [&](int fallback) {
    const double h = take("horizon", fallback);
    if (h != std::floor(h)) throw config_error("config: env.horizon must be an integer");
    return static_cast<int>(h);
  };
  try {
    if (c.env_kind == "two_state") {
      only({"horizon"});
      return two_state_mdp(horizon(3));
    }
    if (c.env_kind == "gridworld") {
      only({"horizon", "gamma", "slip"});
      return gridworld5(horizon(10), take("gamma", 0.95), take("slip", 0.1));
    }
    if (c.env_kind == "tabular") {
      only({"horizon"});
      if (c.env_file.empty()) throw config_error("config: env.kind = tabular needs env.file");
      const auto path = std::filesystem::path(c.env_file).is_absolute() ? std::filesystem::path(c.env_file)
                                                                         : c.base_dir / c.env_file;
      TabularMdp mdp = load_tabular_mdp(path.string());
      return c.env_params.contains("horizon") ? mdp.with_horizon(horizon(mdp.horizon())) : mdp;
    }
    return ContinuousEnv::make(c.env_kind, c.env_params);
  } catch (const config_error&) {
    throw;
  } catch (const std::exception& e) {
    throw config_error(std::string("config: cannot build environment: ") + e.what());
  }
}

inline std::string resolved_policy_kind(const ExperimentConfig& c) {
  if (!c.policy_kind.empty()) return c.policy_kind;
  return is_tabular_kind(c.env_kind) ? "softmax" : "gaussian_linear";
}

inline AnyPolicy make_policy(const ExperimentConfig& c, const Environment& env) {
  const std::string kind = resolved_policy_kind(c);
  if (const auto* mdp = std::get_if<TabularMdp>(&env)) {
    if (kind != "softmax") throw config_error("config: tabular environments need policy.kind = softmax");
    return SoftmaxTabular::for_mdp(*mdp);
  }
  const auto& cont = std::get<ContinuousEnv>(env);
  if (kind == "gaussian_linear") return GaussianLinear(cont.state_dim(), cont.action_dim(), c.policy_log_std_init);
  if (kind == "gaussian_mlp") {
    try {
      return GaussianMlp(cont.state_dim(), cont.action_dim(), c.policy_hidden, c.policy_log_std_init, c.policy_seed);
    } catch (const invalid_argument& e) {
      throw config_error(std::string("config: ") + e.what());
    }
  }
  throw config_error("config: continuous environments need a Gaussian policy");
}

inline int environment_horizon(const Environment& env) {
  return std::visit([](const auto& e) { return e.horizon(); }, env);
}

/// Cross-field checks that need the environment.
inline void validate(const ExperimentConfig& c) {
  auto fail = [](const std::string& msg) { throw config_error("config: " + msg); };
  if (c.n_runs < 1) fail("n_runs must be at least 1");
  if (c.probe_grid < 2) fail("probe_grid must be at least 2");
  if (c.workers < 0) fail("workers must be non-negative");
  if (c.alpha0 <= 0.0) fail("alpha0 must be positive");
  if (c.eta0 < 0.0) fail("eta0 must be non-negative");
  if (c.algorithm == "sharp" && c.eta0 <= 0.0) fail("sharp needs eta0 > 0");
  if (c.q < 1 || c.batch < 1 || c.batch_check < 1) fail("q, batch and batch_check must be at least 1");
  if (c.page_prob && (*c.page_prob < 0.0 || *c.page_prob > 1.0)) fail("page_prob must lie in [0,1]");
  if (c.algorithm == "page_pg" && !c.page_prob) fail("page_pg needs page_prob");
  if (c.algorithm != "page_pg" && c.page_prob) fail("page_prob only applies to page_pg");
  if (c.use_baseline && c.algorithm != "reinforce") fail("use_baseline only applies to reinforce");
  const Environment env = make_environment(c);
  (void)make_policy(c, env);
  const int h = environment_horizon(env);
  if (c.max_probes < h) fail("max_probes must be at least the horizon (" + std::to_string(h) + ")");
  const auto* mdp = std::get_if<TabularMdp>(&env);
  if ((c.exact_eval || c.exact_grad) && mdp == nullptr) fail("exact_eval and exact_grad need a tabular environment");
  if (c.exact_grad && trajectory_space_size(*mdp, mdp->horizon()) > default_enumeration_cap) {
    fail("exact_grad needs trajectory enumeration, which exceeds the cap for this environment");
  }
}

inline ExperimentConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".") {
  ExperimentConfig c;
  c.base_dir = base_dir;
  c.source_text = text;
  std::stringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw config_error("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw config_error("config line " + std::to_string(line_no) + ": empty key or value");
    }
    if (c.entries.contains(key)) throw config_error("config line " + std::to_string(line_no) + ": repeated key '" + key + "'");
    apply_setting(c, key, value);
  }
  if (!c.entries.contains("max_probes")) throw config_error("config: max_probes is required");
  validate(c);
  return c;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw config_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
  return parse_config(read_file(path), path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace sharp

#endif  // SHARP_HARNESS_CONFIG_HPP
