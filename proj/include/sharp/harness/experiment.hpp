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

// Seeded multi-run experiments: per-run CSVs, aggregate JSON, plot data,
// PR recomputation from stored runs and grid sweeps.

#ifndef SHARP_HARNESS_EXPERIMENT_HPP
#define SHARP_HARNESS_EXPERIMENT_HPP

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sharp/algorithms.hpp"
#include "sharp/harness/config.hpp"
#include "sharp/harness/metrics.hpp"
#include "sharp/oracle.hpp"

namespace sharp {

/// Hex SHA-1 of "blob <size>\0<bytes>", as `git hash-object` prints it.
inline std::string git_blob_sha1(const std::string& bytes) {
  const std::string payload = "blob " + std::to_string(bytes.size()) + '\0' + bytes;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(payload.data(), payload.size(), digest, &len, EVP_sha1(), nullptr) != 1) {
    throw std::runtime_error("git_blob_sha1: digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

namespace detail {

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

inline long trajectory_budget(const ExperimentConfig& c, int horizon) { return c.max_probes / horizon; }

/// Iterations that fit the budget for the fixed-cost algorithms.
inline long iterations_for(const ExperimentConfig& c, long budget) {
  if (c.algorithm == "sharp") return (budget - 1) / 2 + 1;
  if (c.algorithm == "reinforce") return budget / c.batch;
  if (c.algorithm == "storm_is") return budget;
  if (c.algorithm == "page_pg") return budget;  // capped by trajectories instead
  long used = 0;
  long t = 0;
  while (true) {
    const long cost = t % c.q == 0 ? c.batch_check : c.batch;
    if (used + cost > budget) return t;
    used += cost;
    ++t;
  }
}

template <class Env, class Policy>
RunResult dispatch(const ExperimentConfig& c, const Env& env, const Policy& policy, Rng& rng,
                   const ExactOracle* oracle) {
  const long budget = trajectory_budget(c, env.horizon());
  const long iterations = iterations_for(c, budget);
  if (iterations < 1) throw config_error("config: max_probes does not cover one iteration of " + c.algorithm);
  if (c.algorithm == "sharp") {
    return sharp_run(SharpConfig{c.alpha0, c.eta0, iterations, c.record_wall_time}, env, policy, rng, oracle);
  }
  if (c.algorithm == "reinforce") {
    return reinforce_run(ReinforceConfig{c.step_size, c.batch, iterations, c.use_baseline, c.record_wall_time}, env,
                         policy, rng, oracle);
  }
  if (c.algorithm == "storm_is") {
    return storm_is_run(StormIsConfig{c.alpha0, c.eta0, iterations, c.normalize, c.record_wall_time}, env, policy,
                        rng, oracle);
  }
  VrFrameworkConfig vr;
  vr.q = c.q;
  vr.batch = c.batch;
  vr.batch_check = c.batch_check;
  vr.correction = c.algorithm == "hapg" ? Correction::hessian : Correction::importance_sampling;
  vr.page_prob = c.page_prob;
  vr.step_size = c.step_size;
  vr.iterations = iterations;
  vr.max_trajectories = c.algorithm == "page_pg" ? budget : 0;
  vr.record_wall_time = c.record_wall_time;
  return vr_framework_run(vr, env, policy, rng, oracle);
}

}  // namespace detail

/// One seeded run; seed = seed_base + run_index.
inline RunResult run_single(const ExperimentConfig& c, int run_index) {
  const Environment env = make_environment(c);
  const AnyPolicy policy = make_policy(c, env);
  Rng rng(c.seed_base + static_cast<std::uint64_t>(run_index));
  return std::visit(
      [&](const auto& e, const auto& p) -> RunResult {
        using E = std::decay_t<decltype(e)>;
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<E, TabularMdp> && std::is_same_v<P, SoftmaxTabular>) {
          ExactOracle oracle;
          if (c.exact_eval) {
            oracle.objective = [&e, &p](const ParamVector& th) { return objective_dp(e, p.with_params(th)); };
          }
          if (c.exact_grad) {
            oracle.gradient = [&e, &p](const ParamVector& th) { return exact_grad(e, p.with_params(th)); };
          }
          return detail::dispatch(c, e, p, rng, (c.exact_eval || c.exact_grad) ? &oracle : nullptr);
        } else if constexpr (std::is_same_v<E, ContinuousEnv> && !std::is_same_v<P, SoftmaxTabular>) {
          return detail::dispatch(c, e, p, rng, nullptr);
        } else {
          throw config_error("config: policy does not match the environment");
        }
      },
      env, policy);
}

inline const char* run_csv_header() { return "t,probes,return,eta,alpha,grad_norm_exact,eps_norm_sq,wall_ms"; }

inline std::string run_csv(const RunRecord& record) {
  std::ostringstream os;
  os << run_csv_header() << '\n';
  for (const auto& r : record.rows) {
    os << r.t << ',' << r.probes << ',' << detail::format_double(r.return_value) << ','
       << detail::format_optional(r.eta) << ',' << detail::format_optional(r.alpha) << ','
       << detail::format_optional(r.grad_norm_exact) << ',' << detail::format_optional(r.eps_norm_sq) << ','
       << detail::format_optional(r.wall_ms) << '\n';
  }
  return os.str();
}

/// Reads the probe and return columns of a per-run CSV.
inline RunCurve read_run_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw invalid_argument("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != run_csv_header()) {
    throw invalid_argument(path.string() + ": unexpected header");
  }
  RunCurve curve;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() < 3) throw invalid_argument(path.string() + ": short row");
    curve.probes.push_back(detail::parse_double("probes", cells[1]));
    curve.returns.push_back(detail::parse_double("return", cells[2]));
  }
  return curve;
}

inline std::string run_file_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "run_%03d.csv", index);
  return buf;
}

struct ExperimentSummary {
  double pr = 0.0;
  double final_mean_return = 0.0;
  std::vector<int> completed;
  std::vector<std::pair<int, std::string>> failed;
  bool warning = false;
  std::filesystem::path directory;
};

namespace detail {

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

inline int worker_count(const ExperimentConfig& c) {
  const int hw = std::max(1u, std::thread::hardware_concurrency());
  return std::max(1, std::min(c.n_runs, c.workers > 0 ? c.workers : hw));
}

}  // namespace detail

/// Runs the configured experiment in `c.output_dir`, writing run_XXX.csv,
/// aggregate.json and plot.csv.
inline ExperimentSummary run_experiment(const ExperimentConfig& c) {
  validate(c);
  const std::filesystem::path dir(c.output_dir);
  std::filesystem::create_directories(dir);
  const int horizon = environment_horizon(make_environment(c));

  std::vector<std::optional<RunResult>> results(static_cast<std::size_t>(c.n_runs));
  std::vector<std::string> errors(static_cast<std::size_t>(c.n_runs));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next++; i < c.n_runs; i = next++) {
      try {
        results[static_cast<std::size_t>(i)] = run_single(c, i);
      } catch (const std::exception& e) {
        errors[static_cast<std::size_t>(i)] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < detail::worker_count(c); ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  ExperimentSummary s;
  s.directory = dir;
  std::vector<RunCurve> curves;
  for (int i = 0; i < c.n_runs; ++i) {
    const auto& r = results[static_cast<std::size_t>(i)];
    if (!r) {
      s.failed.emplace_back(i, errors[static_cast<std::size_t>(i)]);
      continue;
    }
    if (r->record.rows.size() < 2) {
      s.failed.emplace_back(i, "run recorded fewer than two iterations; raise max_probes");
      continue;
    }
    detail::write_text(dir / run_file_name(i), run_csv(r->record));
    RunCurve curve;
    for (const auto& row : r->record.rows) {
      curve.probes.push_back(static_cast<double>(row.probes));
      curve.returns.push_back(row.return_value);
    }
    curves.push_back(std::move(curve));
    s.completed.push_back(i);
  }
  s.warning = !s.failed.empty();

  nlohmann::json agg;
  agg["config"] = c.entries;
  agg["config_hash"] = git_blob_sha1(c.source_text);
  agg["algorithm"] = c.algorithm;
  agg["n_runs"] = c.n_runs;
  agg["completed_runs"] = s.completed;
  nlohmann::json failed = nlohmann::json::array();
  for (const auto& [i, msg] : s.failed) failed.push_back({{"run", i}, {"error", msg}});
  agg["failed_runs"] = failed;
  agg["grid"] = {{"start", horizon}, {"end", c.max_probes}, {"size", c.probe_grid}};
  agg["warning"] = s.warning;

  if (!curves.empty()) {
    const auto grid = uniform_grid(horizon, static_cast<double>(c.max_probes), c.probe_grid);
    const auto aligned = interpolate_to_grid(curves, grid);
    s.pr = pr_metric(aligned);
    for (const auto& curve : curves) s.final_mean_return += curve.returns.back() / static_cast<double>(curves.size());
    const ReturnCurve summary = summarize(grid, aligned);
    std::ostringstream plot;
    plot << "probe,mean,lci90,uci90\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
      plot << detail::format_double(grid[i]) << ',' << detail::format_double(summary.mean[i]) << ','
           << detail::format_double(summary.lci90[i]) << ',' << detail::format_double(summary.uci90[i]) << '\n';
    }
    detail::write_text(dir / "plot.csv", plot.str());
    agg["pr"] = s.pr;
    agg["final_mean_return"] = s.final_mean_return;
  } else {
    agg["pr"] = nullptr;
    agg["final_mean_return"] = nullptr;
  }
  detail::write_text(dir / "aggregate.json", agg.dump(2) + "\n");
  return s;
}

/// Recomputes PR from the per-run CSVs listed in aggregate.json.
inline double pr_from_directory(const std::filesystem::path& dir) {
  std::ifstream in(dir / "aggregate.json");
  if (!in) throw invalid_argument("no aggregate.json in " + dir.string());
  const auto agg = nlohmann::json::parse(in);
  std::vector<RunCurve> curves;
  for (int i : agg.at("completed_runs").get<std::vector<int>>()) curves.push_back(read_run_csv(dir / run_file_name(i)));
  if (curves.empty()) throw invalid_argument("pr: no completed runs in " + dir.string());
  const auto& g = agg.at("grid");
  const auto grid = uniform_grid(g.at("start").get<double>(), g.at("end").get<double>(), g.at("size").get<int>());
  return pr_metric(interpolate_to_grid(curves, grid));
}

struct SweepEntry {
  std::vector<std::pair<std::string, std::string>> settings;
  std::filesystem::path directory;
  std::optional<double> pr;
};

/// Parses `key = v1, v2, ...` lines into the cartesian product of settings.
inline std::vector<std::vector<std::pair<std::string, std::string>>> parse_sweep_grid(const std::string& text) {
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  std::stringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw config_error("grid: expected 'key = v1, v2, ...'");
    std::vector<std::string> values;
    std::stringstream vs(line.substr(eq + 1));
    std::string v;
    while (std::getline(vs, v, ',')) {
      v = detail::trim(v);
      if (v.empty()) throw config_error("grid: empty value");
      values.push_back(v);
    }
    axes.emplace_back(detail::trim(line.substr(0, eq)), std::move(values));
  }
  if (axes.empty()) throw config_error("grid: no axes");
  std::vector<std::vector<std::pair<std::string, std::string>>> combos{{}};
  for (const auto& [key, values] : axes) {
    std::vector<std::vector<std::pair<std::string, std::string>>> grown;
    for (const auto& partial : combos) {
      for (const auto& v : values) {
        auto next = partial;
        next.emplace_back(key, v);
        grown.push_back(std::move(next));
      }
    }
    combos = std::move(grown);
  }
  return combos;
}

/// Runs every grid point into <output_dir>/sweep_XXX and writes sweep.csv.
inline std::vector<SweepEntry> sweep(const ExperimentConfig& base, const std::string& grid_text) {
  const auto combos = parse_sweep_grid(grid_text);
  const std::filesystem::path root(base.output_dir);
  std::filesystem::create_directories(root);
  std::vector<SweepEntry> entries;
  std::ostringstream table;
  table << "index,settings,pr\n";
  for (std::size_t k = 0; k < combos.size(); ++k) {
    ExperimentConfig c = base;
    std::string text = base.source_text;
    for (const auto& [key, value] : combos[k]) {
      if (key == "output_dir") throw config_error("grid: output_dir cannot be swept");
      apply_setting(c, key, value);
      text += "\n" + key + " = " + value;
    }
    c.source_text = text;
    char name[32];
    std::snprintf(name, sizeof name, "sweep_%03zu", k);
    c.output_dir = (root / name).string();
    validate(c);
    SweepEntry e{combos[k], c.output_dir, std::nullopt};
    const auto summary = run_experiment(c);
    if (!summary.completed.empty()) e.pr = summary.pr;
    std::string settings;
    for (const auto& [key, value] : combos[k]) settings += (settings.empty() ? "" : " ") + key + "=" + value;
    table << k << ',' << settings << ',' << (e.pr ? detail::format_double(*e.pr) : "") << '\n';
    entries.push_back(std::move(e));
  }
  detail::write_text(root / "sweep.csv", table.str());
  return entries;
}

}  // namespace sharp

#endif  // SHARP_HARNESS_EXPERIMENT_HPP
