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

// sharp_cli: run, verify, sweep and pr subcommands.
// Exit codes: 0 ok, 1 runtime failure, 2 config error, 3 verification failure.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "sharp/sharp.hpp"

namespace {

constexpr int exit_ok = 0;
constexpr int exit_runtime = 1;
constexpr int exit_config = 2;
constexpr int exit_verify = 3;

int cmd_run(const std::string& path) {
  const auto cfg = sharp::load_config(path);
  const auto s = sharp::run_experiment(cfg);
  std::printf("output_dir=%s\n", s.directory.string().c_str());
  std::printf("completed_runs=%zu\n", s.completed.size());
  std::printf("failed_runs=%zu\n", s.failed.size());
  for (const auto& [i, msg] : s.failed) std::printf("failed_run_%d=%s\n", i, msg.c_str());
  if (s.completed.empty()) return exit_runtime;
  std::printf("pr=%.17g\n", s.pr);
  std::printf("final_mean_return=%.17g\n", s.final_mean_return);
  return exit_ok;
}

int cmd_verify(const std::string& path) {
  const auto report = sharp::verify(sharp::load_config(path));
  std::cout << report.to_text();
  return report.passed() ? exit_ok : exit_verify;
}

int cmd_sweep(const std::string& path, const std::string& grid) {
  const auto cfg = sharp::load_config(path);
  const auto entries = sharp::sweep(cfg, sharp::read_file(grid));
  const sharp::SweepEntry* best = nullptr;
  for (const auto& e : entries) {
    if (e.pr && (best == nullptr || *e.pr > *best->pr)) best = &e;
  }
  std::printf("points=%zu\n", entries.size());
  if (best != nullptr) {
    std::printf("best_dir=%s\n", best->directory.string().c_str());
    std::printf("best_pr=%.17g\n", *best->pr);
    for (const auto& [k, v] : best->settings) std::printf("best.%s=%s\n", k.c_str(), v.c_str());
  }
  return best != nullptr ? exit_ok : exit_runtime;
}

int cmd_pr(const std::string& dir) {
  std::printf("pr=%.17g\n", sharp::pr_from_directory(dir));
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Policy-gradient experiments with Hessian-aided recursive momentum"};
  app.require_subcommand(1);

  std::string config;
  std::string grid;
  std::string dir;
  auto* run = app.add_subcommand("run", "run a seeded multi-run experiment");
  run->add_option("config", config, "experiment config")->required();
  auto* verify = app.add_subcommand("verify", "run the estimator/oracle check suite on a tabular config");
  verify->add_option("config", config, "experiment config")->required();
  auto* sweep = app.add_subcommand("sweep", "grid search over config keys");
  sweep->add_option("config", config, "base experiment config")->required();
  sweep->add_option("--grid", grid, "file of 'key = v1, v2, ...' lines")->required();
  auto* pr = app.add_subcommand("pr", "recompute PR from a results directory");
  pr->add_option("dir", dir, "directory written by run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (*run) return cmd_run(config);
    if (*verify) return cmd_verify(config);
    if (*sweep) return cmd_sweep(config, grid);
    if (*pr) return cmd_pr(dir);
  } catch (const sharp::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_runtime;
  }
  return exit_runtime;
}
