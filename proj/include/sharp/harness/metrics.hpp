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

// Curve alignment and the PR score: the grid average of the lower end of a
// normal-approximation 90% interval on the mean return across runs.

#ifndef SHARP_HARNESS_METRICS_HPP
#define SHARP_HARNESS_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sharp/core.hpp"

namespace sharp {

inline constexpr double z90 = 1.645;

/// Return-vs-probe series of one run.
struct RunCurve {
  std::vector<double> probes;
  std::vector<double> returns;
};

/// Per-probe summary across runs.
struct ReturnCurve {
  std::vector<double> probes;
  std::vector<double> mean;
  std::vector<double> std;  // sample std, n - 1 denominator; 0 when n = 1
  std::vector<double> lci90;
  std::vector<double> uci90;
};

inline std::vector<double> uniform_grid(double start, double end, int size) {
  require(size >= 2, "uniform_grid: need at least two points");
  require(end >= start, "uniform_grid: end precedes start");
  std::vector<double> g(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) g[static_cast<std::size_t>(i)] = start + (end - start) * i / (size - 1);
  g.back() = end;
  return g;
}

/// Piecewise-linear interpolation of each run onto `grid`; values outside a
/// run's recorded range are held at its first or last record.
inline std::vector<std::vector<double>> interpolate_to_grid(const std::vector<RunCurve>& runs,
                                                            const std::vector<double>& grid) {
  require(!grid.empty(), "interpolate_to_grid: empty grid");
  std::vector<std::vector<double>> out;
  out.reserve(runs.size());
  for (std::size_t r = 0; r < runs.size(); ++r) {
    const auto& x = runs[r].probes;
    const auto& y = runs[r].returns;
    require(x.size() == y.size(), "interpolate_to_grid: probes and returns differ in length");
    require(x.size() >= 2, "interpolate_to_grid: run " + std::to_string(r) + " has fewer than two records");
    require(std::is_sorted(x.begin(), x.end()), "interpolate_to_grid: probes must be non-decreasing");
    if (x.back() < grid.front()) {
      throw invalid_argument("interpolate_to_grid: run " + std::to_string(r) + " ends at probe " +
                             std::to_string(x.back()) + ", before the grid starts");
    }
    std::vector<double> aligned(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double p = grid[i];
      if (p <= x.front()) {
        aligned[i] = y.front();
      } else if (p >= x.back()) {
        aligned[i] = y.back();
      } else {
        // first knot strictly greater than p; the segment starts one before
        const auto k = static_cast<std::size_t>(std::upper_bound(x.begin(), x.end(), p) - x.begin());
        const double x0 = x[k - 1];
        const double x1 = x[k];
        aligned[i] = p == x0 ? y[k - 1] : y[k - 1] + (y[k] - y[k - 1]) * (p - x0) / (x1 - x0);
      }
    }
    out.push_back(std::move(aligned));
  }
  return out;
}

inline ReturnCurve summarize(const std::vector<double>& grid, const std::vector<std::vector<double>>& aligned) {
  require(!aligned.empty(), "summarize: no runs");
  const double n = static_cast<double>(aligned.size());
  ReturnCurve c;
  c.probes = grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double mean = 0.0;
    for (const auto& run : aligned) {
      require(run.size() == grid.size(), "summarize: run length does not match the grid");
      mean += run[i];
    }
    mean /= n;
    double ss = 0.0;
    for (const auto& run : aligned) ss += (run[i] - mean) * (run[i] - mean);
    const double sd = aligned.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    const double half = z90 * sd / std::sqrt(n);
    c.mean.push_back(mean);
    c.std.push_back(sd);
    c.lci90.push_back(mean - half);
    c.uci90.push_back(mean + half);
  }
  return c;
}

/// PR = (1/|grid|) sum_t LCI(n, t) over runs already aligned on one grid.
inline double pr_metric(const std::vector<std::vector<double>>& aligned) {
  require(!aligned.empty() && !aligned.front().empty(), "pr_metric: empty curves");
  const ReturnCurve c = summarize(std::vector<double>(aligned.front().size(), 0.0), aligned);
  double total = 0.0;
  for (double v : c.lci90) total += v;
  return total / static_cast<double>(c.lci90.size());
}

}  // namespace sharp

#endif  // SHARP_HARNESS_METRICS_HPP
