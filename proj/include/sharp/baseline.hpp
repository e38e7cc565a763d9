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

#ifndef SHARP_BASELINE_HPP
#define SHARP_BASELINE_HPP

#include <Eigen/Dense>

#include <iostream>
#include <span>
#include <vector>

#include "sharp/core.hpp"
#include "sharp/mdp.hpp"

namespace sharp {

/// Linear regression of reward-to-go on [obs, obs^2, h/H, (h/H)^2, (h/H)^3, 1].
class LinearBaseline {
 public:
  LinearBaseline() = default;
  explicit LinearBaseline(Eigen::VectorXd weights) : weights_(std::move(weights)) {}

  static Eigen::VectorXd features(const Eigen::VectorXd& obs, int h, int horizon) {
    const double x = static_cast<double>(h) / horizon;
    Eigen::VectorXd f(2 * obs.size() + 4);
    f << obs, obs.array().square().matrix(), x, x * x, x * x * x, 1.0;
    return f;
  }

  /// An unfitted baseline predicts zero.
  [[nodiscard]] bool fitted() const { return weights_.size() > 0; }
  [[nodiscard]] const Eigen::VectorXd& weights() const { return weights_; }

  [[nodiscard]] double predict(const Eigen::VectorXd& obs, int h, int horizon) const {
    if (!fitted()) return 0.0;
    require(weights_.size() == 2 * obs.size() + 4, "LinearBaseline: observation size does not match the fit");
    return weights_.dot(features(obs, h, horizon));
  }

 private:
  Eigen::VectorXd weights_;
};

inline constexpr double baseline_ridge = 1e-8;

/// Least-squares fit of Psi_h targets over every step of every trajectory.
/// Falls back to the zero baseline (with a warning) when the regularized
/// normal equations cannot be solved.
template <class Env, class S, class A>
LinearBaseline baseline_fit(const Env& env, std::span<const Trajectory<S, A>> trajectories, double gamma) {
  require(!trajectories.empty(), "baseline_fit: at least one trajectory is required");
  const int horizon = env.horizon();
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> targets;
  for (const auto& traj : trajectories) {
    const auto psi = rewards_to_go(traj.rewards, gamma);
    for (std::size_t h = 0; h < traj.length(); ++h) {
      rows.push_back(LinearBaseline::features(env.observation(traj.states[h]), static_cast<int>(h), horizon));
      targets.push_back(psi[h]);
    }
  }
  const Eigen::Index p = rows.front().size();
  Eigen::MatrixXd xtx = Eigen::MatrixXd::Zero(p, p);
  Eigen::VectorXd xty = Eigen::VectorXd::Zero(p);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    xtx.selfadjointView<Eigen::Lower>().rankUpdate(rows[i]);
    xty += targets[i] * rows[i];
  }
  xtx = xtx.selfadjointView<Eigen::Lower>();
  xtx.diagonal().array() += baseline_ridge;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(xtx);
  Eigen::VectorXd w;
  if (ldlt.info() == Eigen::Success && ldlt.isPositive()) w = ldlt.solve(xty);
  if (w.size() != p || !w.allFinite()) {
    std::cerr << "warning: baseline normal equations are singular; using zero baseline\n";
    return LinearBaseline(Eigen::VectorXd::Zero(p));
  }
  return LinearBaseline(std::move(w));
}

template <class Env, class S, class A>
std::vector<double> baseline_values(const LinearBaseline& baseline, const Env& env, const Trajectory<S, A>& traj) {
  std::vector<double> b(traj.length(), 0.0);
  for (std::size_t h = 0; h < traj.length(); ++h) {
    b[h] = baseline.predict(env.observation(traj.states[h]), static_cast<int>(h), env.horizon());
  }
  return b;
}

}  // namespace sharp

#endif  // SHARP_BASELINE_HPP
