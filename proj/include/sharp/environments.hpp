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

#ifndef SHARP_ENVIRONMENTS_HPP
#define SHARP_ENVIRONMENTS_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "sharp/core.hpp"
#include "sharp/mdp.hpp"

namespace sharp {

/// Bundled 2-state, 2-action MDP used by the oracle checks. H = 3, gamma = 0.9.
inline TabularMdp two_state_mdp(int horizon = 3) {
  // transitions[s][a][s']
  std::vector<double> p = {
      0.9, 0.1,   // s0 a0
      0.2, 0.8,   // s0 a1
      0.7, 0.3,   // s1 a0
      0.05, 0.95  // s1 a1
  };
  std::vector<double> r = {1.0, -0.5,  // s0
                           0.2, 0.8};  // s1
  return {2, 2, std::move(p), std::move(r), {0.6, 0.4}, 0.9, horizon, 1.0};
}

/// Five-cell corridor. Action 0 moves left, action 1 moves right; with
/// probability `slip` the agent stays put. Every action in the rightmost
/// cell pays 1, everything else pays 0. Episodes start in cell 0.
inline TabularMdp gridworld5(int horizon = 10, double gamma = 0.95, double slip = 0.1) {
  constexpr int n = 5;
  std::vector<double> p(n * 2 * n, 0.0);
  std::vector<double> r(n * 2, 0.0);
  for (int s = 0; s < n; ++s) {
    const int left = std::max(s - 1, 0);
    const int right = std::min(s + 1, n - 1);
    p[(s * 2 + 0) * n + left] += 1.0 - slip;
    p[(s * 2 + 0) * n + s] += slip;
    p[(s * 2 + 1) * n + right] += 1.0 - slip;
    p[(s * 2 + 1) * n + s] += slip;
  }
  r[(n - 1) * 2 + 0] = 1.0;
  r[(n - 1) * 2 + 1] = 1.0;
  std::vector<double> rho(n, 0.0);
  rho[0] = 1.0;
  return {n, 2, std::move(p), std::move(r), std::move(rho), gamma, horizon, 1.0};
}

/// Small continuous-control tasks. States are the observation vectors the
/// policy consumes; actions are unclipped policy outputs (the dynamics clip
/// them). Rewards are clipped to [-R0, 0].
class ContinuousEnv {
 public:
  using State = Eigen::VectorXd;
  using Action = Eigen::VectorXd;
  using Parameters = std::map<std::string, double>;

  enum class Kind { point_mass, pendulum };

  /// Known names: "point_mass", "pendulum". Overrides must name existing
  /// parameters.
  static ContinuousEnv make(const std::string& name, const Parameters& overrides = {}) {
    ContinuousEnv env;
    if (name == "point_mass") {
      env.kind_ = Kind::point_mass;
      env.params_ = {{"dt", 0.1},        {"max_force", 1.0}, {"max_speed", 2.0}, {"bound", 2.0},
                     {"init_range", 1.0}, {"ctrl_cost", 0.01}, {"reward_bound", 10.0},
                     {"horizon", 30.0},   {"gamma", 0.99}};
    } else if (name == "pendulum") {
      env.kind_ = Kind::pendulum;
      env.params_ = {{"dt", 0.05},         {"g", 10.0},          {"mass", 1.0},   {"length", 1.0},
                     {"max_speed", 8.0},   {"max_torque", 2.0},  {"reward_bound", 16.3},
                     {"horizon", 100.0},   {"gamma", 0.99}};
    } else {
      throw invalid_argument("unknown continuous environment '" + name + "'");
    }
    for (const auto& [key, value] : overrides) {
      auto it = env.params_.find(key);
      require(it != env.params_.end(), "environment " + name + " has no parameter '" + key + "'");
      require(std::isfinite(value), "environment parameter '" + key + "' must be finite");
      it->second = value;
    }
    env.name_ = name;
    require(env.horizon() >= 1, "environment horizon must be at least 1");
    require(env.gamma() > 0.0 && env.gamma() < 1.0, "environment gamma must lie in (0,1)");
    require(env.reward_bound() > 0.0, "environment reward_bound must be positive");
    return env;
  }

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] int state_dim() const { return kind_ == Kind::point_mass ? 4 : 3; }
  [[nodiscard]] int action_dim() const { return kind_ == Kind::point_mass ? 2 : 1; }
  [[nodiscard]] int horizon() const { return static_cast<int>(param("horizon")); }
  [[nodiscard]] double gamma() const { return param("gamma"); }
  [[nodiscard]] double reward_bound() const { return param("reward_bound"); }
  [[nodiscard]] double param(const std::string& key) const { return params_.at(key); }
  [[nodiscard]] const Parameters& parameters() const { return params_; }

  State initial_state(Rng& rng) const {
    State s(state_dim());
    if (kind_ == Kind::point_mass) {
      const double range = param("init_range");
      s << range * (2.0 * uniform01(rng) - 1.0), range * (2.0 * uniform01(rng) - 1.0), 0.0, 0.0;
    } else {
      const double th = std::numbers::pi * (2.0 * uniform01(rng) - 1.0);
      const double thdot = 2.0 * uniform01(rng) - 1.0;
      s << std::cos(th), std::sin(th), thdot;
    }
    return s;
  }

  [[nodiscard]] double reward_of(const State& s, const Action& a) const {
    double cost = 0.0;
    if (kind_ == Kind::point_mass) {
      const Eigen::Vector2d u = clip_force(a);
      cost = s.head<2>().squaredNorm() + param("ctrl_cost") * u.squaredNorm();
    } else {
      const double th = std::atan2(s[1], s[0]);
      const double u = clip_torque(a);
      cost = th * th + 0.1 * s[2] * s[2] + 0.001 * u * u;
    }
    return std::clamp(-cost, -reward_bound(), 0.0);
  }

  std::pair<State, double> step(const State& s, const Action& a, Rng& /*rng*/) const {
    require(s.size() == state_dim() && a.size() == action_dim(), "ContinuousEnv::step: dimension mismatch");
    const double reward = reward_of(s, a);
    State next(state_dim());
    const double dt = param("dt");
    if (kind_ == Kind::point_mass) {
      const Eigen::Vector2d u = clip_force(a);
      const double vmax = param("max_speed");
      const double bound = param("bound");
      Eigen::Vector2d v = (s.segment<2>(2) + dt * u).cwiseMax(-vmax).cwiseMin(vmax);
      Eigen::Vector2d p = s.head<2>() + dt * v;
      for (int i = 0; i < 2; ++i) {
        if (std::abs(p[i]) > bound) {
          p[i] = std::clamp(p[i], -bound, bound);
          v[i] = 0.0;
        }
      }
      next << p, v;
    } else {
      const double th = std::atan2(s[1], s[0]);
      const double g = param("g");
      const double m = param("mass");
      const double l = param("length");
      const double u = clip_torque(a);
      double thdot = s[2] + (3.0 * g / (2.0 * l) * std::sin(th) + 3.0 / (m * l * l) * u) * dt;
      thdot = std::clamp(thdot, -param("max_speed"), param("max_speed"));
      const double th2 = th + thdot * dt;
      next << std::cos(th2), std::sin(th2), thdot;
    }
    return {next, reward};
  }

  [[nodiscard]] Eigen::VectorXd observation(const State& s) const { return s; }

 private:
  ContinuousEnv() = default;

  [[nodiscard]] Eigen::Vector2d clip_force(const Action& a) const {
    const double f = param("max_force");
    return Eigen::Vector2d(std::clamp(a[0], -f, f), std::clamp(a[1], -f, f));
  }
  [[nodiscard]] double clip_torque(const Action& a) const {
    const double t = param("max_torque");
    return std::clamp(a[0], -t, t);
  }

  Kind kind_ = Kind::point_mass;
  std::string name_;
  Parameters params_;
};

}  // namespace sharp

#endif  // SHARP_ENVIRONMENTS_HPP
