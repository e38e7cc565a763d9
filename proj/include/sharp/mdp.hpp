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

#ifndef SHARP_MDP_HPP
#define SHARP_MDP_HPP

#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "sharp/core.hpp"

namespace sharp {

/// One full-horizon rollout (s_0, a_0, r_0, ..., s_{H-1}, a_{H-1}, r_{H-1}).
template <class State, class Action>
struct Trajectory {
  std::vector<State> states;
  std::vector<Action> actions;
  std::vector<double> rewards;

  [[nodiscard]] std::size_t length() const { return rewards.size(); }

  [[nodiscard]] bool well_formed(std::size_t horizon) const {
    return states.size() == actions.size() && actions.size() == rewards.size() && rewards.size() <= horizon;
  }
};

using TabularTrajectory = Trajectory<int, int>;

inline double discounted_return(std::span<const double> rewards, double gamma) {
  require(gamma > 0.0 && gamma < 1.0, "discounted_return: gamma must lie in (0,1)");
  double total = 0.0;
  double discount = 1.0;
  for (double r : rewards) {
    total += discount * r;
    discount *= gamma;
  }
  return total;
}

template <class S, class A>
double discounted_return(const Trajectory<S, A>& traj, double gamma) {
  return discounted_return(std::span<const double>(traj.rewards), gamma);
}

/// Psi_h = sum_{t >= h} gamma^t r_t. The exponent is the absolute time t.
inline double reward_to_go(std::span<const double> rewards, double gamma, std::size_t h) {
  require(gamma > 0.0 && gamma < 1.0, "reward_to_go: gamma must lie in (0,1)");
  require(h < rewards.size(), "reward_to_go: index out of range");
  double total = 0.0;
  double discount = 1.0;
  for (std::size_t t = 0; t < rewards.size(); ++t) {
    if (t >= h) total += discount * rewards[t];
    discount *= gamma;
  }
  return total;
}

template <class S, class A>
double reward_to_go(const Trajectory<S, A>& traj, double gamma, std::size_t h) {
  return reward_to_go(std::span<const double>(traj.rewards), gamma, h);
}

/// All Psi_h at once, by a backward accumulation.
inline std::vector<double> rewards_to_go(std::span<const double> rewards, double gamma) {
  require(gamma > 0.0 && gamma < 1.0, "rewards_to_go: gamma must lie in (0,1)");
  std::vector<double> psi(rewards.size());
  std::vector<double> discount(rewards.size());
  double d = 1.0;
  for (std::size_t t = 0; t < rewards.size(); ++t) {
    discount[t] = d;
    d *= gamma;
  }
  double acc = 0.0;
  for (std::size_t t = rewards.size(); t-- > 0;) {
    acc += discount[t] * rewards[t];
    psi[t] = acc;
  }
  return psi;
}

/// Inverse-CDF draw from a probability vector.
inline int sample_categorical(std::span<const double> probs, Rng& rng) {
  const double u = uniform01(rng);
  double cdf = 0.0;
  int last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    cdf += probs[i];
    last_positive = static_cast<int>(i);
    if (u < cdf) return static_cast<int>(i);
  }
  return last_positive;
}

/// Finite MDP with tabular transition, reward and start distributions.
/// Layout: transition(s, a, s') = P(s'|s,a), reward(s, a) = r(s,a).
class TabularMdp {
 public:
  using State = int;
  using Action = int;

  TabularMdp(int num_states, int num_actions, std::vector<double> transition, std::vector<double> reward,
             std::vector<double> initial_dist, double gamma, int horizon, double reward_bound = 0.0)
      : num_states_(num_states),
        num_actions_(num_actions),
        transition_(std::move(transition)),
        reward_(std::move(reward)),
        initial_dist_(std::move(initial_dist)),
        gamma_(gamma),
        horizon_(horizon) {
    require(num_states > 0 && num_actions > 0, "TabularMdp: state and action counts must be positive");
    require(gamma > 0.0 && gamma < 1.0, "TabularMdp: gamma must lie in (0,1)");
    require(horizon > 0, "TabularMdp: horizon must be positive");
    const auto ns = static_cast<std::size_t>(num_states);
    const auto na = static_cast<std::size_t>(num_actions);
    require(transition_.size() == ns * na * ns, "TabularMdp: transition tensor has wrong size");
    require(reward_.size() == ns * na, "TabularMdp: reward matrix has wrong size");
    require(initial_dist_.size() == ns, "TabularMdp: initial distribution has wrong size");
    for (std::size_t s = 0; s < ns; ++s) {
      for (std::size_t a = 0; a < na; ++a) {
        double row = 0.0;
        for (std::size_t s2 = 0; s2 < ns; ++s2) {
          const double p = transition_[(s * na + a) * ns + s2];
          require(p >= 0.0, "TabularMdp: negative transition probability");
          row += p;
        }
        require(std::abs(row - 1.0) <= 1e-12, "TabularMdp: transition row does not sum to 1");
      }
    }
    double total = 0.0;
    for (double p : initial_dist_) {
      require(p >= 0.0, "TabularMdp: negative initial probability");
      total += p;
    }
    require(std::abs(total - 1.0) <= 1e-12, "TabularMdp: initial distribution does not sum to 1");
    double max_abs = 0.0;
    for (double r : reward_) {
      require(std::isfinite(r), "TabularMdp: non-finite reward");
      max_abs = std::max(max_abs, std::abs(r));
    }
    reward_bound_ = reward_bound > 0.0 ? reward_bound : std::max(max_abs, 1e-12);
    require(max_abs <= reward_bound_, "TabularMdp: reward exceeds declared bound R0");
  }

  [[nodiscard]] int num_states() const { return num_states_; }
  [[nodiscard]] int num_actions() const { return num_actions_; }
  [[nodiscard]] double gamma() const { return gamma_; }
  [[nodiscard]] int horizon() const { return horizon_; }
  [[nodiscard]] double reward_bound() const { return reward_bound_; }

  [[nodiscard]] double transition(int s, int a, int s2) const {
    return transition_[(index(s, a)) * static_cast<std::size_t>(num_states_) + static_cast<std::size_t>(s2)];
  }
  [[nodiscard]] std::span<const double> transition_row(int s, int a) const {
    return {transition_.data() + index(s, a) * static_cast<std::size_t>(num_states_),
            static_cast<std::size_t>(num_states_)};
  }
  [[nodiscard]] double reward(int s, int a) const { return reward_[index(s, a)]; }
  [[nodiscard]] std::span<const double> initial_dist() const { return initial_dist_; }

  [[nodiscard]] bool valid_state(int s) const { return s >= 0 && s < num_states_; }
  [[nodiscard]] bool valid_action(int a) const { return a >= 0 && a < num_actions_; }

  State initial_state(Rng& rng) const { return sample_categorical(initial_dist_, rng); }

  std::pair<State, double> step(State s, Action a, Rng& rng) const {
    require(valid_state(s) && valid_action(a), "TabularMdp::step: invalid state or action");
    return {sample_categorical(transition_row(s, a), rng), reward(s, a)};
  }

  [[nodiscard]] double reward_of(State s, Action a) const { return reward(s, a); }

  /// One-hot encoding, used as regression features by the linear baseline.
  [[nodiscard]] Eigen::VectorXd observation(State s) const {
    Eigen::VectorXd o = Eigen::VectorXd::Zero(num_states_);
    o[s] = 1.0;
    return o;
  }

  /// Same MDP with a different horizon.
  [[nodiscard]] TabularMdp with_horizon(int horizon) const {
    return {num_states_, num_actions_, transition_, reward_, initial_dist_, gamma_, horizon, reward_bound_};
  }

  [[nodiscard]] TabularMdp with_rewards(std::vector<double> reward) const {
    return {num_states_, num_actions_, transition_, std::move(reward), initial_dist_, gamma_, horizon_, 0.0};
  }

 private:
  [[nodiscard]] std::size_t index(int s, int a) const {
    return static_cast<std::size_t>(s) * static_cast<std::size_t>(num_actions_) + static_cast<std::size_t>(a);
  }

  int num_states_;
  int num_actions_;
  std::vector<double> transition_;
  std::vector<double> reward_;
  std::vector<double> initial_dist_;
  double gamma_;
  int horizon_;
  double reward_bound_ = 0.0;
};

/// Parses the structured-text (JSON) MDP description. Keys: num_states,
/// num_actions, gamma, horizon, rho, rewards[s][a], transitions[s][a][s'],
/// and optionally reward_bound.
inline TabularMdp tabular_mdp_from_json(const nlohmann::json& j) {
  static const char* known[] = {"num_states", "num_actions", "gamma", "horizon",
                                "rho",        "rewards",     "transitions", "reward_bound"};
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    require(ok, "tabular MDP file: unknown key '" + key + "'");
  }
  try {
    const int ns = j.at("num_states").get<int>();
    const int na = j.at("num_actions").get<int>();
    require(ns > 0 && na > 0, "tabular MDP file: state and action counts must be positive");
    const auto rewards = j.at("rewards").get<std::vector<std::vector<double>>>();
    const auto transitions = j.at("transitions").get<std::vector<std::vector<std::vector<double>>>>();
    require(rewards.size() == static_cast<std::size_t>(ns), "tabular MDP file: rewards must have num_states rows");
    require(transitions.size() == static_cast<std::size_t>(ns),
            "tabular MDP file: transitions must have num_states entries");
    std::vector<double> r;
    std::vector<double> p;
    for (int s = 0; s < ns; ++s) {
      require(rewards[s].size() == static_cast<std::size_t>(na), "tabular MDP file: rewards row has wrong length");
      require(transitions[s].size() == static_cast<std::size_t>(na),
              "tabular MDP file: transitions[s] has wrong length");
      r.insert(r.end(), rewards[s].begin(), rewards[s].end());
      for (int a = 0; a < na; ++a) {
        require(transitions[s][a].size() == static_cast<std::size_t>(ns),
                "tabular MDP file: transitions[s][a] has wrong length");
        p.insert(p.end(), transitions[s][a].begin(), transitions[s][a].end());
      }
    }
    return {ns, na, std::move(p), std::move(r), j.at("rho").get<std::vector<double>>(), j.at("gamma").get<double>(),
            j.at("horizon").get<int>(), j.value("reward_bound", 0.0)};
  } catch (const nlohmann::json::exception& e) {
    throw invalid_argument(std::string("tabular MDP file: ") + e.what());
  }
}

inline TabularMdp load_tabular_mdp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_argument("cannot open tabular MDP file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw invalid_argument("tabular MDP file " + path + ": " + e.what());
  }
  return tabular_mdp_from_json(j);
}

inline nlohmann::json to_json(const TabularMdp& mdp) {
  nlohmann::json j;
  j["num_states"] = mdp.num_states();
  j["num_actions"] = mdp.num_actions();
  j["gamma"] = mdp.gamma();
  j["horizon"] = mdp.horizon();
  j["reward_bound"] = mdp.reward_bound();
  j["rho"] = std::vector<double>(mdp.initial_dist().begin(), mdp.initial_dist().end());
  auto& rewards = j["rewards"] = nlohmann::json::array();
  auto& transitions = j["transitions"] = nlohmann::json::array();
  for (int s = 0; s < mdp.num_states(); ++s) {
    nlohmann::json rrow = nlohmann::json::array();
    nlohmann::json trow = nlohmann::json::array();
    for (int a = 0; a < mdp.num_actions(); ++a) {
      rrow.push_back(mdp.reward(s, a));
      auto row = mdp.transition_row(s, a);
      trow.push_back(std::vector<double>(row.begin(), row.end()));
    }
    rewards.push_back(rrow);
    transitions.push_back(trow);
  }
  return j;
}

/// Draws one full-horizon trajectory. The terminal transition out of
/// s_{H-1} is not sampled; it integrates to one in p(tau).
template <class Env, class Policy>
Trajectory<typename Env::State, typename Env::Action> sample_trajectory(const Env& env, const Policy& policy,
                                                                        int horizon, Rng& rng) {
  require(horizon >= 1, "sample_trajectory: horizon must be at least 1");
  require(policy.compatible_with(env), "sample_trajectory: policy dimensions do not match environment");
  Trajectory<typename Env::State, typename Env::Action> traj;
  const auto h_count = static_cast<std::size_t>(horizon);
  traj.states.reserve(h_count);
  traj.actions.reserve(h_count);
  traj.rewards.reserve(h_count);
  auto state = env.initial_state(rng);
  for (int h = 0; h < horizon; ++h) {
    auto action = policy.sample_action(state, rng);
    if (h + 1 < horizon) {
      auto [next, reward] = env.step(state, action, rng);
      traj.rewards.push_back(reward);
      traj.states.push_back(std::move(state));
      traj.actions.push_back(std::move(action));
      state = std::move(next);
    } else {
      traj.rewards.push_back(env.reward_of(state, action));
      traj.states.push_back(std::move(state));
      traj.actions.push_back(std::move(action));
    }
  }
  return traj;
}

struct WeightedTrajectory {
  TabularTrajectory trajectory;
  double probability = 0.0;
};

inline constexpr std::uint64_t default_enumeration_cap = 10'000'000;

/// (|S||A|)^H, saturating at UINT64_MAX.
inline std::uint64_t trajectory_space_size(const TabularMdp& mdp, int horizon) {
  const std::uint64_t base = static_cast<std::uint64_t>(mdp.num_states()) * static_cast<std::uint64_t>(mdp.num_actions());
  std::uint64_t n = 1;
  for (int h = 0; h < horizon; ++h) {
    if (n > std::numeric_limits<std::uint64_t>::max() / base) return std::numeric_limits<std::uint64_t>::max();
    n *= base;
  }
  return n;
}

/// Every trajectory of positive probability under `policy`, with p(tau).
/// `policy.probabilities(s)` must return pi(.|s).
template <class Policy>
std::vector<WeightedTrajectory> enumerate_trajectories(const TabularMdp& mdp, const Policy& policy, int horizon,
                                                       std::uint64_t cap = default_enumeration_cap) {
  require(horizon >= 1, "enumerate_trajectories: horizon must be at least 1");
  require(policy.compatible_with(mdp), "enumerate_trajectories: policy dimensions do not match MDP");
  const std::uint64_t count = trajectory_space_size(mdp, horizon);
  if (count > cap) {
    throw resource_limit_error("enumerate_trajectories: " + std::to_string(count) +
                               " candidate trajectories exceed the cap of " + std::to_string(cap));
  }
  std::vector<std::vector<double>> pi(static_cast<std::size_t>(mdp.num_states()));
  for (int s = 0; s < mdp.num_states(); ++s) {
    const auto p = policy.probabilities(s);
    pi[static_cast<std::size_t>(s)].assign(p.begin(), p.end());
  }
  std::vector<WeightedTrajectory> out;
  TabularTrajectory current;
  current.states.reserve(static_cast<std::size_t>(horizon));
  current.actions.reserve(static_cast<std::size_t>(horizon));
  current.rewards.reserve(static_cast<std::size_t>(horizon));

  auto expand = [&](auto&& self, int s, double prob) -> void {
    for (int a = 0; a < mdp.num_actions(); ++a) {
      const double pa = prob * pi[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
      if (pa <= 0.0) continue;
      current.states.push_back(s);
      current.actions.push_back(a);
      current.rewards.push_back(mdp.reward(s, a));
      if (static_cast<int>(current.length()) == horizon) {
        out.push_back({current, pa});
      } else {
        for (int s2 = 0; s2 < mdp.num_states(); ++s2) {
          const double ps = pa * mdp.transition(s, a, s2);
          if (ps > 0.0) self(self, s2, ps);
        }
      }
      current.states.pop_back();
      current.actions.pop_back();
      current.rewards.pop_back();
    }
  };
  for (int s = 0; s < mdp.num_states(); ++s) {
    const double p0 = mdp.initial_dist()[static_cast<std::size_t>(s)];
    if (p0 > 0.0) expand(expand, s, p0);
  }
  return out;
}

}  // namespace sharp

#endif  // SHARP_MDP_HPP
