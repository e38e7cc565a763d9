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

#ifndef SHARP_POLICY_HPP
#define SHARP_POLICY_HPP

#include <cmath>
#include <concepts>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sharp/autodiff.hpp"
#include "sharp/core.hpp"
#include "sharp/environments.hpp"
#include "sharp/mdp.hpp"

namespace sharp {

/// Assumption-style regularity constants: ||grad log pi|| <= G,
/// ||hess log pi|| <= L, |r| <= R0.
struct RegularityConstants {
  double G = 0.0;
  double L = 0.0;
  double R0 = 0.0;

  RegularityConstants(double g, double l, double r0) : G(g), L(l), R0(r0) {
    require(G > 0.0 && L > 0.0 && R0 > 0.0, "RegularityConstants: G, L and R0 must be strictly positive");
  }
};

template <class P, class Env>
concept PolicyFor = requires(const P& p, const typename Env::State& s, const typename Env::Action& a, Rng& rng,
                             const ParamVector& v, const Env& env) {
  { p.dim() } -> std::convertible_to<Eigen::Index>;
  { p.params() } -> std::convertible_to<const ParamVector&>;
  { p.with_params(v) } -> std::same_as<P>;
  { p.compatible_with(env) } -> std::same_as<bool>;
  { p.sample_action(s, rng) } -> std::same_as<typename Env::Action>;
  { p.log_prob(s, a) } -> std::same_as<double>;
  { p.score(s, a) } -> std::same_as<ParamVector>;
  { p.hvp_log_prob(s, a, v) } -> std::same_as<ParamVector>;
};

/// Tabular softmax policy pi(a|s) = exp(theta[s,a]) / sum_b exp(theta[s,b]).
/// Layout: theta[s * num_actions + a].
class SoftmaxTabular {
 public:
  using State = int;
  using Action = int;

  SoftmaxTabular(int num_states, int num_actions)
      : SoftmaxTabular(num_states, num_actions, ParamVector::Zero(num_states * num_actions)) {}

  SoftmaxTabular(int num_states, int num_actions, ParamVector logits)
      : num_states_(num_states), num_actions_(num_actions), theta_(std::move(logits)) {
    require(num_states > 0 && num_actions > 0, "SoftmaxTabular: state and action counts must be positive");
    require(theta_.size() == static_cast<Eigen::Index>(num_states) * num_actions,
            "SoftmaxTabular: logits have wrong length");
    check_finite(theta_, "SoftmaxTabular parameters");
  }

  static SoftmaxTabular for_mdp(const TabularMdp& mdp) { return {mdp.num_states(), mdp.num_actions()}; }

  [[nodiscard]] Eigen::Index dim() const { return theta_.size(); }
  [[nodiscard]] const ParamVector& params() const { return theta_; }
  [[nodiscard]] SoftmaxTabular with_params(const ParamVector& theta) const {
    return {num_states_, num_actions_, theta};
  }
  [[nodiscard]] int num_states() const { return num_states_; }
  [[nodiscard]] int num_actions() const { return num_actions_; }

  [[nodiscard]] bool compatible_with(const TabularMdp& mdp) const {
    return mdp.num_states() == num_states_ && mdp.num_actions() == num_actions_;
  }
  [[nodiscard]] bool compatible_with(const ContinuousEnv&) const { return false; }

  [[nodiscard]] std::vector<double> probabilities(State s) const {
    check_state(s);
    const auto block = theta_.segment(offset(s), num_actions_);
    const double m = block.maxCoeff();
    std::vector<double> p(static_cast<std::size_t>(num_actions_));
    double z = 0.0;
    for (int a = 0; a < num_actions_; ++a) z += (p[static_cast<std::size_t>(a)] = std::exp(block[a] - m));
    for (double& x : p) x /= z;
    return p;
  }

  Action sample_action(State s, Rng& rng) const { return sample_categorical(probabilities(s), rng); }

  [[nodiscard]] double log_prob(State s, Action a) const {
    check_pair(s, a);
    const auto block = theta_.segment(offset(s), num_actions_);
    const double m = block.maxCoeff();
    return block[a] - m - std::log((block.array() - m).exp().sum());
  }

  /// 1_a - pi(.|s) on the block of state s, zero elsewhere.
  [[nodiscard]] ParamVector score(State s, Action a) const {
    check_pair(s, a);
    ParamVector g = ParamVector::Zero(dim());
    const auto p = probabilities(s);
    for (int b = 0; b < num_actions_; ++b) g[offset(s) + b] = -p[static_cast<std::size_t>(b)];
    g[offset(s) + a] += 1.0;
    return g;
  }

  /// hess log pi(a|s) v = -(diag(pi) - pi pi^T) v_s, independent of a.
  [[nodiscard]] ParamVector hvp_log_prob(State s, Action a, const ParamVector& v) const {
    check_pair(s, a);
    require(v.size() == dim(), "hvp_log_prob: direction length does not match parameters");
    const auto p = probabilities(s);
    const auto vs = v.segment(offset(s), num_actions_);
    double pv = 0.0;
    for (int b = 0; b < num_actions_; ++b) pv += p[static_cast<std::size_t>(b)] * vs[b];
    ParamVector out = ParamVector::Zero(dim());
    for (int b = 0; b < num_actions_; ++b) out[offset(s) + b] = -p[static_cast<std::size_t>(b)] * (vs[b] - pv);
    return out;
  }

  template <class Scalar>
  typename ad::Tape<Scalar>::Var log_prob_expr(ad::Tape<Scalar>& tape,
                                               std::span<const typename ad::Tape<Scalar>::Var> params, State s,
                                               Action a) const {
    check_pair(s, a);
    using Var = typename ad::Tape<Scalar>::Var;
    const Eigen::Index o = offset(s);
    double m = ad::primal(params[static_cast<std::size_t>(o)].value());
    for (int b = 1; b < num_actions_; ++b) m = std::max(m, ad::primal(params[static_cast<std::size_t>(o + b)].value()));
    std::vector<Var> terms;
    terms.reserve(static_cast<std::size_t>(num_actions_));
    for (int b = 0; b < num_actions_; ++b) terms.push_back(exp(params[static_cast<std::size_t>(o + b)] - m));
    return params[static_cast<std::size_t>(o + a)] - (log(tape.sum(terms)) + m);
  }

  /// G = sqrt(2) and L = 1/2 hold for every state-action pair.
  [[nodiscard]] static RegularityConstants regularity(double reward_bound) {
    return {std::numbers::sqrt2, 0.5, reward_bound};
  }

 private:
  [[nodiscard]] Eigen::Index offset(State s) const { return static_cast<Eigen::Index>(s) * num_actions_; }
  void check_state(State s) const {
    require(s >= 0 && s < num_states_, "SoftmaxTabular: invalid state " + std::to_string(s));
  }
  void check_pair(State s, Action a) const {
    check_state(s);
    require(a >= 0 && a < num_actions_, "SoftmaxTabular: invalid action " + std::to_string(a));
  }

  int num_states_;
  int num_actions_;
  ParamVector theta_;
};

namespace detail {

// Shared pieces of the diagonal Gaussian policies: the density given a mean,
// and tape-driven score/HVP from a `log_prob_expr` member.
template <class Derived>
class GaussianBase {
 public:
  using State = Eigen::VectorXd;
  using Action = Eigen::VectorXd;

  [[nodiscard]] int state_dim() const { return state_dim_; }
  [[nodiscard]] int action_dim() const { return action_dim_; }
  [[nodiscard]] Eigen::Index dim() const { return theta_.size(); }
  [[nodiscard]] const ParamVector& params() const { return theta_; }

  [[nodiscard]] bool compatible_with(const ContinuousEnv& env) const {
    return env.state_dim() == state_dim_ && env.action_dim() == action_dim_;
  }
  [[nodiscard]] bool compatible_with(const TabularMdp&) const { return false; }

  /// Per-dimension log standard deviations, the last action_dim entries.
  [[nodiscard]] Eigen::VectorXd log_std() const { return theta_.tail(action_dim_); }

  Action sample_action(const State& s, Rng& rng) const {
    check_state(s);
    const Eigen::VectorXd mu = self().mean(s);
    const Eigen::VectorXd sd = log_std().array().exp();
    std::normal_distribution<double> normal(0.0, 1.0);
    Action a(action_dim_);
    for (int i = 0; i < action_dim_; ++i) a[i] = mu[i] + sd[i] * normal(rng);
    return a;
  }

  [[nodiscard]] double log_prob(const State& s, const Action& a) const {
    check_pair(s, a);
    const Eigen::VectorXd mu = self().mean(s);
    const Eigen::VectorXd ls = log_std();
    double lp = 0.0;
    for (int i = 0; i < action_dim_; ++i) {
      const double z = (a[i] - mu[i]) * std::exp(-ls[i]);
      lp += -0.5 * z * z - ls[i] - 0.5 * std::log(2.0 * std::numbers::pi);
    }
    return lp;
  }

  [[nodiscard]] ParamVector score(const State& s, const Action& a) const {
    check_pair(s, a);
    return ad::grad([&](auto& tape, auto params) { return self().log_prob_expr(tape, params, s, a); }, theta_);
  }

  [[nodiscard]] ParamVector hvp_log_prob(const State& s, const Action& a, const ParamVector& v) const {
    check_pair(s, a);
    require(v.size() == dim(), "hvp_log_prob: direction length does not match parameters");
    return ad::hvp([&](auto& tape, auto params) { return self().log_prob_expr(tape, params, s, a); }, theta_, v);
  }

 protected:
  GaussianBase(int state_dim, int action_dim, ParamVector theta)
      : state_dim_(state_dim), action_dim_(action_dim), theta_(std::move(theta)) {
    require(state_dim > 0 && action_dim > 0, "Gaussian policy: dimensions must be positive");
    check_finite(theta_, "Gaussian policy parameters");
  }

  // Gaussian log-density of `a` given mean variables and the trailing
  // log-std parameters.
  template <class Scalar>
  typename ad::Tape<Scalar>::Var gaussian_log_density(
      ad::Tape<Scalar>& tape, std::span<const typename ad::Tape<Scalar>::Var> params,
      const std::vector<typename ad::Tape<Scalar>::Var>& mean, const Action& a) const {
    using Var = typename ad::Tape<Scalar>::Var;
    const std::size_t ls_offset = params.size() - static_cast<std::size_t>(action_dim_);
    std::vector<Var> terms;
    terms.reserve(static_cast<std::size_t>(action_dim_));
    for (int i = 0; i < action_dim_; ++i) {
      const Var ls = params[ls_offset + static_cast<std::size_t>(i)];
      const Var z = (tape.constant(a[i]) - mean[static_cast<std::size_t>(i)]) * exp(-ls);
      terms.push_back(-0.5 * square(z) - ls - 0.5 * std::log(2.0 * std::numbers::pi));
    }
    return tape.sum(terms);
  }

  void check_state(const State& s) const {
    require(s.size() == state_dim_ && s.allFinite(), "Gaussian policy: invalid state");
  }
  void check_pair(const State& s, const Action& a) const {
    check_state(s);
    require(a.size() == action_dim_ && a.allFinite(), "Gaussian policy: invalid action");
  }

  int state_dim_;
  int action_dim_;
  ParamVector theta_;

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
};

}  // namespace detail

/// Diagonal Gaussian with mean W s + b and a free log-std vector.
/// Layout: W row-major (action_dim x state_dim), then b, then log_std.
class GaussianLinear : public detail::GaussianBase<GaussianLinear> {
 public:
  GaussianLinear(int state_dim, int action_dim, double log_std_init = 0.0)
      : GaussianLinear(state_dim, action_dim, initial_params(state_dim, action_dim, log_std_init)) {}

  GaussianLinear(int state_dim, int action_dim, ParamVector theta)
      : GaussianBase(state_dim, action_dim, std::move(theta)) {
    require(theta_.size() == param_count(state_dim, action_dim), "GaussianLinear: parameter vector has wrong length");
  }

  static Eigen::Index param_count(int state_dim, int action_dim) {
    return static_cast<Eigen::Index>(action_dim) * state_dim + 2 * action_dim;
  }

  [[nodiscard]] GaussianLinear with_params(const ParamVector& theta) const {
    return {state_dim_, action_dim_, theta};
  }

  [[nodiscard]] Eigen::VectorXd mean(const State& s) const {
    check_state(s);
    const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> w(
        theta_.data(), action_dim_, state_dim_);
    return w * s + theta_.segment(static_cast<Eigen::Index>(action_dim_) * state_dim_, action_dim_);
  }

  template <class Scalar>
  typename ad::Tape<Scalar>::Var log_prob_expr(ad::Tape<Scalar>& tape,
                                               std::span<const typename ad::Tape<Scalar>::Var> params,
                                               const State& s, const Action& a) const {
    using Var = typename ad::Tape<Scalar>::Var;
    const auto sd = static_cast<std::size_t>(state_dim_);
    std::vector<Var> x;
    x.reserve(sd);
    for (int j = 0; j < state_dim_; ++j) x.push_back(tape.constant(s[j]));
    std::vector<Var> mean;
    for (int i = 0; i < action_dim_; ++i) {
      const std::size_t row = static_cast<std::size_t>(i) * sd;
      const Var bias = params[static_cast<std::size_t>(action_dim_) * sd + static_cast<std::size_t>(i)];
      mean.push_back(tape.dot(params.subspan(row, sd), x, bias));
    }
    return gaussian_log_density(tape, params, mean, a);
  }

 private:
  static ParamVector initial_params(int state_dim, int action_dim, double log_std_init) {
    ParamVector theta = ParamVector::Zero(param_count(state_dim, action_dim));
    theta.tail(action_dim).setConstant(log_std_init);
    return theta;
  }
};

/// Diagonal Gaussian whose mean is a tanh MLP of the state.
/// Layout: for each layer (hidden..., output) W row-major (out x in) then b;
/// finally log_std (action_dim).
class GaussianMlp : public detail::GaussianBase<GaussianMlp> {
 public:
  GaussianMlp(int state_dim, int action_dim, std::vector<int> hidden, double log_std_init, std::uint64_t seed)
      : GaussianMlp(state_dim, action_dim, hidden, initial_params(state_dim, action_dim, hidden, log_std_init, seed)) {}

  GaussianMlp(int state_dim, int action_dim, std::vector<int> hidden, ParamVector theta)
      : GaussianBase(state_dim, action_dim, std::move(theta)), hidden_(std::move(hidden)) {
    for (int w : hidden_) require(w > 0, "GaussianMlp: hidden widths must be positive");
    require(theta_.size() == param_count(state_dim, action_dim, hidden_), "GaussianMlp: parameter vector has wrong length");
  }

  static Eigen::Index param_count(int state_dim, int action_dim, const std::vector<int>& hidden) {
    Eigen::Index n = 0;
    int in = state_dim;
    for (int w : hidden) {
      n += static_cast<Eigen::Index>(w) * in + w;
      in = w;
    }
    return n + static_cast<Eigen::Index>(action_dim) * in + action_dim + action_dim;
  }

  [[nodiscard]] const std::vector<int>& hidden() const { return hidden_; }

  [[nodiscard]] GaussianMlp with_params(const ParamVector& theta) const {
    return {state_dim_, action_dim_, hidden_, theta};
  }

  [[nodiscard]] Eigen::VectorXd mean(const State& s) const {
    check_state(s);
    Eigen::VectorXd x = s;
    Eigen::Index o = 0;
    auto layer = [&](int out) {
      const auto in = static_cast<int>(x.size());
      const Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> w(
          theta_.data() + o, out, in);
      o += static_cast<Eigen::Index>(out) * in;
      Eigen::VectorXd y = w * x + theta_.segment(o, out);
      o += out;
      return y;
    };
    for (int w : hidden_) x = layer(w).array().tanh().matrix();
    return layer(action_dim_);
  }

  template <class Scalar>
  typename ad::Tape<Scalar>::Var log_prob_expr(ad::Tape<Scalar>& tape,
                                               std::span<const typename ad::Tape<Scalar>::Var> params,
                                               const State& s, const Action& a) const {
    using Var = typename ad::Tape<Scalar>::Var;
    std::vector<Var> x;
    for (int j = 0; j < state_dim_; ++j) x.push_back(tape.constant(s[j]));
    std::size_t o = 0;
    auto layer = [&](int out, bool squash) {
      const std::size_t in = x.size();
      std::vector<Var> y;
      y.reserve(static_cast<std::size_t>(out));
      const std::size_t bias_offset = o + static_cast<std::size_t>(out) * in;
      for (int i = 0; i < out; ++i) {
        Var z = tape.dot(params.subspan(o + static_cast<std::size_t>(i) * in, in), x,
                         params[bias_offset + static_cast<std::size_t>(i)]);
        y.push_back(squash ? tanh(z) : z);
      }
      o = bias_offset + static_cast<std::size_t>(out);
      return y;
    };
    for (int w : hidden_) x = layer(w, true);
    return gaussian_log_density(tape, params, layer(action_dim_, false), a);
  }

 private:
  static ParamVector initial_params(int state_dim, int action_dim, const std::vector<int>& hidden, double log_std_init,
                                    std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ParamVector theta = ParamVector::Zero(param_count(state_dim, action_dim, hidden));
    Eigen::Index o = 0;
    int in = state_dim;
    auto fill = [&](int out, double gain) {
      const double scale = gain / std::sqrt(static_cast<double>(in));
      for (Eigen::Index k = 0; k < static_cast<Eigen::Index>(out) * in; ++k) theta[o + k] = scale * normal(rng);
      o += static_cast<Eigen::Index>(out) * in + out;  // biases stay zero
      in = out;
    };
    for (int w : hidden) fill(w, 1.0);
    fill(action_dim, 0.1);
    theta.tail(action_dim).setConstant(log_std_init);
    return theta;
  }

  std::vector<int> hidden_;
};

}  // namespace sharp

#endif  // SHARP_POLICY_HPP
