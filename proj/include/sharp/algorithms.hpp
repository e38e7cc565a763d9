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

// Policy-gradient optimizers. Everything maximizes J; the minimization forms
// of the STORM and checkpointed variance-reduction updates are sign-flipped
// at the parameter update.

#ifndef SHARP_ALGORITHMS_HPP
#define SHARP_ALGORITHMS_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sharp/baseline.hpp"
#include "sharp/core.hpp"
#include "sharp/estimators.hpp"
#include "sharp/mdp.hpp"

namespace sharp {

struct Schedule {
  double alpha = 1.0;
  double eta = 0.0;
};

/// eta_t = eta0 / t^{2/3}, alpha_t = min(1, alpha0 / t^{2/3}).
inline Schedule schedules(long t, double alpha0, double eta0) {
  require(t >= 1, "schedules: iteration index must be at least 1");
  const double decay = std::pow(static_cast<double>(t), 2.0 / 3.0);
  return {std::min(1.0, alpha0 / decay), eta0 / decay};
}

/// Ground truth attached to a run. Either member may be empty.
struct ExactOracle {
  std::function<double(const ParamVector&)> objective;
  std::function<ParamVector(const ParamVector&)> gradient;
};

/// One iteration of a run. `probes` counts state-action pairs.
struct RunRow {
  long t = 0;
  long trajectories = 0;
  long probes = 0;
  double return_value = 0.0;
  std::optional<double> eta;
  std::optional<double> alpha;
  std::optional<double> grad_norm_exact;
  std::optional<double> eps_norm_sq;
  std::optional<double> wall_ms;
};

struct RunRecord {
  std::vector<RunRow> rows;

  [[nodiscard]] long trajectories() const { return rows.empty() ? 0 : rows.back().trajectories; }
};

struct RunResult {
  ParamVector final_params;
  ParamVector returned_params;  // iterate chosen uniformly at random
  long returned_index = 0;
  RunRecord record;
};

namespace detail {

class RowRecorder {
 public:
  RowRecorder(const ExactOracle* oracle, int horizon, bool wall_time)
      : oracle_(oracle), horizon_(horizon), wall_time_(wall_time), start_(std::chrono::steady_clock::now()) {}

  void add_trajectories(long n) { trajectories_ += n; }
  [[nodiscard]] long trajectories() const { return trajectories_; }

  /// `estimate` is the algorithm's gradient estimate at `theta`;
  /// `sampled_return` is used when no exact objective is attached.
  RunRow row(long t, const ParamVector& theta, const ParamVector& estimate, double sampled_return,
             std::optional<double> eta, std::optional<double> alpha) const {
    RunRow r;
    r.t = t;
    r.trajectories = trajectories_;
    r.probes = trajectories_ * horizon_;
    r.eta = eta;
    r.alpha = alpha;
    r.return_value = (oracle_ && oracle_->objective) ? oracle_->objective(theta) : sampled_return;
    if (oracle_ && oracle_->gradient) {
      const ParamVector g = oracle_->gradient(theta);
      r.grad_norm_exact = g.norm();
      r.eps_norm_sq = (estimate - g).squaredNorm();
    }
    if (wall_time_) {
      r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }
    return r;
  }

 private:
  const ExactOracle* oracle_;
  int horizon_;
  bool wall_time_;
  long trajectories_ = 0;
  std::chrono::steady_clock::time_point start_;
};

inline long draw_index(long count, Rng& rng) {
  return std::uniform_int_distribution<long>(0, count - 1)(rng);
}

inline ParamVector normalized_step(const ParamVector& theta, const ParamVector& v, double eta) {
  const double n = v.norm();
  if (n == 0.0) return theta;  // 0/0 direction: hold position
  return theta + (eta / n) * v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// SHARP: Hessian-aided recursive momentum with normalized steps.

template <class Policy>
struct SharpState {
  Policy policy;           // at theta_curr
  ParamVector theta_prev;  // theta_{t-1}
  ParamVector v_prev;      // v_{t-1}
  long t = 1;
  double alpha0 = 1.0;
  double eta0 = 0.1;

  [[nodiscard]] const ParamVector& theta_curr() const { return policy.params(); }
};

template <class Policy>
struct SharpStep {
  SharpState<Policy> state;
  RunRow row;
};

/// Draws tau_0 under theta_0, sets v_0 = g(tau_0; theta_0) and
/// theta_1 = theta_0 + eta0 v_0 / ||v_0||. Returns the state at t = 1 and
/// the row describing iteration 0.
template <class Env, class Policy>
SharpStep<Policy> sharp_init(const Env& env, const Policy& policy_init, double alpha0, double eta0, Rng& rng,
                             detail::RowRecorder& recorder) {
  require(alpha0 > 0.0 && eta0 > 0.0, "sharp_init: alpha0 and eta0 must be positive");
  const auto tau0 = sample_trajectory(env, policy_init, env.horizon(), rng);
  recorder.add_trajectories(1);
  const ParamVector v0 = pg_estimate(tau0, policy_init, env.gamma());
  const ParamVector theta1 = check_finite(detail::normalized_step(policy_init.params(), v0, eta0), "theta_1");
  RunRow row = recorder.row(0, policy_init.params(), v0, discounted_return(tau0, env.gamma()), eta0, 1.0);
  return {SharpState<Policy>{policy_init.with_params(theta1), policy_init.params(), v0, 1, alpha0, eta0},
          std::move(row)};
}

template <class Env, class Policy>
SharpStep<Policy> sharp_init(const Env& env, const Policy& policy_init, double alpha0, double eta0, Rng& rng) {
  detail::RowRecorder recorder(nullptr, env.horizon(), false);
  return sharp_init(env, policy_init, alpha0, eta0, rng, recorder);
}

/// One SHARP iteration at t = state.t:
///   b ~ U(0,1), theta_b = b theta_t + (1-b) theta_{t-1},
///   tau_t ~ pi_{theta_t}, tau_b ~ pi_{theta_b},
///   v_t = (1-alpha_t)(v_{t-1} + B(tau_b; theta_b)(theta_t - theta_{t-1})) + alpha_t g(tau_t; theta_t),
///   theta_{t+1} = theta_t + eta_t v_t / ||v_t||.
/// Consumes exactly two trajectories. If v_t = 0 the iterate holds.
template <class Env, class Policy>
SharpStep<Policy> sharp_step(const SharpState<Policy>& state, const Env& env, Rng& rng,
                             detail::RowRecorder& recorder) {
  const auto [alpha, eta] = schedules(state.t, state.alpha0, state.eta0);
  const ParamVector& theta = state.theta_curr();
  const double b = uniform01(rng);
  const Policy at_b = state.policy.with_params(b * theta + (1.0 - b) * state.theta_prev);
  const auto tau = sample_trajectory(env, state.policy, env.horizon(), rng);
  const auto tau_b = sample_trajectory(env, at_b, env.horizon(), rng);
  recorder.add_trajectories(2);

  const ParamVector displacement = theta - state.theta_prev;
  const ParamVector correction = hessian_vector_estimate(tau_b, at_b, env.gamma(), displacement);
  const ParamVector v = (1.0 - alpha) * (state.v_prev + correction) + alpha * pg_estimate(tau, state.policy, env.gamma());
  check_finite(v, "sharp_step: v_t");
  const ParamVector next = check_finite(detail::normalized_step(theta, v, eta), "sharp_step: theta_{t+1}");

  RunRow row = recorder.row(state.t, theta, v, discounted_return(tau, env.gamma()), eta, alpha);
  return {SharpState<Policy>{state.policy.with_params(next), theta, v, state.t + 1, state.alpha0, state.eta0},
          std::move(row)};
}

template <class Env, class Policy>
SharpStep<Policy> sharp_step(const SharpState<Policy>& state, const Env& env, Rng& rng) {
  detail::RowRecorder recorder(nullptr, env.horizon(), false);
  return sharp_step(state, env, rng, recorder);
}

struct SharpConfig {
  double alpha0 = 1.0;
  double eta0 = 0.1;
  long iterations = 100;  // T
  bool record_wall_time = false;
};

/// Runs init plus T-1 steps. `final_params` is theta_T; `returned_params`
/// is theta_k for k drawn uniformly from {0, ..., T-1}.
template <class Env, class Policy>
RunResult sharp_run(const SharpConfig& config, const Env& env, const Policy& policy_init, Rng& rng,
                    const ExactOracle* oracle = nullptr) {
  require(config.iterations >= 1, "sharp_run: T must be at least 1");
  detail::RowRecorder recorder(oracle, env.horizon(), config.record_wall_time);
  RunResult result;
  result.returned_index = detail::draw_index(config.iterations, rng);
  if (result.returned_index == 0) result.returned_params = policy_init.params();
  auto step = sharp_init(env, policy_init, config.alpha0, config.eta0, rng, recorder);
  result.record.rows.push_back(step.row);
  for (long t = 1; t < config.iterations; ++t) {
    if (t == result.returned_index) result.returned_params = step.state.theta_curr();
    step = sharp_step(step.state, env, rng, recorder);
    result.record.rows.push_back(step.row);
  }
  result.final_params = step.state.theta_curr();
  return result;
}

// ---------------------------------------------------------------------------
// REINFORCE (GPOMDP form) with optional linear baseline.

struct ReinforceConfig {
  double step_size = 0.01;
  int batch = 1;
  long iterations = 100;
  bool use_baseline = false;
  bool record_wall_time = false;
};

/// theta <- theta + step_size * mean_batch g. With the baseline enabled the
/// baseline is refit on each batch and applied to the next one.
template <class Env, class Policy>
RunResult reinforce_run(const ReinforceConfig& config, const Env& env, const Policy& policy_init, Rng& rng,
                        const ExactOracle* oracle = nullptr) {
  require(config.iterations >= 1 && config.batch >= 1, "reinforce_run: iterations and batch must be positive");
  detail::RowRecorder recorder(oracle, env.horizon(), config.record_wall_time);
  RunResult result;
  result.returned_index = detail::draw_index(config.iterations, rng);
  Policy policy = policy_init;
  LinearBaseline baseline;
  using Traj = Trajectory<typename Env::State, typename Env::Action>;
  std::vector<Traj> batch;
  for (long t = 0; t < config.iterations; ++t) {
    if (t == result.returned_index) result.returned_params = policy.params();
    batch.clear();
    ParamVector g = ParamVector::Zero(policy.dim());
    double mean_return = 0.0;
    for (int i = 0; i < config.batch; ++i) {
      batch.push_back(sample_trajectory(env, policy, env.horizon(), rng));
      const auto& traj = batch.back();
      if (config.use_baseline) {
        g += pg_estimate_with_baseline(traj, policy, env.gamma(), baseline_values(baseline, env, traj));
      } else {
        g += pg_estimate(traj, policy, env.gamma());
      }
      mean_return += discounted_return(traj, env.gamma());
    }
    g /= config.batch;
    mean_return /= config.batch;
    recorder.add_trajectories(config.batch);
    result.record.rows.push_back(recorder.row(t, policy.params(), g, mean_return, config.step_size, std::nullopt));
    if (config.use_baseline) baseline = baseline_fit(env, std::span<const Traj>(batch), env.gamma());
    policy = policy.with_params(check_finite(ParamVector(policy.params() + config.step_size * g), "reinforce: theta"));
  }
  result.final_params = policy.params();
  return result;
}

// ---------------------------------------------------------------------------
// STORM with importance-sampling correction.

struct StormIsConfig {
  double alpha0 = 1.0;
  double eta0 = 0.1;
  long iterations = 100;
  bool normalized = false;  // default: plain eta_t v_t step
  bool record_wall_time = false;
};

/// g(tau; theta_t) - w(tau) g(tau; theta_{t-1}) for tau ~ pi_{theta_t}.
template <class S, class A, class Policy>
ParamVector is_correction(const Trajectory<S, A>& traj, const Policy& current, const Policy& previous, double gamma) {
  const double w = is_weight(traj, previous, current);
  return pg_estimate(traj, current, gamma) - w * pg_estimate(traj, previous, gamma);
}

/// v_t = (1-alpha_t) v_{t-1} + alpha_t g(tau_t; theta_t)
///       + (1-alpha_t)(g(tau_t; theta_t) - w(tau_t) g(tau_t; theta_{t-1})),
/// theta_{t+1} = theta_t + eta_t v_t (or the normalized step).
template <class Env, class Policy>
RunResult storm_is_run(const StormIsConfig& config, const Env& env, const Policy& policy_init, Rng& rng,
                       const ExactOracle* oracle = nullptr) {
  require(config.iterations >= 1, "storm_is_run: T must be at least 1");
  require(config.alpha0 > 0.0 && config.eta0 >= 0.0, "storm_is_run: alpha0 must be positive, eta0 non-negative");
  detail::RowRecorder recorder(oracle, env.horizon(), config.record_wall_time);
  RunResult result;
  result.returned_index = detail::draw_index(config.iterations, rng);
  auto advance = [&](const ParamVector& theta, const ParamVector& v, double eta) {
    return config.normalized ? detail::normalized_step(theta, v, eta) : ParamVector(theta + eta * v);
  };
  Policy previous = policy_init;
  Policy current = policy_init;
  ParamVector v;
  for (long t = 0; t < config.iterations; ++t) {
    if (t == result.returned_index) result.returned_params = current.params();
    const auto tau = sample_trajectory(env, current, env.horizon(), rng);
    recorder.add_trajectories(1);
    const ParamVector g = pg_estimate(tau, current, env.gamma());
    Schedule sched{1.0, config.eta0};
    if (t == 0) {
      v = g;
    } else {
      sched = schedules(t, config.alpha0, config.eta0);
      const double a = sched.alpha;
      const double w = is_weight(tau, previous, current);
      const ParamVector g_prev = pg_estimate(tau, previous, env.gamma());
      v = (1.0 - a) * v + a * g + (1.0 - a) * (g - w * g_prev);
    }
    check_finite(v, "storm_is: v_t");
    result.record.rows.push_back(
        recorder.row(t, current.params(), v, discounted_return(tau, env.gamma()), sched.eta, sched.alpha));
    previous = current;
    current = current.with_params(check_finite(advance(current.params(), v, sched.eta), "storm_is: theta"));
  }
  result.final_params = current.params();
  return result;
}

// ---------------------------------------------------------------------------
// Checkpointed variance-reduction framework (SVRPG / HAPG / PAGE-PG).

enum class Correction { importance_sampling, hessian };

struct VrFrameworkConfig {
  int q = 10;  // checkpoint period
  int batch = 10;
  int batch_check = 50;
  Correction correction = Correction::importance_sampling;
  std::optional<double> page_prob;  // probabilistic checkpoints when set
  double step_size = 0.01;
  long iterations = 100;
  long max_trajectories = 0;  // stop before exceeding this many trajectories; 0 = no cap
  bool record_wall_time = false;
};

/// Checkpoints (t mod Q == 0, or with probability page_prob) set h_t to a
/// fresh batch mean of g; other iterations add a batch mean of the
/// correction term to h_{t-1}. theta_{t+1} = theta_t + step_size h_t.
/// With a trajectory cap the run may end before `iterations`; the random
/// iterate is then redrawn among the completed ones.
template <class Env, class Policy>
RunResult vr_framework_run(const VrFrameworkConfig& config, const Env& env, const Policy& policy_init, Rng& rng,
                           const ExactOracle* oracle = nullptr) {
  require(config.q >= 1 && config.batch >= 1 && config.batch_check >= 1,
          "vr_framework_run: Q and batch sizes must be at least 1");
  require(config.iterations >= 1, "vr_framework_run: T must be at least 1");
  if (config.page_prob) {
    require(*config.page_prob >= 0.0 && *config.page_prob <= 1.0, "vr_framework_run: page_prob must lie in [0,1]");
  }
  detail::RowRecorder recorder(oracle, env.horizon(), config.record_wall_time);
  RunResult result;
  result.returned_index = detail::draw_index(config.iterations, rng);
  Policy previous = policy_init;
  Policy current = policy_init;
  ParamVector h = ParamVector::Zero(policy_init.dim());
  std::vector<ParamVector> visited;  // only kept when the cap can cut the run short
  for (long t = 0; t < config.iterations; ++t) {
    bool checkpoint = false;
    if (config.page_prob) {
      const double u = uniform01(rng);
      checkpoint = t == 0 || u < *config.page_prob;
    } else {
      checkpoint = t % config.q == 0;
    }
    const long cost = checkpoint ? config.batch_check : config.batch;
    if (config.max_trajectories > 0 && recorder.trajectories() + cost > config.max_trajectories) break;
    if (t == result.returned_index) result.returned_params = current.params();
    if (config.max_trajectories > 0) visited.push_back(current.params());
    double mean_return = 0.0;
    if (checkpoint) {
      ParamVector sum = ParamVector::Zero(current.dim());
      for (int i = 0; i < config.batch_check; ++i) {
        const auto tau = sample_trajectory(env, current, env.horizon(), rng);
        sum += pg_estimate(tau, current, env.gamma());
        mean_return += discounted_return(tau, env.gamma());
      }
      h = sum / config.batch_check;
      mean_return /= config.batch_check;
      recorder.add_trajectories(config.batch_check);
    } else {
      ParamVector sum = ParamVector::Zero(current.dim());
      const ParamVector displacement = current.params() - previous.params();
      for (int i = 0; i < config.batch; ++i) {
        if (config.correction == Correction::importance_sampling) {
          const auto tau = sample_trajectory(env, current, env.horizon(), rng);
          sum += is_correction(tau, current, previous, env.gamma());
          mean_return += discounted_return(tau, env.gamma());
        } else {
          const double b = uniform01(rng);
          const Policy at_b = current.with_params(b * current.params() + (1.0 - b) * previous.params());
          const auto tau = sample_trajectory(env, at_b, env.horizon(), rng);
          sum += hessian_vector_estimate(tau, at_b, env.gamma(), displacement);
          mean_return += discounted_return(tau, env.gamma());
        }
      }
      h += sum / config.batch;
      mean_return /= config.batch;
      recorder.add_trajectories(config.batch);
    }
    check_finite(h, "vr_framework: h_t");
    result.record.rows.push_back(
        recorder.row(t, current.params(), h, mean_return, config.step_size, std::nullopt));
    previous = current;
    current = current.with_params(check_finite(ParamVector(current.params() + config.step_size * h), "vr: theta"));
  }
  const auto completed = static_cast<long>(result.record.rows.size());
  require(completed >= 1, "vr_framework_run: trajectory cap is smaller than the first checkpoint batch");
  if (completed < config.iterations) {
    result.returned_index = detail::draw_index(completed, rng);
    result.returned_params = visited[static_cast<std::size_t>(result.returned_index)];
  }
  result.final_params = current.params();
  return result;
}

}  // namespace sharp

#endif  // SHARP_ALGORITHMS_HPP
