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

#ifndef SHARP_ESTIMATORS_HPP
#define SHARP_ESTIMATORS_HPP

#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "sharp/autodiff.hpp"
#include "sharp/core.hpp"
#include "sharp/mdp.hpp"
#include "sharp/policy.hpp"

namespace sharp {

/// sum_h grad log pi(a_h|s_h). The dynamics terms of log p(tau) carry no
/// theta, so this is the full gradient of the trajectory log-likelihood.
template <class S, class A, class Policy>
ParamVector trajectory_score(const Trajectory<S, A>& traj, const Policy& policy) {
  ParamVector total = ParamVector::Zero(policy.dim());
  for (std::size_t h = 0; h < traj.length(); ++h) total += policy.score(traj.states[h], traj.actions[h]);
  return total;
}

/// g(tau; theta) = sum_h Psi_h(tau) grad log pi(a_h|s_h).
template <class S, class A, class Policy>
ParamVector pg_estimate(const Trajectory<S, A>& traj, const Policy& policy, double gamma) {
  const auto psi = rewards_to_go(traj.rewards, gamma);
  ParamVector g = ParamVector::Zero(policy.dim());
  for (std::size_t h = 0; h < traj.length(); ++h) {
    if (psi[h] != 0.0) g += psi[h] * policy.score(traj.states[h], traj.actions[h]);
  }
  return check_finite(g, "pg_estimate");
}

/// g with a per-step baseline b_h subtracted from Psi_h.
template <class S, class A, class Policy>
ParamVector pg_estimate_with_baseline(const Trajectory<S, A>& traj, const Policy& policy, double gamma,
                                      std::span<const double> baseline) {
  require(baseline.size() == traj.length(), "pg_estimate_with_baseline: one baseline value per step required");
  const auto psi = rewards_to_go(traj.rewards, gamma);
  ParamVector g = ParamVector::Zero(policy.dim());
  for (std::size_t h = 0; h < traj.length(); ++h) {
    g += (psi[h] - baseline[h]) * policy.score(traj.states[h], traj.actions[h]);
  }
  return check_finite(g, "pg_estimate_with_baseline");
}

/// Phi(theta; tau) = sum_h Psi_h(tau) log pi(a_h|s_h). Its gradient is g.
template <class S, class A, class Policy>
double phi_value(const Trajectory<S, A>& traj, const Policy& policy, double gamma) {
  const auto psi = rewards_to_go(traj.rewards, gamma);
  double phi = 0.0;
  for (std::size_t h = 0; h < traj.length(); ++h) phi += psi[h] * policy.log_prob(traj.states[h], traj.actions[h]);
  return phi;
}

/// Phi recorded on an autodiff tape at the policy parameters.
template <class S, class A, class Policy>
auto phi_function(const Trajectory<S, A>& traj, const Policy& policy, double gamma) {
  return [&traj, &policy, psi = rewards_to_go(traj.rewards, gamma)](auto& tape, auto params) {
    using Var = typename std::remove_cvref_t<decltype(tape)>::Var;
    std::vector<Var> terms;
    terms.reserve(traj.length());
    for (std::size_t h = 0; h < traj.length(); ++h) {
      terms.push_back(psi[h] * policy.log_prob_expr(tape, params, traj.states[h], traj.actions[h]));
    }
    return tape.sum(terms);
  };
}

/// Phi, grad Phi and (hess Phi) v from a single forward-over-reverse pass.
template <class S, class A, class Policy>
ad::SecondOrder phi_derivatives(const Trajectory<S, A>& traj, const Policy& policy, double gamma,
                                const ParamVector& v) {
  require(v.size() == policy.dim(), "phi_derivatives: direction length does not match parameters");
  require(traj.length() >= 1, "phi_derivatives: empty trajectory");
  return ad::value_grad_hvp(phi_function(traj, policy, gamma), policy.params(), v);
}

/// B(tau; theta) v = (grad log p(tau) . v) grad Phi + (hess Phi) v, with Phi
/// differentiated on the tape.
template <class S, class A, class Policy>
ParamVector hessian_vector_estimate(const Trajectory<S, A>& traj, const Policy& policy, double gamma,
                                    const ParamVector& v) {
  require(v.size() == policy.dim(), "hessian_vector_estimate: direction length does not match parameters");
  const ParamVector score_sum = trajectory_score(traj, policy);
  const auto d = phi_derivatives(traj, policy, gamma, v);
  return check_finite(ParamVector(score_sum.dot(v) * d.grad + d.hvp), "hessian_vector_estimate");
}

/// Same quantity assembled from the policy's per-step score and
/// hvp_log_prob. Used as an independent cross-check of the tape path.
template <class S, class A, class Policy>
ParamVector hessian_vector_estimate_stepwise(const Trajectory<S, A>& traj, const Policy& policy, double gamma,
                                             const ParamVector& v) {
  require(v.size() == policy.dim(), "hessian_vector_estimate: direction length does not match parameters");
  const auto psi = rewards_to_go(traj.rewards, gamma);
  ParamVector score_sum = ParamVector::Zero(policy.dim());
  ParamVector grad_phi = ParamVector::Zero(policy.dim());
  ParamVector hvp_phi = ParamVector::Zero(policy.dim());
  for (std::size_t h = 0; h < traj.length(); ++h) {
    const ParamVector sc = policy.score(traj.states[h], traj.actions[h]);
    score_sum += sc;
    grad_phi += psi[h] * sc;
    hvp_phi += psi[h] * policy.hvp_log_prob(traj.states[h], traj.actions[h], v);
  }
  return score_sum.dot(v) * grad_phi + hvp_phi;
}

/// log prod_h pi_old(a_h|s_h) / pi_new(a_h|s_h).
template <class S, class A, class Policy>
double log_is_weight(const Trajectory<S, A>& traj, const Policy& policy_old, const Policy& policy_new) {
  double log_w = 0.0;
  for (std::size_t h = 0; h < traj.length(); ++h) {
    const double lp_new = policy_new.log_prob(traj.states[h], traj.actions[h]);
    if (!std::isfinite(lp_new)) {
      throw degenerate_support_error("is_weight: new policy assigns zero probability at step " + std::to_string(h));
    }
    log_w += policy_old.log_prob(traj.states[h], traj.actions[h]) - lp_new;
  }
  return log_w;
}

/// Importance weight of a trajectory drawn from `policy_new` for
/// re-weighting toward `policy_old`; accumulated in log space.
template <class S, class A, class Policy>
double is_weight(const Trajectory<S, A>& traj, const Policy& policy_old, const Policy& policy_new) {
  return std::exp(log_is_weight(traj, policy_old, policy_new));
}

/// Sample variance (n - 1 denominator) of is_weight over trajectories drawn
/// from `policy_new`. A diagnostic for the bounded-weight-variance constant.
template <class Env, class Policy>
double is_weight_variance_estimate(const Policy& policy_old, const Policy& policy_new, const Env& env,
                                   int n_samples, Rng& rng) {
  require(n_samples >= 2, "is_weight_variance_estimate: need at least two samples");
  double mean = 0.0;
  double m2 = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const auto traj = sample_trajectory(env, policy_new, env.horizon(), rng);
    const double w = is_weight(traj, policy_old, policy_new);
    const double delta = w - mean;
    mean += delta / (i + 1);
    m2 += delta * (w - mean);
  }
  return m2 / (n_samples - 1);
}

/// Largest ||score|| seen over sampled state-action pairs. For Gaussian
/// policies this is reported in place of an enforced G.
template <class Env, class Policy>
double empirical_max_score_norm(const Policy& policy, const Env& env, int n_trajectories, Rng& rng) {
  require(n_trajectories >= 1, "empirical_max_score_norm: need at least one trajectory");
  double best = 0.0;
  for (int i = 0; i < n_trajectories; ++i) {
    const auto traj = sample_trajectory(env, policy, env.horizon(), rng);
    for (std::size_t h = 0; h < traj.length(); ++h) {
      best = std::max(best, policy.score(traj.states[h], traj.actions[h]).norm());
    }
  }
  return best;
}

struct VarianceBounds {
  double sigma_g_sq = 0.0;
  double sigma_b_sq = 0.0;
};

/// sigma_g^2 = G^2 R0^2 / (1-gamma)^4,
/// sigma_B^2 = (H^2 G^4 R0^2 + L^2 R0^2) / (1-gamma)^4.
inline VarianceBounds variance_bounds(const RegularityConstants& c, double gamma, int horizon) {
  require(gamma > 0.0 && gamma < 1.0, "variance_bounds: gamma must lie in (0,1)");
  require(horizon >= 1, "variance_bounds: horizon must be at least 1");
  const double denom = std::pow(1.0 - gamma, 4);
  const double h = horizon;
  return {c.G * c.G * c.R0 * c.R0 / denom,
          (h * h * std::pow(c.G, 4) * c.R0 * c.R0 + c.L * c.L * c.R0 * c.R0) / denom};
}

/// Right-hand side of the SHARP convergence guarantee on
/// E[(1/T) sum_t ||grad J(theta_t)||]:
///   (8 sqrt(C) + 9 C_J / eta0) / T^{1/3} + 6 sigma_B eta0 / T^{2/3},
///   C = 3 alpha0 (48 sigma_B^2 eta0^2 / alpha0 + (6 alpha0 + 1/alpha0) sigma_g^2) / (3 alpha0 - 2).
/// Valid for alpha0 in (2/3, 1].
inline double theorem_rate_bound(const VarianceBounds& vb, double c_j, double alpha0, double eta0, int iterations) {
  require(alpha0 > 2.0 / 3.0 && alpha0 <= 1.0, "theorem_rate_bound: alpha0 must lie in (2/3, 1]");
  require(eta0 > 0.0 && iterations >= 1, "theorem_rate_bound: eta0 and T must be positive");
  const double sigma_b = std::sqrt(vb.sigma_b_sq);
  const double c = 3.0 * alpha0 *
                   (48.0 * vb.sigma_b_sq * eta0 * eta0 / alpha0 + (6.0 * alpha0 + 1.0 / alpha0) * vb.sigma_g_sq) /
                   (3.0 * alpha0 - 2.0);
  const double t = iterations;
  return (8.0 * std::sqrt(c) + 9.0 * c_j / eta0) / std::cbrt(t) + 6.0 * sigma_b * eta0 / std::pow(t, 2.0 / 3.0);
}

}  // namespace sharp

#endif  // SHARP_ESTIMATORS_HPP
