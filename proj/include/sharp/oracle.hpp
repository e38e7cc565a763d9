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

// Ground-truth quantities for enumerable MDPs: J, grad J and (hess J) v by
// exhaustive trajectory enumeration, plus finite differences, dynamic
// programming and Gauss-Legendre quadrature used to check them.

#ifndef SHARP_ORACLE_HPP
#define SHARP_ORACLE_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sharp/core.hpp"
#include "sharp/estimators.hpp"
#include "sharp/mdp.hpp"

namespace sharp {

template <class Policy>
double exact_objective(const TabularMdp& mdp, const Policy& policy) {
  double j = 0.0;
  for (const auto& [traj, p] : enumerate_trajectories(mdp, policy, mdp.horizon())) {
    j += p * discounted_return(traj, mdp.gamma());
  }
  return j;
}

template <class Policy>
ParamVector exact_grad(const TabularMdp& mdp, const Policy& policy) {
  ParamVector g = ParamVector::Zero(policy.dim());
  for (const auto& [traj, p] : enumerate_trajectories(mdp, policy, mdp.horizon())) {
    g += p * pg_estimate(traj, policy, mdp.gamma());
  }
  return g;
}

template <class Policy>
ParamVector exact_hvp(const TabularMdp& mdp, const Policy& policy, const ParamVector& v) {
  require(v.size() == policy.dim(), "exact_hvp: direction length does not match parameters");
  ParamVector hv = ParamVector::Zero(policy.dim());
  for (const auto& [traj, p] : enumerate_trajectories(mdp, policy, mdp.horizon())) {
    hv += p * hessian_vector_estimate(traj, policy, mdp.gamma(), v);
  }
  return hv;
}

/// Central differences, one coordinate at a time.
inline ParamVector fd_grad(const std::function<double(const ParamVector&)>& f, const ParamVector& theta,
                           double step) {
  require(step > 0.0, "fd_grad: step must be positive");
  ParamVector g(theta.size());
  ParamVector x = theta;
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    x[i] = theta[i] + step;
    const double up = f(x);
    x[i] = theta[i] - step;
    const double down = f(x);
    x[i] = theta[i];
    g[i] = (up - down) / (2.0 * step);
  }
  return g;
}

/// (F(theta + eps v) - F(theta - eps v)) / (2 eps) for a vector-valued F.
inline ParamVector fd_directional(const std::function<ParamVector(const ParamVector&)>& f, const ParamVector& theta,
                                  const ParamVector& v, double eps) {
  require(eps > 0.0, "fd_directional: step must be positive");
  require(v.size() == theta.size(), "fd_directional: direction length does not match parameters");
  return (f(theta + eps * v) - f(theta - eps * v)) / (2.0 * eps);
}

inline constexpr double fd_grad_step = 1e-5;
inline constexpr double fd_hvp_step = 1e-4;

/// J(theta), grad J(theta) and v -> (hess J) v at one parameter point.
/// Construction cross-checks grad against finite differences of J.
struct ExactDerivatives {
  double j_value = 0.0;
  ParamVector grad;
  std::function<ParamVector(const ParamVector&)> hvp_fn;

  template <class Policy>
  static ExactDerivatives compute(const TabularMdp& mdp, const Policy& policy, double tolerance = 1e-6) {
    ExactDerivatives d;
    d.j_value = exact_objective(mdp, policy);
    d.grad = exact_grad(mdp, policy);
    const ParamVector fd = fd_grad(
        [&](const ParamVector& th) { return exact_objective(mdp, policy.with_params(th)); }, policy.params(),
        fd_grad_step);
    const double err = (d.grad - fd).norm() / std::max(fd.norm(), 1e-8);
    if (err > tolerance) {
      throw std::runtime_error("ExactDerivatives: gradient disagrees with finite differences (rel err " +
                               std::to_string(err) + ")");
    }
    d.hvp_fn = [mdp, policy](const ParamVector& v) { return exact_hvp(mdp, policy, v); };
    return d;
  }
};

/// J by forward propagation of the state distribution; no enumeration.
template <class Policy>
double objective_dp(const TabularMdp& mdp, const Policy& policy) {
  const int ns = mdp.num_states();
  const int na = mdp.num_actions();
  std::vector<double> dist(mdp.initial_dist().begin(), mdp.initial_dist().end());
  std::vector<std::vector<double>> pi;
  for (int s = 0; s < ns; ++s) pi.push_back(policy.probabilities(s));
  double j = 0.0;
  double discount = 1.0;
  for (int h = 0; h < mdp.horizon(); ++h) {
    std::vector<double> next(static_cast<std::size_t>(ns), 0.0);
    for (int s = 0; s < ns; ++s) {
      const double ds = dist[static_cast<std::size_t>(s)];
      if (ds == 0.0) continue;
      for (int a = 0; a < na; ++a) {
        const double w = ds * pi[static_cast<std::size_t>(s)][static_cast<std::size_t>(a)];
        j += discount * w * mdp.reward(s, a);
        for (int s2 = 0; s2 < ns; ++s2) next[static_cast<std::size_t>(s2)] += w * mdp.transition(s, a, s2);
      }
    }
    dist = std::move(next);
    discount *= mdp.gamma();
  }
  return j;
}

/// Optimal finite-horizon value with the same absolute-time discounting
/// gamma^h used by J: V_h(s) = max_a [gamma^h r(s,a) + sum_s' P V_{h+1}(s')].
inline double value_iteration_optimum(const TabularMdp& mdp) {
  const auto ns = static_cast<std::size_t>(mdp.num_states());
  std::vector<double> v(ns, 0.0);
  for (int h = mdp.horizon() - 1; h >= 0; --h) {
    const double discount = std::pow(mdp.gamma(), h);
    std::vector<double> next(ns);
    for (int s = 0; s < mdp.num_states(); ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int a = 0; a < mdp.num_actions(); ++a) {
        double q = discount * mdp.reward(s, a);
        if (h + 1 < mdp.horizon()) {
          for (int s2 = 0; s2 < mdp.num_states(); ++s2) q += mdp.transition(s, a, s2) * v[static_cast<std::size_t>(s2)];
        }
        best = std::max(best, q);
      }
      next[static_cast<std::size_t>(s)] = best;
    }
    v = std::move(next);
  }
  double total = 0.0;
  for (std::size_t s = 0; s < ns; ++s) total += mdp.initial_dist()[s] * v[s];
  return total;
}

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule mapped to [0, 1]. Roots by Newton iteration
/// on the Legendre recurrence.
inline QuadratureRule gauss_legendre(int n) {
  require(n >= 1, "gauss_legendre: need at least one node");
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1, 1] -> [0, 1]
    rule.nodes[static_cast<std::size_t>(i)] = 0.5 * (1.0 - x);
    rule.nodes[static_cast<std::size_t>(n - 1 - i)] = 0.5 * (1.0 + x);
    rule.weights[static_cast<std::size_t>(i)] = 0.5 * w;
    rule.weights[static_cast<std::size_t>(n - 1 - i)] = 0.5 * w;
  }
  return rule;
}

struct UnbiasednessReport {
  ParamVector integral;    // int_0^1 E[B(tau; theta^b)(theta1 - theta0)] db
  ParamVector difference;  // grad J(theta1) - grad J(theta0)
  double relative_error = 0.0;

  [[nodiscard]] std::string to_text() const {
    std::ostringstream os;
    os.precision(17);
    os << "integral_norm=" << integral.norm() << "\n"
       << "difference_norm=" << difference.norm() << "\n"
       << "relative_error=" << relative_error << "\n";
    return os.str();
  }
};

/// Checks that the Hessian-aided correction at a uniform interpolation point
/// is unbiased for the gradient difference, with the expectation over b done
/// by quadrature and over tau by enumeration.
template <class Policy>
UnbiasednessReport unbiasedness_report(const TabularMdp& mdp, const Policy& policy, const ParamVector& theta0,
                                       const ParamVector& theta1, int n_quadrature = 32) {
  require(theta0.size() == policy.dim() && theta1.size() == policy.dim(),
          "unbiasedness_report: parameter length mismatch");
  const ParamVector delta = theta1 - theta0;
  const auto rule = gauss_legendre(n_quadrature);
  UnbiasednessReport r;
  r.integral = ParamVector::Zero(policy.dim());
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double b = rule.nodes[k];
    const Policy at_b = policy.with_params(b * theta1 + (1.0 - b) * theta0);
    r.integral += rule.weights[k] * exact_hvp(mdp, at_b, delta);
  }
  r.difference = exact_grad(mdp, policy.with_params(theta1)) - exact_grad(mdp, policy.with_params(theta0));
  r.relative_error = (r.integral - r.difference).norm() / std::max(r.difference.norm(), 1e-12);
  if (r.difference.norm() == 0.0 && r.integral.norm() == 0.0) r.relative_error = 0.0;
  return r;
}

}  // namespace sharp

#endif  // SHARP_ORACLE_HPP
