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

// The oracle check suite behind `sharp_cli verify`. Estimators are injected
// through hooks so a deliberately broken one can be shown to fail.

#ifndef SHARP_HARNESS_VERIFY_HPP
#define SHARP_HARNESS_VERIFY_HPP

#include <Eigen/SVD>

#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sharp/algorithms.hpp"
#include "sharp/estimators.hpp"
#include "sharp/harness/config.hpp"
#include "sharp/oracle.hpp"
#include "sharp/policy.hpp"

namespace sharp {

struct EstimatorHooks {
  std::function<ParamVector(const TabularTrajectory&, const SoftmaxTabular&, double)> gradient =
      [](const TabularTrajectory& t, const SoftmaxTabular& p, double g) { return pg_estimate(t, p, g); };
  std::function<ParamVector(const TabularTrajectory&, const SoftmaxTabular&, double, const ParamVector&)>
      hessian_vector = [](const TabularTrajectory& t, const SoftmaxTabular& p, double g, const ParamVector& v) {
        return hessian_vector_estimate(t, p, g, v);
      };
};

struct VerifyOptions {
  std::uint64_t seed = 0;
  int n_theta = 20;
  int n_directions = 10;
  int n_pairs = 10;
  int quadrature = 32;
  int decay_seeds = 30;
  long decay_t_min = 32;
  long decay_t_max = 2048;
  double decay_alpha0 = 1.0;
  double decay_eta0 = 0.01;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;
  std::string bound;
};

struct VerifyReport {
  std::vector<CheckResult> checks;

  [[nodiscard]] bool passed() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return !checks.empty();
  }

  [[nodiscard]] std::string to_text() const {
    std::ostringstream os;
    os.precision(6);
    for (const auto& c : checks) {
      os << "check=" << c.name << " status=" << (c.passed ? "pass" : "fail") << " value=" << c.value
         << " bound=" << c.bound << "\n";
    }
    os << "overall=" << (passed() ? "pass" : "fail") << "\n";
    return os.str();
  }
};

/// Least-squares slope of y on x.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size() && x.size() >= 2, "ols_slope: need two or more paired points");
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

/// Mean ||eps_t||^2 across seeded SHARP runs with exact gradients, and the
/// slope of its log against log t over [t_min, t_max].
struct VarianceDecay {
  std::vector<double> mean_eps_sq;  // index t
  double slope = 0.0;
};

inline VarianceDecay variance_decay(const TabularMdp& mdp, double alpha0, double eta0, int seeds, long t_min,
                                    long t_max, std::uint64_t seed_base) {
  require(seeds >= 1 && t_min >= 1 && t_max > t_min, "variance_decay: bad range");
  const SoftmaxTabular pi0 = SoftmaxTabular::for_mdp(mdp);
  ExactOracle oracle;
  oracle.gradient = [&](const ParamVector& th) { return exact_grad(mdp, pi0.with_params(th)); };
  VarianceDecay out;
  out.mean_eps_sq.assign(static_cast<std::size_t>(t_max + 1), 0.0);
  for (int s = 0; s < seeds; ++s) {
    Rng rng(seed_base + static_cast<std::uint64_t>(s));
    const auto run = sharp_run(SharpConfig{alpha0, eta0, t_max + 1}, mdp, pi0, rng, &oracle);
    for (long t = 0; t <= t_max; ++t) {
      out.mean_eps_sq[static_cast<std::size_t>(t)] += *run.record.rows[static_cast<std::size_t>(t)].eps_norm_sq / seeds;
    }
  }
  std::vector<double> x;
  std::vector<double> y;
  for (long t = t_min; t <= t_max; ++t) {
    x.push_back(std::log(static_cast<double>(t)));
    y.push_back(std::log(out.mean_eps_sq[static_cast<std::size_t>(t)]));
  }
  out.slope = ols_slope(x, y);
  return out;
}

inline VerifyReport verify(const TabularMdp& mdp, const VerifyOptions& opt, const EstimatorHooks& hooks = {}) {
  const SoftmaxTabular pi0 = SoftmaxTabular::for_mdp(mdp);
  const auto d = pi0.dim();
  const double gamma = mdp.gamma();
  Rng rng(opt.seed);
  std::normal_distribution<double> normal;
  auto random_vec = [&] { return ParamVector(ParamVector::NullaryExpr(d, [&] { return normal(rng); })); };
  auto hooked_grad = [&](const SoftmaxTabular& p) {
    ParamVector g = ParamVector::Zero(d);
    for (const auto& [traj, prob] : enumerate_trajectories(mdp, p, mdp.horizon())) g += prob * hooks.gradient(traj, p, gamma);
    return g;
  };
  auto hooked_hvp = [&](const SoftmaxTabular& p, const ParamVector& v) {
    ParamVector h = ParamVector::Zero(d);
    for (const auto& [traj, prob] : enumerate_trajectories(mdp, p, mdp.horizon())) {
      h += prob * hooks.hessian_vector(traj, p, gamma, v);
    }
    return h;
  };
  VerifyReport report;

  {
    double worst = 0.0;
    for (int i = 0; i < opt.n_theta; ++i) {
      const SoftmaxTabular p = pi0.with_params(random_vec());
      const ParamVector fd = fd_grad([&](const ParamVector& th) { return exact_objective(mdp, p.with_params(th)); },
                                     p.params(), fd_grad_step);
      worst = std::max(worst, relative_error(hooked_grad(p), fd));
    }
    report.checks.push_back({"gradient_unbiasedness", worst <= 1e-6, worst, "<=1e-06"});
  }
  {
    double worst = 0.0;
    for (int i = 0; i < opt.n_directions; ++i) {
      const SoftmaxTabular p = pi0.with_params(random_vec());
      const ParamVector v = random_vec();
      const ParamVector fd = fd_directional([&](const ParamVector& th) { return exact_grad(mdp, p.with_params(th)); },
                                            p.params(), v, fd_hvp_step);
      worst = std::max(worst, relative_error(hooked_hvp(p, v), fd));
    }
    report.checks.push_back({"hessian_unbiasedness", worst <= 1e-5, worst, "<=1e-05"});
  }
  {
    const auto rule = gauss_legendre(opt.quadrature);
    double worst = 0.0;
    for (int i = 0; i < opt.n_pairs; ++i) {
      const ParamVector t0 = random_vec();
      const ParamVector t1 = random_vec();
      ParamVector integral = ParamVector::Zero(d);
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        const double b = rule.nodes[k];
        integral += rule.weights[k] * hooked_hvp(pi0.with_params(b * t1 + (1.0 - b) * t0), t1 - t0);
      }
      const ParamVector diff = exact_grad(mdp, pi0.with_params(t1)) - exact_grad(mdp, pi0.with_params(t0));
      worst = std::max(worst, relative_error(integral, diff));
    }
    report.checks.push_back({"interpolated_identity", worst <= 1e-4, worst, "<=1e-04"});
  }
  {
    const auto vb = variance_bounds(SoftmaxTabular::regularity(mdp.reward_bound()), gamma, mdp.horizon());
    const double sigma_b = std::sqrt(vb.sigma_b_sq);
    double worst = 0.0;  // largest ratio of a measured quantity to its bound
    for (int i = 0; i < opt.n_theta; ++i) {
      const SoftmaxTabular p = pi0.with_params(random_vec());
      const ParamVector grad = exact_grad(mdp, p);
      double second_moment = 0.0;
      double max_b = 0.0;
      for (const auto& [traj, prob] : enumerate_trajectories(mdp, p, mdp.horizon())) {
        second_moment += prob * (hooks.gradient(traj, p, gamma) - grad).squaredNorm();
        Eigen::MatrixXd b(d, d);
        for (Eigen::Index j = 0; j < d; ++j) b.col(j) = hooks.hessian_vector(traj, p, gamma, ParamVector::Unit(d, j));
        max_b = std::max(max_b, Eigen::JacobiSVD<Eigen::MatrixXd>(b).singularValues()[0]);
      }
      ParamVector v = random_vec();
      v.normalize();
      worst = std::max({worst, second_moment / vb.sigma_g_sq, max_b / sigma_b, exact_hvp(mdp, p, v).norm() / sigma_b});
    }
    report.checks.push_back({"variance_bound_dominance", worst <= 1.0, worst, "<=1"});
  }
  {
    const auto decay = variance_decay(mdp, opt.decay_alpha0, opt.decay_eta0, opt.decay_seeds, opt.decay_t_min,
                                      opt.decay_t_max, opt.seed);
    const bool ok = decay.slope >= -0.95 && decay.slope <= -0.40;
    report.checks.push_back({"variance_decay_slope", ok, decay.slope, "[-0.95,-0.40]"});
  }
  return report;
}

inline VerifyReport verify(const ExperimentConfig& c, const EstimatorHooks& hooks = {}) {
  const Environment env = make_environment(c);
  const auto* mdp = std::get_if<TabularMdp>(&env);
  if (mdp == nullptr) throw config_error("verify needs a tabular environment");
  if (trajectory_space_size(*mdp, mdp->horizon()) > default_enumeration_cap) {
    throw config_error("verify needs an enumerable environment; this one exceeds the trajectory cap");
  }
  VerifyOptions opt;
  opt.seed = c.seed_base;
  return verify(*mdp, opt, hooks);
}

}  // namespace sharp

#endif  // SHARP_HARNESS_VERIFY_HPP
