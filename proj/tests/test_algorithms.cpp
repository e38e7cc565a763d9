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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sharp/algorithms.hpp"
#include "sharp/baseline.hpp"
#include "sharp/environments.hpp"
#include "sharp/oracle.hpp"
#include "sharp/policy.hpp"
#include "test_util.hpp"

namespace {

using sharp::ParamVector;
using sharp::SoftmaxTabular;
using sharp::TabularMdp;

sharp::ExactOracle enumeration_oracle(const TabularMdp& mdp) {
  return {[mdp](const ParamVector& th) { return sharp::exact_objective(mdp, SoftmaxTabular(mdp.num_states(), mdp.num_actions(), th)); },
          [mdp](const ParamVector& th) { return sharp::exact_grad(mdp, SoftmaxTabular(mdp.num_states(), mdp.num_actions(), th)); }};
}

TabularMdp zero_reward(const TabularMdp& mdp) {
  return mdp.with_rewards(std::vector<double>(static_cast<std::size_t>(mdp.num_states() * mdp.num_actions()), 0.0));
}

TEST(Schedules, Examples) {
  EXPECT_DOUBLE_EQ(sharp::schedules(8, 1.0, 0.1).eta, 0.025);
  EXPECT_DOUBLE_EQ(sharp::schedules(1, 1.5, 0.1).alpha, 1.0);
  EXPECT_NEAR(sharp::schedules(1000, 1.0, 0.1).alpha, 0.01, 1e-15);
  EXPECT_THROW((void)sharp::schedules(0, 1.0, 0.1), sharp::invalid_argument);
  for (long t = 1; t <= 5000; t += 7) {
    const auto s = sharp::schedules(t, 5.0, 0.6);
    const double decay = std::pow(static_cast<double>(t), 2.0 / 3.0);
    EXPECT_NEAR(s.eta * decay, 0.6, 1e-12);
    if (5.0 / decay <= 1.0) {
      EXPECT_NEAR(s.alpha * decay, 5.0, 1e-12);
    } else {
      EXPECT_EQ(s.alpha, 1.0);
    }
  }
}

TEST(SharpInit, NormalizedFirstStep) {
  const TabularMdp mdp = sharp::two_state_mdp();
  sharp::Rng rng(1);
  const auto pi = SoftmaxTabular::for_mdp(mdp);
  const auto init = sharp::sharp_init(mdp, pi, 1.0, 0.3, rng);
  EXPECT_NEAR((init.state.theta_curr() - pi.params()).norm(), 0.3, 1e-12);
  EXPECT_EQ(init.state.t, 1);
  EXPECT_EQ(init.state.theta_prev, pi.params());
  EXPECT_EQ(init.row.trajectories, 1);

  sharp::Rng again(1);
  const auto same = sharp::sharp_init(mdp, pi, 1.0, 0.3, again);
  EXPECT_EQ(same.state.theta_curr(), init.state.theta_curr());
  EXPECT_EQ(same.state.v_prev, init.state.v_prev);
}

TEST(SharpInit, ZeroRewardHoldsPosition) {
  const TabularMdp mdp = zero_reward(sharp::two_state_mdp());
  sharp::Rng rng(2);
  const auto pi = SoftmaxTabular::for_mdp(mdp);
  const auto init = sharp::sharp_init(mdp, pi, 1.0, 0.3, rng);
  EXPECT_EQ(init.state.v_prev, ParamVector::Zero(4));
  EXPECT_EQ(init.state.theta_curr(), pi.params());
  const auto next = sharp::sharp_step(init.state, mdp, rng);
  EXPECT_EQ(next.state.theta_curr(), pi.params());
  EXPECT_EQ(next.state.t, 2);
}

TEST(SharpRun, StepNormScheduleAndAccounting) {
  const TabularMdp mdp = sharp::gridworld5();
  sharp::Rng rng(3);
  auto step = sharp::sharp_init(mdp, SoftmaxTabular::for_mdp(mdp), 1.5, 0.1, rng);
  long trajectories = 1;
  for (long t = 1; t < 1000; ++t) {
    const auto next = sharp::sharp_step(step.state, mdp, rng);
    const auto [alpha, eta] = sharp::schedules(t, 1.5, 0.1);
    EXPECT_EQ(next.row.eta, eta);
    EXPECT_EQ(next.row.alpha, alpha);
    if (next.state.v_prev.norm() > 0.0) {
      EXPECT_NEAR((next.state.theta_curr() - step.state.theta_curr()).norm(), eta, 1e-12);
    }
    trajectories += 2;
    step = next;
  }
  sharp::Rng rng2(3);
  const auto run = sharp::sharp_run(sharp::SharpConfig{1.5, 0.1, 1000}, mdp, SoftmaxTabular::for_mdp(mdp), rng2);
  ASSERT_EQ(run.record.rows.size(), 1000u);
  EXPECT_EQ(run.record.trajectories(), 1 + 2 * 999);
  for (std::size_t i = 1; i < run.record.rows.size(); ++i) {
    EXPECT_EQ(run.record.rows[i].trajectories - run.record.rows[i - 1].trajectories, 2);
    EXPECT_EQ(run.record.rows[i].probes, run.record.rows[i].trajectories * mdp.horizon());
  }
}

TEST(SharpRun, SingleIterationUsesInitOnly) {
  const TabularMdp mdp = sharp::two_state_mdp();
  sharp::Rng rng(4);
  const auto run = sharp::sharp_run(sharp::SharpConfig{1.0, 0.2, 1}, mdp, SoftmaxTabular::for_mdp(mdp), rng);
  EXPECT_EQ(run.record.rows.size(), 1u);
  EXPECT_EQ(run.record.trajectories(), 1);
  EXPECT_EQ(run.returned_index, 0);
  EXPECT_EQ(run.returned_params, ParamVector::Zero(4));
  EXPECT_NEAR(run.final_params.norm(), 0.2, 1e-12);
}

TEST(SharpRun, ReturnedIterateMatchesItsRow) {
  const TabularMdp mdp = sharp::two_state_mdp();
  const auto oracle = enumeration_oracle(mdp);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    sharp::Rng rng(seed);
    const auto run = sharp::sharp_run(sharp::SharpConfig{1.0, 0.2, 20}, mdp, SoftmaxTabular::for_mdp(mdp), rng, &oracle);
    ASSERT_GE(run.returned_index, 0);
    ASSERT_LT(run.returned_index, 20);
    EXPECT_EQ(run.record.rows[static_cast<std::size_t>(run.returned_index)].return_value,
              oracle.objective(run.returned_params));
  }
}

TEST(SharpRun, SeededRunsAreIdentical) {
  const TabularMdp mdp = sharp::gridworld5();
  sharp::Rng a(77);
  sharp::Rng b(77);
  const auto ra = sharp::sharp_run(sharp::SharpConfig{1.5, 0.5, 200}, mdp, SoftmaxTabular::for_mdp(mdp), a);
  const auto rb = sharp::sharp_run(sharp::SharpConfig{1.5, 0.5, 200}, mdp, SoftmaxTabular::for_mdp(mdp), b);
  EXPECT_EQ(ra.final_params, rb.final_params);
  for (std::size_t i = 0; i < ra.record.rows.size(); ++i) {
    EXPECT_EQ(ra.record.rows[i].return_value, rb.record.rows[i].return_value);
  }
}

// E[v_t] = E[grad J(theta_t)]: the mean tracking error over replicas is
// within three standard errors of zero in every coordinate.
TEST(SharpStep, MomentumEstimateIsUnbiasedAcrossReplicas) {
  const TabularMdp mdp = sharp::two_state_mdp();
  const auto oracle = enumeration_oracle(mdp);
  constexpr int replicas = 500;
  ParamVector sum = ParamVector::Zero(4);
  ParamVector sum_sq = ParamVector::Zero(4);
  for (int r = 0; r < replicas; ++r) {
    sharp::Rng rng(10'000 + r);
    auto step = sharp::sharp_init(mdp, SoftmaxTabular::for_mdp(mdp), 1.0, 0.5, rng);
    for (int t = 1; t <= 5; ++t) step = sharp::sharp_step(step.state, mdp, rng);
    // state.v_prev is v_5 and state.theta_prev is theta_5
    const ParamVector eps = step.state.v_prev - oracle.gradient(step.state.theta_prev);
    sum += eps;
    sum_sq += eps.cwiseProduct(eps);
  }
  const ParamVector mean = sum / replicas;
  const ParamVector se = ((sum_sq / replicas - mean.cwiseProduct(mean)) / (replicas - 1)).cwiseSqrt();
  for (int i = 0; i < 4; ++i) EXPECT_LE(std::abs(mean[i]), 3.0 * se[i]) << i;
}

TEST(SharpRun, DescentInequalityHoldsOnTabularRun) {
  const TabularMdp mdp = sharp::two_state_mdp();
  const auto oracle = enumeration_oracle(mdp);
  const auto vb = sharp::variance_bounds(SoftmaxTabular::regularity(mdp.reward_bound()), mdp.gamma(), mdp.horizon());
  const double sigma_b = std::sqrt(vb.sigma_b_sq);
  sharp::Rng rng(5);
  const auto run = sharp::sharp_run(sharp::SharpConfig{1.0, 0.1, 100}, mdp, SoftmaxTabular::for_mdp(mdp), rng, &oracle);
  const auto& rows = run.record.rows;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double j_next = i + 1 < rows.size() ? rows[i + 1].return_value : oracle.objective(run.final_params);
    const double eta = *rows[i].eta;
    const double rhs = 8.0 * std::sqrt(*rows[i].eps_norm_sq) + 1.5 * sigma_b * eta + 3.0 * (j_next - rows[i].return_value) / eta;
    EXPECT_LE(*rows[i].grad_norm_exact, rhs) << "t=" << i;
  }
}

TEST(SharpRun, LearnsTheGridworld) {
  const TabularMdp mdp = sharp::gridworld5();
  sharp::Rng rng(6);
  const auto run = sharp::sharp_run(sharp::SharpConfig{1.5, 0.6, 2500}, mdp, SoftmaxTabular::for_mdp(mdp), rng);
  const double j = sharp::objective_dp(mdp, SoftmaxTabular(5, 2, run.final_params));
  EXPECT_GE(j, 0.95 * sharp::value_iteration_optimum(mdp));
}

TEST(SharpRun, ContinuousPolicyRuns) {
  const auto env = sharp::ContinuousEnv::make("point_mass", {{"horizon", 10.0}});
  const sharp::GaussianMlp pi(env.state_dim(), env.action_dim(), {4, 4}, 0.0, 1);
  sharp::Rng rng(7);
  const auto run = sharp::sharp_run(sharp::SharpConfig{1.5, 0.1, 20}, env, pi, rng);
  EXPECT_EQ(run.record.trajectories(), 39);
  EXPECT_TRUE(run.final_params.allFinite());
}

TEST(Reinforce, ZeroRewardNeverMoves) {
  const TabularMdp mdp = zero_reward(sharp::gridworld5());
  sharp::Rng rng(8);
  const auto run = sharp::reinforce_run(sharp::ReinforceConfig{0.5, 4, 50}, mdp, SoftmaxTabular::for_mdp(mdp), rng);
  EXPECT_EQ(run.final_params, ParamVector::Zero(10));
  EXPECT_EQ(run.record.trajectories(), 200);
}

TEST(Reinforce, BanditSignTest) {
  const TabularMdp mdp = sharp::testing::bandit({1.0, 0.0});
  int improved = 0;
  double mean_change = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    sharp::Rng rng(seed);
    const auto run = sharp::reinforce_run(sharp::ReinforceConfig{0.5, 1, 1}, mdp, SoftmaxTabular(1, 2), rng);
    const double p0 = SoftmaxTabular(1, 2, run.final_params).probabilities(0)[0];
    improved += p0 > 0.5;
    mean_change += (p0 - 0.5) / 100.0;
  }
  // action 1 has zero reward so it leaves theta unchanged; action 0 always helps
  EXPECT_GT(mean_change, 0.0);
  EXPECT_GT(improved, 30);
}

TEST(Reinforce, BaselineReducesVariance) {
  const TabularMdp mdp = sharp::gridworld5();
  sharp::Rng rng(9);
  const SoftmaxTabular pi(5, 2, sharp::testing::random_params(10, rng, 0.5));
  std::vector<sharp::TabularTrajectory> fit_set;
  for (int i = 0; i < 500; ++i) fit_set.push_back(sharp::sample_trajectory(mdp, pi, mdp.horizon(), rng));
  const auto baseline = sharp::baseline_fit(mdp, std::span<const sharp::TabularTrajectory>(fit_set), mdp.gamma());

  constexpr int n = 10'000;
  ParamVector plain_sum = ParamVector::Zero(10), plain_sq = ParamVector::Zero(10);
  ParamVector base_sum = ParamVector::Zero(10), base_sq = ParamVector::Zero(10);
  for (int i = 0; i < n; ++i) {
    const auto traj = sharp::sample_trajectory(mdp, pi, mdp.horizon(), rng);
    const ParamVector a = sharp::pg_estimate(traj, pi, mdp.gamma());
    const ParamVector b = sharp::pg_estimate_with_baseline(traj, pi, mdp.gamma(), sharp::baseline_values(baseline, mdp, traj));
    plain_sum += a;
    plain_sq += a.cwiseProduct(a);
    base_sum += b;
    base_sq += b.cwiseProduct(b);
  }
  const double plain_var = (plain_sq / n - (plain_sum / n).cwiseAbs2()).sum();
  const double base_var = (base_sq / n - (base_sum / n).cwiseAbs2()).sum();
  EXPECT_LE(base_var, plain_var);
}

TEST(Reinforce, BaselineRunIsAccountedAndFinite) {
  const auto env = sharp::ContinuousEnv::make("point_mass", {{"horizon", 10.0}});
  const sharp::GaussianLinear pi(env.state_dim(), env.action_dim(), 0.0);
  sharp::Rng rng(10);
  const auto run = sharp::reinforce_run(sharp::ReinforceConfig{0.01, 5, 10, true}, env, pi, rng);
  EXPECT_EQ(run.record.trajectories(), 50);
  EXPECT_TRUE(run.final_params.allFinite());
}

TEST(LinearBaseline, ConstantTargetsAndErrors) {
  const TabularMdp mdp = sharp::gridworld5(4, 0.5);
  sharp::Rng rng(11);
  std::vector<sharp::TabularTrajectory> trajs;
  std::uniform_int_distribution<int> state(0, 4);
  for (int i = 0; i < 20; ++i) {
    sharp::TabularTrajectory t;
    for (int h = 0; h < 4; ++h) {
      t.states.push_back(state(rng));
      t.actions.push_back(0);
      t.rewards.push_back(0.0);
    }
    t.rewards.back() = 1.5 / std::pow(0.5, 3);  // every reward-to-go equals 1.5
    trajs.push_back(t);
  }
  const auto fit = sharp::baseline_fit(mdp, std::span<const sharp::TabularTrajectory>(trajs), 0.5);
  for (int s = 0; s < 5; ++s) {
    for (int h = 0; h < 4; ++h) EXPECT_NEAR(fit.predict(mdp.observation(s), h, 4), 1.5, 1e-6);
  }
  EXPECT_EQ(sharp::LinearBaseline().predict(mdp.observation(0), 0, 4), 0.0);
  EXPECT_THROW((void)sharp::baseline_fit(mdp, std::span<const sharp::TabularTrajectory>(), 0.5), sharp::invalid_argument);
}

TEST(LinearBaseline, FitNoWorseThanZero) {
  const auto env = sharp::ContinuousEnv::make("pendulum", {{"horizon", 30.0}});
  const sharp::GaussianLinear pi(env.state_dim(), env.action_dim(), 0.0);
  sharp::Rng rng(12);
  using Traj = sharp::Trajectory<Eigen::VectorXd, Eigen::VectorXd>;
  std::vector<Traj> trajs;
  for (int i = 0; i < 30; ++i) trajs.push_back(sharp::sample_trajectory(env, pi, env.horizon(), rng));
  const auto fit = sharp::baseline_fit(env, std::span<const Traj>(trajs), env.gamma());
  double fit_res = 0.0;
  double zero_res = 0.0;
  for (const auto& t : trajs) {
    const auto psi = sharp::rewards_to_go(t.rewards, env.gamma());
    const auto b = sharp::baseline_values(fit, env, t);
    for (std::size_t h = 0; h < psi.size(); ++h) {
      fit_res += (psi[h] - b[h]) * (psi[h] - b[h]);
      zero_res += psi[h] * psi[h];
    }
  }
  EXPECT_LE(fit_res, zero_res);
}

TEST(StormIs, CorrectionVanishesForIdenticalPolicies) {
  const TabularMdp mdp = sharp::gridworld5();
  sharp::Rng rng(13);
  const SoftmaxTabular pi(5, 2, sharp::testing::random_params(10, rng));
  for (int i = 0; i < 10; ++i) {
    const auto traj = sharp::sample_trajectory(mdp, pi, mdp.horizon(), rng);
    EXPECT_EQ(sharp::is_correction(traj, pi, pi, mdp.gamma()), ParamVector::Zero(10));
  }
}

TEST(StormIs, FullMomentumIsAReinforceStep) {
  const TabularMdp mdp = sharp::gridworld5();
  constexpr long iterations = 30;
  sharp::Rng rng(14);
  const auto run = sharp::storm_is_run(sharp::StormIsConfig{1e9, 0.2, iterations}, mdp, SoftmaxTabular::for_mdp(mdp), rng);

  // replay: alpha_t = 1 makes v_t = g(tau_t; theta_t)
  sharp::Rng replay(14);
  (void)std::uniform_int_distribution<long>(0, iterations - 1)(replay);
  SoftmaxTabular pi = SoftmaxTabular::for_mdp(mdp);
  for (long t = 0; t < iterations; ++t) {
    const auto traj = sharp::sample_trajectory(mdp, pi, mdp.horizon(), replay);
    const double eta = t == 0 ? 0.2 : sharp::schedules(t, 1e9, 0.2).eta;
    pi = pi.with_params(pi.params() + eta * sharp::pg_estimate(traj, pi, mdp.gamma()));
  }
  EXPECT_LE((run.final_params - pi.params()).norm(), 1e-12);
}

TEST(StormIs, MomentumLowersVarianceAtAFixedIterate) {
  const TabularMdp mdp = sharp::gridworld5();
  sharp::Rng init(15);
  const SoftmaxTabular pi(5, 2, sharp::testing::random_params(10, init, 0.5));
  constexpr int replicas = 10'000;
  // eta0 = 0 pins the iterate, so v_10 and a single g are compared at the same theta
  const ParamVector mean_g = [&] {
    sharp::Rng rng(16);
    ParamVector s = ParamVector::Zero(10);
    for (int i = 0; i < 20'000; ++i) s += sharp::pg_estimate(sharp::sample_trajectory(mdp, pi, mdp.horizon(), rng), pi, mdp.gamma());
    return ParamVector(s / 20'000);
  }();
  double storm_var = 0.0;
  double single_var = 0.0;
  sharp::Rng rng(17);
  for (int r = 0; r < replicas; ++r) {
    sharp::ExactOracle capture{nullptr, [&](const ParamVector&) { return mean_g; }};
    const auto run = sharp::storm_is_run(sharp::StormIsConfig{1.0, 0.0, 10}, mdp, pi, rng, &capture);
    storm_var += *run.record.rows.back().eps_norm_sq / replicas;
    single_var += *run.record.rows.front().eps_norm_sq / replicas;
  }
  EXPECT_LT(storm_var, single_var);
}

TEST(VrFramework, SingleCheckpointPeriodIsBatchReinforce) {
  const TabularMdp mdp = sharp::gridworld5();
  sharp::VrFrameworkConfig vr;
  vr.q = 1;
  vr.batch_check = 6;
  vr.step_size = 0.05;
  vr.iterations = 40;
  sharp::Rng a(18);
  const auto framework = sharp::vr_framework_run(vr, mdp, SoftmaxTabular::for_mdp(mdp), a);
  sharp::Rng b(18);
  const auto reinforce = sharp::reinforce_run(sharp::ReinforceConfig{0.05, 6, 40}, mdp, SoftmaxTabular::for_mdp(mdp), b);
  EXPECT_LE((framework.final_params - reinforce.final_params).norm(), 1e-12);
  EXPECT_EQ(framework.record.trajectories(), 240);
}

TEST(VrFramework, TrajectoryAccounting) {
  const TabularMdp mdp = sharp::gridworld5();
  sharp::VrFrameworkConfig vr;
  vr.q = 5;
  vr.batch = 3;
  vr.batch_check = 11;
  vr.iterations = 23;
  for (auto c : {sharp::Correction::importance_sampling, sharp::Correction::hessian}) {
    vr.correction = c;
    sharp::Rng rng(19);
    const auto run = sharp::vr_framework_run(vr, mdp, SoftmaxTabular::for_mdp(mdp), rng);
    long prev = 0;
    for (const auto& row : run.record.rows) {
      EXPECT_EQ(row.trajectories - prev, row.t % 5 == 0 ? 11 : 3);
      prev = row.trajectories;
    }
  }
}

TEST(VrFramework, PageCheckpointsFollowTheCoin) {
  const TabularMdp mdp = sharp::gridworld5();
  sharp::VrFrameworkConfig vr;
  vr.batch = 2;
  vr.batch_check = 9;
  vr.page_prob = 0.4;
  vr.iterations = 400;
  sharp::Rng rng(20);
  const auto run = sharp::vr_framework_run(vr, mdp, SoftmaxTabular::for_mdp(mdp), rng);
  long prev = 0;
  int checkpoints = 0;
  for (const auto& row : run.record.rows) {
    const long used = row.trajectories - prev;
    ASSERT_TRUE(used == 9 || used == 2);
    checkpoints += used == 9;
    if (row.t == 0) {
      EXPECT_EQ(used, 9);
    }
    prev = row.trajectories;
  }
  // Binomial(399, 0.4) plus the forced first checkpoint
  EXPECT_NEAR(checkpoints, 1 + 399 * 0.4, 3.0 * std::sqrt(399 * 0.24) + 1);
}

TEST(VrFramework, HessianCorrectionWithZeroDisplacementKeepsEstimate) {
  const TabularMdp mdp = sharp::two_state_mdp();
  const auto oracle = enumeration_oracle(mdp);
  sharp::VrFrameworkConfig vr;
  vr.q = 10;
  vr.batch = 2;
  vr.batch_check = 4;
  vr.correction = sharp::Correction::hessian;
  vr.step_size = 0.0;
  vr.iterations = 10;
  sharp::Rng rng(21);
  const auto run = sharp::vr_framework_run(vr, mdp, SoftmaxTabular::for_mdp(mdp), rng, &oracle);
  for (const auto& row : run.record.rows) EXPECT_EQ(*row.eps_norm_sq, *run.record.rows.front().eps_norm_sq);
}

TEST(VrFramework, CorrectionsAreUnbiasedForTheGradientDifference) {
  const TabularMdp mdp = sharp::two_state_mdp();
  sharp::Rng rng(22);
  const SoftmaxTabular prev(2, 2, sharp::testing::random_params(4, rng));
  const SoftmaxTabular curr(2, 2, sharp::testing::random_params(4, rng));
  const ParamVector target = sharp::exact_grad(mdp, curr);
  const ParamVector h_prev = sharp::exact_grad(mdp, prev);

  ParamVector is_update = h_prev;
  for (const auto& [traj, p] : sharp::enumerate_trajectories(mdp, curr, mdp.horizon())) {
    is_update += p * sharp::is_correction(traj, curr, prev, mdp.gamma());
  }
  EXPECT_LE(sharp::relative_error(is_update, target), 1e-4);

  const auto report = sharp::unbiasedness_report(mdp, curr, prev.params(), curr.params());
  EXPECT_LE(sharp::relative_error(ParamVector(h_prev + report.integral), target), 1e-4);
}

TEST(Algorithms, RejectBadConfigs) {
  const TabularMdp mdp = sharp::two_state_mdp();
  sharp::Rng rng(23);
  const auto pi = SoftmaxTabular::for_mdp(mdp);
  EXPECT_THROW((void)sharp::sharp_run(sharp::SharpConfig{1.0, 0.1, 0}, mdp, pi, rng), sharp::invalid_argument);
  EXPECT_THROW((void)sharp::sharp_run(sharp::SharpConfig{1.0, -0.1, 5}, mdp, pi, rng), sharp::invalid_argument);
  EXPECT_THROW((void)sharp::reinforce_run(sharp::ReinforceConfig{0.1, 0, 5}, mdp, pi, rng), sharp::invalid_argument);
  sharp::VrFrameworkConfig vr;
  vr.q = 0;
  EXPECT_THROW((void)sharp::vr_framework_run(vr, mdp, pi, rng), sharp::invalid_argument);
  vr.q = 2;
  vr.page_prob = 1.5;
  EXPECT_THROW((void)sharp::vr_framework_run(vr, mdp, pi, rng), sharp::invalid_argument);
}

}  // namespace
