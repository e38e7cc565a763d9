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

#include <chrono>
#include <random>
#include <vector>

#include "sharp/autodiff.hpp"
#include "sharp/oracle.hpp"

namespace {

using sharp::ParamVector;

// Scalar 2-layer tanh MLP with a fixed input; parameters are all weights.
struct MlpScalar {
  int in = 3;
  int hidden = 5;
  Eigen::VectorXd x;

  [[nodiscard]] Eigen::Index dim() const { return hidden * in + hidden + hidden + 1; }

  template <class Tape>
  auto operator()(Tape& tape, std::span<const typename Tape::Var> p) const {
    using Var = typename Tape::Var;
    std::vector<Var> xs;
    for (int j = 0; j < in; ++j) xs.push_back(tape.constant(x[j]));
    std::vector<Var> h;
    const std::size_t b1 = static_cast<std::size_t>(hidden * in);
    for (int i = 0; i < hidden; ++i) {
      h.push_back(tanh(tape.dot(p.subspan(static_cast<std::size_t>(i * in), static_cast<std::size_t>(in)), xs,
                                p[b1 + static_cast<std::size_t>(i)])));
    }
    const std::size_t w2 = b1 + static_cast<std::size_t>(hidden);
    Var out = tape.dot(p.subspan(w2, static_cast<std::size_t>(hidden)), h, p[w2 + static_cast<std::size_t>(hidden)]);
    // exercise log/exp/square as well
    return square(out) + log(exp(out) + 1.0);
  }

  // Same function in plain doubles, for finite differences.
  [[nodiscard]] double eval(const ParamVector& p) const {
    Eigen::VectorXd h(hidden);
    for (int i = 0; i < hidden; ++i) {
      double z = p[hidden * in + i];
      for (int j = 0; j < in; ++j) z += p[i * in + j] * x[j];
      h[i] = std::tanh(z);
    }
    const int w2 = hidden * in + hidden;
    double out = p[w2 + hidden];
    for (int i = 0; i < hidden; ++i) out += p[w2 + i] * h[i];
    return out * out + std::log(std::exp(out) + 1.0);
  }
};

MlpScalar random_mlp(sharp::Rng& rng, int hidden) {
  MlpScalar f;
  f.hidden = hidden;
  f.x = Eigen::VectorXd::NullaryExpr(f.in, [&] { return std::normal_distribution<double>()(rng); });
  return f;
}

ParamVector random_vector(Eigen::Index n, sharp::Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  return ParamVector::NullaryExpr(n, [&] { return normal(rng); });
}

auto dot_self = [](auto& tape, auto p) {
  using Var = typename std::remove_cvref_t<decltype(tape)>::Var;
  std::vector<Var> terms;
  for (const auto& v : p) terms.push_back(v * v);
  return tape.sum(terms);
};

TEST(Autodiff, GradOfDotWithSelf) {
  ParamVector theta(2);
  theta << 1.0, 2.0;
  const ParamVector g = sharp::ad::grad(dot_self, theta);
  EXPECT_DOUBLE_EQ(g[0], 2.0);
  EXPECT_DOUBLE_EQ(g[1], 4.0);
}

TEST(Autodiff, ConstantFunctionHasZeroGradient) {
  ParamVector theta(3);
  theta << 1.0, -2.0, 0.5;
  const ParamVector g = sharp::ad::grad([](auto& tape, auto) { return tape.constant(4.2) * 2.0; }, theta);
  EXPECT_EQ(g, ParamVector::Zero(3));
}

TEST(Autodiff, HvpOfHalfSquaredNormIsIdentity) {
  ParamVector theta(3);
  theta << 0.3, -1.0, 2.0;
  ParamVector v(3);
  v << 1.5, 0.25, -4.0;
  auto half = [](auto& tape, auto p) { return 0.5 * dot_self(tape, p); };
  const ParamVector hv = sharp::ad::hvp(half, theta, v);
  EXPECT_LT((hv - v).norm(), 1e-15);
  EXPECT_EQ(sharp::ad::hvp(half, theta, ParamVector::Zero(3)), ParamVector::Zero(3));
}

TEST(Autodiff, GradMatchesFiniteDifferencesOnRandomMlp) {
  sharp::Rng rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_mlp(rng, 4 + trial);
    const ParamVector theta = random_vector(f.dim(), rng, 0.5);
    const ParamVector g = sharp::ad::grad(f, theta);
    const ParamVector fd = sharp::fd_grad([&](const ParamVector& p) { return f.eval(p); }, theta, 1e-5);
    EXPECT_LE(sharp::relative_error(g, fd), 1e-6) << "trial " << trial;
  }
}

TEST(Autodiff, HvpMatchesDirectionalFiniteDifferencesOfGrad) {
  sharp::Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = random_mlp(rng, 4 + trial);
    const ParamVector theta = random_vector(f.dim(), rng, 0.5);
    const ParamVector v = random_vector(f.dim(), rng);
    const ParamVector hv = sharp::ad::hvp(f, theta, v);
    const ParamVector fd =
        sharp::fd_directional([&](const ParamVector& p) { return sharp::ad::grad(f, p); }, theta, v, 1e-4);
    EXPECT_LE(sharp::relative_error(hv, fd), 1e-4) << "trial " << trial;
  }
}

TEST(Autodiff, HvpIsLinearAndSymmetric) {
  sharp::Rng rng(3);
  const auto f = random_mlp(rng, 6);
  for (int trial = 0; trial < 20; ++trial) {
    const ParamVector theta = random_vector(f.dim(), rng, 0.5);
    const ParamVector u = random_vector(f.dim(), rng);
    const ParamVector v = random_vector(f.dim(), rng);
    const double a = 0.7;
    const double b = -1.3;
    const ParamVector lhs = sharp::ad::hvp(f, theta, a * u + b * v);
    const ParamVector rhs = a * sharp::ad::hvp(f, theta, u) + b * sharp::ad::hvp(f, theta, v);
    EXPECT_LE((lhs - rhs).norm(), 1e-10 * std::max(1.0, rhs.norm()));
    EXPECT_NEAR(u.dot(sharp::ad::hvp(f, theta, v)), v.dot(sharp::ad::hvp(f, theta, u)), 1e-8);
  }
}

TEST(Autodiff, ValueGradHvpAgreesWithSeparateCalls) {
  sharp::Rng rng(5);
  const auto f = random_mlp(rng, 5);
  const ParamVector theta = random_vector(f.dim(), rng, 0.5);
  const ParamVector v = random_vector(f.dim(), rng);
  const auto all = sharp::ad::value_grad_hvp(f, theta, v);
  EXPECT_NEAR(all.value, f.eval(theta), 1e-13);
  EXPECT_LE((all.grad - sharp::ad::grad(f, theta)).norm(), 1e-13);
}

TEST(Tape, IsTopologicallyOrderedAndReplaysBitForBit) {
  sharp::Rng rng(9);
  const auto f = random_mlp(rng, 8);
  const ParamVector theta = random_vector(f.dim(), rng, 0.5);
  const ParamVector v = random_vector(f.dim(), rng);

  sharp::ad::Tape<double> tape;
  std::vector<sharp::ad::Tape<double>::Var> params;
  for (Eigen::Index i = 0; i < theta.size(); ++i) params.push_back(tape.input(theta[i]));
  const auto out = f(tape, std::span<const sharp::ad::Tape<double>::Var>(params));
  EXPECT_TRUE(tape.topologically_ordered());
  const auto replayed = tape.replay();
  EXPECT_EQ(replayed.at(out.index()), tape.value(out));

  sharp::ad::Tape<sharp::ad::Dual> dual_tape;
  std::vector<sharp::ad::Tape<sharp::ad::Dual>::Var> dparams;
  for (Eigen::Index i = 0; i < theta.size(); ++i) dparams.push_back(dual_tape.input({theta[i], v[i]}));
  const auto dout = f(dual_tape, std::span<const sharp::ad::Tape<sharp::ad::Dual>::Var>(dparams));
  const auto dreplayed = dual_tape.replay();
  EXPECT_EQ(dreplayed.at(dout.index()), dual_tape.value(dout));
}

TEST(Tape, ConstantsHaveZeroTangent) {
  sharp::ad::Tape<sharp::ad::Dual> tape;
  const auto c = tape.constant(3.0);
  EXPECT_EQ(tape.value(c).tangent, 0.0);
}

TEST(Tape, RejectsMismatchedDotOperands) {
  sharp::ad::Tape<double> tape;
  std::vector<sharp::ad::Tape<double>::Var> w{tape.input(1.0), tape.input(2.0)};
  std::vector<sharp::ad::Tape<double>::Var> x{tape.input(1.0)};
  EXPECT_THROW(tape.dot(w, x, tape.constant(0.0)), sharp::invalid_argument);
}

TEST(Autodiff, HvpRejectsDirectionOfWrongLength) {
  EXPECT_THROW(sharp::ad::hvp(dot_self, ParamVector::Ones(3), ParamVector::Ones(2)), sharp::invalid_argument);
}

TEST(Autodiff, HvpCostIsConstantMultipleOfGrad) {
  sharp::Rng rng(21);
  const auto f = random_mlp(rng, 16);
  const ParamVector theta = random_vector(f.dim(), rng, 0.5);
  const ParamVector v = random_vector(f.dim(), rng);
  constexpr int reps = 2000;
  using clock = std::chrono::steady_clock;
  double sink = 0.0;
  auto t0 = clock::now();
  for (int i = 0; i < reps; ++i) sink += sharp::ad::grad(f, theta)[0];
  auto t1 = clock::now();
  for (int i = 0; i < reps; ++i) sink += sharp::ad::hvp(f, theta, v)[0];
  auto t2 = clock::now();
  const double grad_time = std::chrono::duration<double>(t1 - t0).count();
  const double hvp_time = std::chrono::duration<double>(t2 - t1).count();
  EXPECT_LE(hvp_time, 6.0 * grad_time) << "sink " << sink;
}

}  // namespace
