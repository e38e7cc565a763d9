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

// Minimal reverse-mode automatic differentiation on an append-only tape.
//
// The tape is templated on its scalar. With `double` a reverse sweep yields
// the gradient. With `Dual` every recorded value and local partial carries a
// directional derivative along a seed vector v, so the same reverse sweep
// returns grad f in the primal parts and (hess f) v in the tangent parts
// (forward-over-reverse, Pearlmutter's construction).

#ifndef SHARP_AUTODIFF_HPP
#define SHARP_AUTODIFF_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sharp/core.hpp"

namespace sharp::ad {

struct Dual {
  double value = 0.0;
  double tangent = 0.0;

  constexpr Dual() = default;
  constexpr Dual(double v) : value(v) {}  // NOLINT: constants promote with zero tangent
  constexpr Dual(double v, double t) : value(v), tangent(t) {}

  friend constexpr Dual operator+(Dual a, Dual b) { return {a.value + b.value, a.tangent + b.tangent}; }
  friend constexpr Dual operator-(Dual a, Dual b) { return {a.value - b.value, a.tangent - b.tangent}; }
  friend constexpr Dual operator-(Dual a) { return {-a.value, -a.tangent}; }
  friend constexpr Dual operator*(Dual a, Dual b) {
    return {a.value * b.value, a.tangent * b.value + a.value * b.tangent};
  }
  friend constexpr Dual operator/(Dual a, Dual b) {
    const double q = a.value / b.value;
    return {q, (a.tangent - q * b.tangent) / b.value};
  }
  Dual& operator+=(Dual b) { return *this = *this + b; }
  friend constexpr bool operator==(Dual a, Dual b) = default;
};

inline Dual tanh(Dual x) {
  const double y = std::tanh(x.value);
  return {y, (1.0 - y * y) * x.tangent};
}
inline Dual log(Dual x) { return {std::log(x.value), x.tangent / x.value}; }
inline Dual exp(Dual x) {
  const double y = std::exp(x.value);
  return {y, y * x.tangent};
}

inline double primal(double x) { return x; }
inline double primal(Dual x) { return x.value; }

enum class Op : std::uint8_t {
  input,
  constant,
  add,
  sub,
  mul,
  neg,
  scale,  // k * x
  shift,  // x + k
  tanh,
  log,
  exp,
  square,
  dot,  // sum_i w_i x_i + b, args laid out as [w..., x..., b]
};

template <class Scalar>
class Tape {
 public:
  using scalar_type = Scalar;

  class Var {
   public:
    Var() = default;
    Var(Tape* tape, std::uint32_t index) : tape_(tape), index_(index) {}

    [[nodiscard]] std::uint32_t index() const { return index_; }
    [[nodiscard]] Tape& tape() const { return *tape_; }
    [[nodiscard]] Scalar value() const { return tape_->value(*this); }

    friend Var operator+(Var a, Var b) { return a.tape_->binary(Op::add, a, b); }
    friend Var operator-(Var a, Var b) { return a.tape_->binary(Op::sub, a, b); }
    friend Var operator*(Var a, Var b) { return a.tape_->binary(Op::mul, a, b); }
    friend Var operator-(Var a) { return a.tape_->unary(Op::neg, a); }
    friend Var operator*(double k, Var a) { return a.tape_->unary(Op::scale, a, k); }
    friend Var operator*(Var a, double k) { return k * a; }
    friend Var operator+(Var a, double k) { return a.tape_->unary(Op::shift, a, k); }
    friend Var operator+(double k, Var a) { return a + k; }
    friend Var operator-(Var a, double k) { return a + (-k); }
    friend Var tanh(Var a) { return a.tape_->unary(Op::tanh, a); }
    friend Var log(Var a) { return a.tape_->unary(Op::log, a); }
    friend Var exp(Var a) { return a.tape_->unary(Op::exp, a); }
    friend Var square(Var a) { return a.tape_->unary(Op::square, a); }

   private:
    Tape* tape_ = nullptr;
    std::uint32_t index_ = 0;
  };

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var input(Scalar value) {
    return push(Op::input, {}, 0.0, value);
  }

  Var constant(double value) { return push(Op::constant, {}, value, Scalar(value)); }

  /// Affine combination sum_i w_i x_i + bias recorded as a single node.
  Var dot(std::span<const Var> w, std::span<const Var> x, Var bias) {
    if (w.size() != x.size()) throw invalid_argument("dot: operand length mismatch");
    std::vector<std::uint32_t> args;
    args.reserve(2 * w.size() + 1);
    for (const Var& v : w) args.push_back(v.index());
    for (const Var& v : x) args.push_back(v.index());
    args.push_back(bias.index());
    return record(Op::dot, std::move(args), 0.0);
  }

  /// Sum of a non-empty list, as a chain of add nodes.
  Var sum(std::span<const Var> terms) {
    if (terms.empty()) throw invalid_argument("sum: empty operand list");
    Var acc = terms[0];
    for (std::size_t i = 1; i < terms.size(); ++i) acc = acc + terms[i];
    return acc;
  }

  /// Records a one-argument primitive; `k` is the constant of scale/shift.
  Var unary(Op op, Var a, double k = 0.0) { return record(op, {a.index()}, k); }
  Var binary(Op op, Var a, Var b) { return record(op, {a.index(), b.index()}, 0.0); }

  [[nodiscard]] Scalar value(Var v) const { return values_.at(v.index()); }
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }

  /// Reverse sweep from `output`; returns the adjoint of every node.
  [[nodiscard]] std::vector<Scalar> adjoints(Var output) const {
    std::vector<Scalar> adj(nodes_.size(), Scalar(0.0));
    adj.at(output.index()) = Scalar(1.0);
    for (std::size_t i = output.index() + 1; i-- > 0;) {
      const Node& n = nodes_[i];
      if (adj[i] == Scalar(0.0)) continue;
      for (std::uint32_t k = 0; k < n.arg_count; ++k) {
        const std::size_t slot = n.arg_offset + k;
        adj[arg_index_[slot]] += adj[i] * arg_partial_[slot];
      }
    }
    return adj;
  }

  /// Every node's inputs precede it.
  [[nodiscard]] bool topologically_ordered() const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const Node& n = nodes_[i];
      for (std::uint32_t k = 0; k < n.arg_count; ++k) {
        if (arg_index_[n.arg_offset + k] >= i) return false;
      }
    }
    return true;
  }

  /// Re-evaluates all nodes from the recorded leaves and ops.
  [[nodiscard]] std::vector<Scalar> replay() const {
    std::vector<Scalar> out(nodes_.size());
    std::vector<Scalar> args;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const Node& n = nodes_[i];
      if (n.op == Op::input || n.op == Op::constant) {
        out[i] = values_[i];
        continue;
      }
      args.clear();
      for (std::uint32_t k = 0; k < n.arg_count; ++k) args.push_back(out[arg_index_[n.arg_offset + k]]);
      out[i] = evaluate(n.op, args, n.constant);
    }
    return out;
  }

 private:
  struct Node {
    Op op;
    std::uint32_t arg_offset;
    std::uint32_t arg_count;
    double constant;
  };


  static Scalar evaluate(Op op, std::span<const Scalar> a, double k) {
    using std::exp;
    using std::log;
    using std::tanh;
    switch (op) {
      case Op::add: return a[0] + a[1];
      case Op::sub: return a[0] - a[1];
      case Op::mul: return a[0] * a[1];
      case Op::neg: return -a[0];
      case Op::scale: return Scalar(k) * a[0];
      case Op::shift: return a[0] + Scalar(k);
      case Op::tanh: return tanh(a[0]);
      case Op::log: return log(a[0]);
      case Op::exp: return exp(a[0]);
      case Op::square: return a[0] * a[0];
      case Op::dot: {
        const std::size_t n = (a.size() - 1) / 2;
        Scalar acc = a[2 * n];
        for (std::size_t i = 0; i < n; ++i) acc = acc + a[i] * a[n + i];
        return acc;
      }
      case Op::input:
      case Op::constant: break;
    }
    throw std::logic_error("autodiff: op has no evaluation rule");
  }

  // Local partial derivatives of node `op` with respect to each argument.
  static void partials(Op op, std::span<const Scalar> a, Scalar y, double k, std::vector<Scalar>& out) {
    out.clear();
    switch (op) {
      case Op::add: out = {Scalar(1.0), Scalar(1.0)}; return;
      case Op::sub: out = {Scalar(1.0), Scalar(-1.0)}; return;
      case Op::mul: out = {a[1], a[0]}; return;
      case Op::neg: out = {Scalar(-1.0)}; return;
      case Op::scale: out = {Scalar(k)}; return;
      case Op::shift: out = {Scalar(1.0)}; return;
      case Op::tanh: out = {Scalar(1.0) - y * y}; return;
      case Op::log: out = {Scalar(1.0) / a[0]}; return;
      case Op::exp: out = {y}; return;
      case Op::square: out = {Scalar(2.0) * a[0]}; return;
      case Op::dot: {
        const std::size_t n = (a.size() - 1) / 2;
        out.reserve(a.size());
        for (std::size_t i = 0; i < n; ++i) out.push_back(a[n + i]);
        for (std::size_t i = 0; i < n; ++i) out.push_back(a[i]);
        out.push_back(Scalar(1.0));
        return;
      }
      case Op::input:
      case Op::constant: return;
    }
    throw std::logic_error("autodiff: op has no partial-derivative rule");
  }

  Var record(Op op, std::vector<std::uint32_t> args, double k) {
    scratch_args_.clear();
    for (std::uint32_t idx : args) {
      if (idx >= nodes_.size()) throw invalid_argument("autodiff: operand does not belong to this tape");
      scratch_args_.push_back(values_[idx]);
    }
    const Scalar y = evaluate(op, scratch_args_, k);
    partials(op, scratch_args_, y, k, scratch_partials_);
    const auto offset = static_cast<std::uint32_t>(arg_index_.size());
    arg_index_.insert(arg_index_.end(), args.begin(), args.end());
    arg_partial_.insert(arg_partial_.end(), scratch_partials_.begin(), scratch_partials_.end());
    nodes_.push_back({op, offset, static_cast<std::uint32_t>(args.size()), k});
    values_.push_back(y);
    return Var(this, static_cast<std::uint32_t>(nodes_.size() - 1));
  }

  Var push(Op op, std::vector<std::uint32_t> args, double k, Scalar value) {
    const auto offset = static_cast<std::uint32_t>(arg_index_.size());
    nodes_.push_back({op, offset, static_cast<std::uint32_t>(args.size()), k});
    values_.push_back(value);
    return Var(this, static_cast<std::uint32_t>(nodes_.size() - 1));
  }

  std::vector<Node> nodes_;
  std::vector<Scalar> values_;
  std::vector<std::uint32_t> arg_index_;
  std::vector<Scalar> arg_partial_;
  std::vector<Scalar> scratch_args_;
  std::vector<Scalar> scratch_partials_;
};

/// Value, gradient and Hessian-vector product of one scalar function.
struct SecondOrder {
  double value = 0.0;
  ParamVector grad;
  ParamVector hvp;
};

namespace detail {

template <class Scalar, class F>
auto record_function(Tape<Scalar>& tape, F&& f, const ParamVector& theta, const ParamVector* direction) {
  using Var = typename Tape<Scalar>::Var;
  std::vector<Var> params;
  params.reserve(static_cast<std::size_t>(theta.size()));
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    if constexpr (std::is_same_v<Scalar, Dual>) {
      params.push_back(tape.input(Dual(theta[i], (*direction)[i])));
    } else {
      params.push_back(tape.input(theta[i]));
    }
  }
  Var out = f(tape, std::span<const Var>(params));
  return std::pair{out, std::move(params)};
}

}  // namespace detail

/// `f` is a generic callable `(Tape<S>& tape, std::span<const Tape<S>::Var> params) -> Var`.
template <class F>
std::pair<double, ParamVector> value_and_grad(F&& f, const ParamVector& theta) {
  Tape<double> tape;
  auto [out, params] = detail::record_function(tape, f, theta, nullptr);
  const auto adj = tape.adjoints(out);
  ParamVector g(theta.size());
  for (std::size_t i = 0; i < params.size(); ++i) g[static_cast<Eigen::Index>(i)] = adj[params[i].index()];
  return {tape.value(out), std::move(g)};
}

template <class F>
ParamVector grad(F&& f, const ParamVector& theta) {
  return value_and_grad(std::forward<F>(f), theta).second;
}

template <class F>
SecondOrder value_grad_hvp(F&& f, const ParamVector& theta, const ParamVector& v) {
  if (v.size() != theta.size()) throw invalid_argument("hvp: direction length does not match parameters");
  Tape<Dual> tape;
  auto [out, params] = detail::record_function(tape, f, theta, &v);
  const auto adj = tape.adjoints(out);
  SecondOrder r;
  r.value = tape.value(out).value;
  r.grad.resize(theta.size());
  r.hvp.resize(theta.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const Dual a = adj[params[i].index()];
    r.grad[static_cast<Eigen::Index>(i)] = a.value;
    r.hvp[static_cast<Eigen::Index>(i)] = a.tangent;
  }
  return r;
}

template <class F>
ParamVector hvp(F&& f, const ParamVector& theta, const ParamVector& v) {
  return value_grad_hvp(std::forward<F>(f), theta, v).hvp;
}

}  // namespace sharp::ad

#endif  // SHARP_AUTODIFF_HPP
