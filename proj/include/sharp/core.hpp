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

#ifndef SHARP_CORE_HPP
#define SHARP_CORE_HPP

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace sharp {

/// Flat parameter vector theta in R^d. The flattening order of each policy
/// family is documented on the policy type.
using ParamVector = Eigen::VectorXd;

/// All sampling goes through one engine type so seeded runs are reproducible.
using Rng = std::mt19937_64;

class invalid_argument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Enumeration or allocation would exceed a configured cap.
class resource_limit_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A likelihood ratio was requested where the denominator policy assigns
/// zero probability to an observed action.
class degenerate_support_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite entries appeared in a parameter or estimate vector.
class non_finite_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw invalid_argument(message);
}

inline const ParamVector& check_finite(const ParamVector& v, const char* what) {
  if (!v.allFinite()) throw non_finite_error(std::string(what) + ": non-finite entry");
  return v;
}

/// Relative error ||a - b|| / max(||b||, floor). The floor keeps comparisons
/// against near-zero references meaningful.
inline double relative_error(const ParamVector& a, const ParamVector& b, double floor = 1e-12) {
  return (a - b).norm() / std::max(b.norm(), floor);
}

inline double relative_error(double a, double b, double floor = 1e-12) {
  return std::abs(a - b) / std::max(std::abs(b), floor);
}

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace sharp

#endif  // SHARP_CORE_HPP
