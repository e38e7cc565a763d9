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

#ifndef SHARP_SHARP_HPP
#define SHARP_SHARP_HPP

#include "sharp/algorithms.hpp"
#include "sharp/autodiff.hpp"
#include "sharp/baseline.hpp"
#include "sharp/core.hpp"
#include "sharp/environments.hpp"
#include "sharp/estimators.hpp"
#include "sharp/harness/config.hpp"
#include "sharp/harness/experiment.hpp"
#include "sharp/harness/metrics.hpp"
#include "sharp/harness/verify.hpp"
#include "sharp/mdp.hpp"
#include "sharp/oracle.hpp"
#include "sharp/policy.hpp"

#endif  // SHARP_SHARP_HPP
