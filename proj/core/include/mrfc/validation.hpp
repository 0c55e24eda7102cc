// Copyright 2026 The MRFC Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MRFC_VALIDATION_HPP_
#define MRFC_VALIDATION_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mrfc/network.hpp"
#include "mrfc/objective.hpp"
#include "mrfc/solver.hpp"

namespace mrfc {

// Random strictly interior point: rates in [0.1, 1] * C_min, flows such that
// every link is between 5% and 95% full. Not flow balanced.
PrimalPoint random_interior_point(const Instance& instance, std::mt19937_64& rng);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationOptions {
  double alpha = 0.55;
  double t = 1.0;
  int random_points = 20;
  int mode_iterations = 25;  // Newton iterations compared across modes
  std::uint64_t seed = 1;
};

// Runs the invariant suite on one instance: incidence structure, derivative
// checks, closed-form inverses, dual-system assembly, splitting convergence
// and certificates, local updates, decrement, initializer and the
// distributed/centralized agreement. Never throws for a failed check; each
// failure is reported in its CheckResult.
std::vector<CheckResult> validate_instance(const Instance& instance,
                                           const ValidationOptions& options);

}  // namespace mrfc

#endif  // MRFC_VALIDATION_HPP_
