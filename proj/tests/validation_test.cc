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


#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mrfc/objective.hpp"
#include "mrfc/validation.hpp"

namespace mrfc {
namespace {

TEST(ValidationTest, HealthyInstancesPassEveryCheck) {
  for (const Instance& inst : {testing::five_node_instance(), testing::random_instance(2, 8, 2)}) {
    ValidationOptions opt;
    opt.random_points = 5;
    opt.mode_iterations = 5;
    const auto results = validate_instance(inst, opt);
    EXPECT_GE(results.size(), 8u);
    for (const CheckResult& r : results) EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
  }
}

TEST(ValidationTest, InfeasibleInstanceFailsTheInitializerCheckWithoutThrowing) {
  ValidationOptions opt;
  opt.random_points = 2;
  std::vector<CheckResult> results;
  ASSERT_NO_THROW(results = validate_instance(testing::six_link_instance(2), opt));
  bool any_failed = false;
  for (const CheckResult& r : results) any_failed |= !r.passed;
  EXPECT_TRUE(any_failed);
}

TEST(ValidationTest, RandomInteriorPointIsStrictlyInterior) {
  std::mt19937_64 rng(91);
  const Instance inst = testing::random_instance(4, 10, 3);
  for (int k = 0; k < 20; ++k) EXPECT_TRUE(is_interior(inst, random_interior_point(inst, rng)));
}

}  // namespace
}  // namespace mrfc
