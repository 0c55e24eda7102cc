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


#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mrfc/errors.hpp"
#include "mrfc/objective.hpp"
#include "mrfc/oracle.hpp"
#include "mrfc/solver.hpp"
#include "mrfc/subgradient.hpp"

namespace mrfc {
namespace {

TEST(SubproblemTest, FlowControlInvertsMarginalUtility) {
  EXPECT_DOUBLE_EQ(flow_control_subproblem(0.5, UtilitySpec::Log(), 10.0), 2.0);
  EXPECT_DOUBLE_EQ(flow_control_subproblem(0.05, UtilitySpec::Log(), 10.0), 10.0);
  EXPECT_DOUBLE_EQ(flow_control_subproblem(0.0, UtilitySpec::Log(), 10.0), 10.0);
  EXPECT_DOUBLE_EQ(flow_control_subproblem(0.5, UtilitySpec::Log(3.0), 10.0), 6.0);
  EXPECT_THROW(flow_control_subproblem(-1.0, UtilitySpec::Log(), 10.0), InvalidInputError);
}

TEST(SubproblemTest, RoutingGivesCapacityToLargestPositiveDifference) {
  EXPECT_EQ(routing_subproblem(std::vector<double>{0.1, 0.4, 0.2}, 3.0),
            (std::vector<double>{0, 3.0, 0}));
  EXPECT_EQ(routing_subproblem(std::vector<double>{0.4, 0.4}, 1.0),
            (std::vector<double>{1.0, 0}));
  EXPECT_EQ(routing_subproblem(std::vector<double>{-0.1, 0.0}, 1.0),
            (std::vector<double>{0, 0}));
}

TEST(SubproblemTest, StepProjectsOntoNonnegativeOrthant) {
  EXPECT_EQ(subgradient_step(std::vector<double>{1.0, 0.2}, std::vector<double>{2.0, -1.0},
                             0.5),
            (std::vector<double>{0.0, 0.7}));
}

std::vector<double> random_prices(const Instance& inst, std::mt19937_64& rng) {
  const int F = inst.session_count();
  std::vector<double> u(inst.node_count() * F, 0.0);
  std::uniform_real_distribution<double> d(0.01, 3.0);
  for (int n = 0; n < inst.node_count(); ++n)
    for (int f = 0; f < F; ++f)
      if (n != inst.session(f).dst) u[n * F + f] = d(rng);
  return u;
}

TEST(DualFunctionTest, EvaluationMaximizesTheLagrangian) {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = testing::random_small_instance(rng, 5, 2, 3);
    const auto u = random_prices(inst, rng);
    const double s_max = 10 * inst.network().max_capacity();
    const DualEvaluation ev = evaluate_dual(inst, u, s_max);
    EXPECT_NEAR(ev.value, lagrangian(inst, ev.y, u), 1e-12 * std::max(1.0, ev.value));
    for (int k = 0; k < 50; ++k) {
      PrimalPoint y(inst.link_count(), 2);
      for (int f = 0; f < 2; ++f) y.s(f) = 1e-3 + unit(rng) * s_max;
      for (int l = 0; l < inst.link_count(); ++l) {
        const double a = unit(rng), b = unit(rng) * (1 - a);
        y.x(l, 0) = a * inst.network().link(l).capacity;
        y.x(l, 1) = b * inst.network().link(l).capacity;
      }
      EXPECT_LE(lagrangian(inst, y, u), ev.value + 1e-12);
    }
  }
}

TEST(DualFunctionTest, SubgradientIsFiniteDifferenceOfLagrangian) {
  // L is affine in u for a fixed maximizer, so d equals dL/du exactly.
  std::mt19937_64 rng(72);
  const Instance inst = testing::five_node_instance();
  const auto u = random_prices(inst, rng);
  const DualEvaluation ev = evaluate_dual(inst, u, 10.0);
  for (std::size_t i = 0; i < u.size(); ++i) {
    auto up = u;
    up[i] += 1.0;
    EXPECT_NEAR(lagrangian(inst, ev.y, up) - lagrangian(inst, ev.y, u), ev.subgradient[i],
                1e-12);
  }
}

TEST(SubgradientSolveTest, ApproachesReferenceOptimumFromAbove) {
  const Instance inst = testing::five_node_instance();
  const InitResult init = initialize(inst, std::vector<double>(2, 0.1));
  const double optimum = oracle::barrier_reference(inst, init.y, 1.0, 1e7).utility;
  SubgradientConfig sc;
  sc.max_iterations = 30000;
  const SubgradientResult r = subgradient_solve(inst, sc);
  EXPECT_EQ(r.iterations, 30000);
  // Weak duality: every dual value bounds the optimum from above. The
  // reference sits within m / t = 4.4e-6 below the optimum.
  EXPECT_GE(r.best_dual, optimum);
  EXPECT_LT((r.best_dual - optimum) / std::abs(optimum), 1e-3);
  for (int n = 0; n < inst.node_count(); ++n)
    for (int f = 0; f < 2; ++f) {
      if (n == inst.session(f).dst) {
        EXPECT_EQ(r.u[n * 2 + f], 0.0);
      }
      EXPECT_GE(r.u[n * 2 + f], 0.0);
    }
}

TEST(SubgradientSolveTest, TargetStopsEarlyAndRunsAreDeterministic) {
  const Instance inst = testing::five_node_instance();
  SubgradientConfig sc;
  sc.max_iterations = 100000;
  const SubgradientResult full = subgradient_solve(inst, sc);
  sc.target_dual = full.best_dual + 0.01 * std::abs(full.best_dual);
  const SubgradientResult a = subgradient_solve(inst, sc);
  const SubgradientResult b = subgradient_solve(inst, sc);
  EXPECT_LT(a.iterations, full.iterations);
  EXPECT_LE(a.best_dual, *sc.target_dual);
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.u, b.u);
  EXPECT_EQ(a.average, b.average);
}

TEST(SubgradientConfigTest, Validation) {
  SubgradientConfig c;
  EXPECT_NO_THROW(c.validate());
  c.step_a = 0;
  EXPECT_THROW(c.validate(), InvalidInputError);
  c = {};
  c.max_iterations = 0;
  EXPECT_THROW(c.validate(), InvalidInputError);
  c = {};
  c.initial_price = -1;
  EXPECT_THROW(c.validate(), InvalidInputError);
}

}  // namespace
}  // namespace mrfc
