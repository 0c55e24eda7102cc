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
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "mrfc/errors.hpp"
#include "mrfc/objective.hpp"
#include "mrfc/oracle.hpp"
#include "mrfc/solver.hpp"

namespace mrfc {
namespace {

using testing::max_abs_diff;
using testing::random_point;
using testing::random_small_instance;

SolverConfig centralized() {
  SolverConfig c;
  c.mode = ExecutionMode::kCentralized;
  return c;
}

TEST(InitializerTest, BalancedInteriorAndAtMostHalfFull) {
  std::mt19937_64 rng(61);
  std::vector<Instance> cases{testing::six_link_instance(1), testing::five_node_instance(),
                              testing::two_node_instance()};
  for (int k = 0; k < 10; ++k) cases.push_back(testing::random_instance(k + 1, 10, 3));
  for (const Instance& inst : cases) {
    const InitResult init =
        initialize(inst, std::vector<double>(inst.session_count(), 0.1));
    const FeasibilityReport r = check_feasibility(inst, init.y);
    EXPECT_LT(r.max_balance_residual, 1e-12);
    EXPECT_TRUE(r.ok(1e-12));
    for (int l = 0; l < inst.link_count(); ++l) {
      double used = 0.0;
      for (int f = 0; f < inst.session_count(); ++f) used += init.y.x(l, f);
      EXPECT_LE(used, 0.5 * inst.network().link(l).capacity * (1 + 1e-12));
    }
    EXPECT_EQ(init.w, DualPoint::Initial(inst));
  }
}

TEST(InitializerTest, NoInteriorPointIsReported) {
  // Link 4->2 forces positive session-1 flow into node 2, from which no link
  // leaves, so no balanced strictly positive flow exists.
  EXPECT_THROW(initialize(testing::six_link_instance(2), std::vector<double>{0.1, 0.1}),
               InvalidInputError);
  EXPECT_THROW(initialize(testing::six_link_instance(1), std::vector<double>{0.1, 0.1}),
               InvalidInputError);
}

TEST(DecrementTest, SeparableFormulaMatchesDenseQuadraticForm) {
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = random_small_instance(rng, 5, 1 + trial % 3, 3);
    const PrimalPoint y = random_point(inst, rng);
    PrimalDirection dir;
    dir.ds.resize(inst.session_count());
    dir.dx.resize(inst.link_count() * inst.session_count());
    for (auto& v : dir.ds) v = u(rng);
    for (auto& v : dir.dx) v = u(rng);
    const double t = 1.0 + trial;
    const double dense = oracle::decrement(inst, y, dir.flatten(), t);
    EXPECT_NEAR(newton_decrement(inst, y, dir, t), dense, 1e-10 * std::max(1.0, dense));
  }
}

TEST(StepTest, BoundaryAndSlopeByHand) {
  const Instance inst = testing::two_node_instance(2.0);
  PrimalPoint y(1, 1);
  y.s(0) = 0.5;
  y.x(0, 0) = 0.5;
  PrimalDirection dir{{-1.0}, {3.0}};
  // s hits 0 at 0.5, the slack 1.5 closes at 0.5; x grows.
  EXPECT_DOUBLE_EQ(boundary_step(inst, y, dir), 0.5);
  dir = {{1.0}, {-0.25}};
  EXPECT_DOUBLE_EQ(boundary_step(inst, y, dir), 2.0);
  dir = {{1.0}, {0.0}};
  EXPECT_EQ(boundary_step(inst, y, dir), std::numeric_limits<double>::infinity());
  const double t = 2.0;
  dir = {{0.3}, {-0.2}};
  const auto g = gradient(inst, y, t);
  EXPECT_NEAR(directional_slope(inst, y, dir, t), g[0] * 0.3 + g[1] * -0.2, 1e-14);
  const PrimalPoint z = step_point(y, dir, 0.5);
  EXPECT_DOUBLE_EQ(z.s(0), 0.65);
  EXPECT_DOUBLE_EQ(z.x(0, 0), 0.4);
}

TEST(StepTest, ChooseStepRules) {
  LineSearchParams p;
  StepQuery q;
  q.phi = [](double s) { return (s - 0.3) * (s - 0.3); };
  q.f0 = 0.09;
  q.slope = -0.6;
  q.boundary = 10.0;
  q.decrement = 0.1;  // pure Newton
  EXPECT_EQ(choose_step(q, p), 1.0);
  q.decrement = 1.0;  // damped: Armijo backtracking from the unit step
  const double s = choose_step(q, p);
  EXPECT_LE(q.phi(s), q.f0 + p.sigma * s * q.slope);
  EXPECT_GT(q.phi(2 * s), q.f0 + p.sigma * 2 * s * q.slope);
  q.slope = 0.1;
  EXPECT_THROW(choose_step(q, p), ConvergenceError);
  // The penalty term turns an ascent direction for f into a descent
  // direction for the merit.
  q.penalty = 1.0;
  q.infeasibility = 0.5;
  q.phi = [](double s) { return 0.09 - 0.2 * s; };
  EXPECT_EQ(choose_step(q, p), 1.0);
  q.boundary = 0.5;
  EXPECT_DOUBLE_EQ(choose_step(q, p), 0.99 * 0.5);
  EXPECT_EQ(merit_penalty(3.0), 6.0);
}

TEST(StepTest, PureNewtonBranchStaysInterior) {
  LineSearchParams p;
  StepQuery q;
  q.decrement = 0.1;
  q.phi = [](double s) {
    return s > 0.3 ? std::numeric_limits<double>::infinity() : 0.0;
  };
  EXPECT_EQ(choose_step(q, p), 0.25);
}

TEST(BarrierSolveTest, SingleLinkFollowsCentralPath) {
  // Minimizing -t log s - log(C - s) - 2 log s gives s = (t + 2) C / (t + 3).
  const Instance inst = testing::two_node_instance(2.0);
  SolverConfig cfg = centralized();
  cfg.eps_lambda = 1e-10;
  const SolveResult r = barrier_solve(inst, cfg);
  const double t = r.solution.t;
  EXPECT_EQ(t, 100.0);
  EXPECT_NEAR(r.solution.y.s(0), (t + 2) * 2.0 / (t + 3), 1e-9);
  EXPECT_NEAR(r.solution.y.x(0, 0), r.solution.y.s(0), 1e-10);
  EXPECT_EQ(r.solution.stages, 3);
}

TEST(BarrierSolveTest, FiveNodeRunConvergesInBothModes) {
  const Instance inst = testing::five_node_instance();
  SolverConfig cfg = centralized();
  const SolveResult c = barrier_solve(inst, cfg);
  EXPECT_LT(c.solution.decrement, cfg.eps_lambda);
  EXPECT_LT(check_feasibility(inst, c.solution.y).max_balance_residual, 1e-8);
  EXPECT_TRUE(check_feasibility(inst, c.solution.y).ok(1e-8));
  EXPECT_FALSE(c.solution.stopped_by_observer);
  ASSERT_FALSE(c.trace.records.empty());
  EXPECT_EQ(static_cast<int>(c.trace.records.size()), c.solution.iterations);
  EXPECT_LT(inequality_count(inst) / c.solution.t, cfg.barrier.gap_tol);

  cfg.mode = ExecutionMode::kDistributed;
  const SolveResult d = barrier_solve(inst, cfg);
  EXPECT_EQ(d.solution.iterations, c.solution.iterations);
  EXPECT_LT(max_abs_diff(d.solution.y.flatten(), c.solution.y.flatten()), 1e-9);
  EXPECT_TRUE(d.locality.clean());
  EXPECT_GT(d.locality[Phase::kDualRound].neighbor_reads, 0);
}

TEST(BarrierSolveTest, ObjectiveDecreasesWithinEachStageOnceBalanced) {
  const Instance inst = testing::five_node_instance();
  const SolveResult r = barrier_solve(inst, centralized());
  for (std::size_t i = 1; i < r.trace.records.size(); ++i) {
    const IterationRecord& a = r.trace.records[i - 1];
    const IterationRecord& b = r.trace.records[i];
    if (a.stage == b.stage) {
      EXPECT_LE(b.objective, a.objective + 1e-7) << i;
    }
  }
}

TEST(BarrierSolveTest, MatchesDenseReferenceUtility) {
  const Instance inst = testing::five_node_instance();
  const SolveResult r = barrier_solve(inst, centralized());
  const InitResult init = initialize(inst, std::vector<double>(2, 0.1));
  const oracle::ReferenceSolution ref =
      oracle::barrier_reference(inst, init.y, 1.0, r.solution.t);
  EXPECT_NEAR(total_utility(inst, r.solution.y.rates()), ref.utility,
              1e-6 * std::max(1.0, std::abs(ref.utility)));
}

TEST(BarrierSolveTest, ObserverCanStopTheRun) {
  const Instance inst = testing::five_node_instance();
  int calls = 0;
  const SolveResult r = barrier_solve(
      inst, centralized(),
      [&](const IterationRecord& rec, const SolverState&, const PrimalDirection&) {
        ++calls;
        return rec.iteration < 3;
      });
  EXPECT_EQ(calls, 3);
  EXPECT_EQ(r.solution.iterations, 3);
  EXPECT_TRUE(r.solution.stopped_by_observer);
}

TEST(BarrierSolveTest, FixedIterationCount) {
  const Instance inst = testing::five_node_instance();
  SolverConfig cfg = centralized();
  cfg.fixed_iterations = 7;
  const SolveResult r = barrier_solve(inst, cfg);
  EXPECT_EQ(r.solution.iterations, 7);
}

TEST(BarrierSolveTest, InfeasibleInstanceIsInvalidInput) {
  EXPECT_THROW(barrier_solve(testing::six_link_instance(2), centralized()), InvalidInputError);
}

TEST(SolverConfigTest, Validation) {
  SolverConfig c;
  EXPECT_NO_THROW(c.validate());
  c.split.alpha = 0.4;
  EXPECT_THROW(c.validate(), InvalidInputError);
  c = {};
  c.line_search.sigma = 0.5;
  EXPECT_THROW(c.validate(), InvalidInputError);
  c = {};
  c.line_search.beta = 1.0;
  EXPECT_THROW(c.validate(), InvalidInputError);
  c = {};
  c.eps_lambda = 0;
  EXPECT_THROW(c.validate(), InvalidInputError);
  c = {};
  c.fixed_iterations = -1;
  EXPECT_THROW(c.validate(), InvalidInputError);
  EXPECT_THROW(barrier_solve(testing::five_node_instance(), c), InvalidInputError);
}

}  // namespace
}  // namespace mrfc
