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

namespace mrfc {
namespace {

using testing::random_point;
using testing::random_small_instance;

double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

TEST(PrimalPointTest, FlattenFollowsLinkMajorIndex) {
  PrimalPoint y(3, 2);
  for (int f = 0; f < 2; ++f) y.s(f) = 10 + f;
  for (int l = 0; l < 3; ++l)
    for (int f = 0; f < 2; ++f) y.x(l, f) = l * 2 + f;
  const auto flat = y.flatten();
  const FlatIndex idx = y.index();
  ASSERT_EQ(static_cast<int>(flat.size()), idx.size());
  for (int l = 0; l < 3; ++l)
    for (int f = 0; f < 2; ++f) EXPECT_EQ(flat[idx.x(l, f)], y.x(l, f));
  EXPECT_EQ(PrimalPoint::Unflatten(flat, 3, 2), y);
}

TEST(ObjectiveTest, TwoNodeValueByHand) {
  const Instance inst = testing::two_node_instance(2.0);
  PrimalPoint y(1, 1);
  y.s(0) = 0.5;
  y.x(0, 0) = 0.5;
  const double t = 3.0;
  const double expected = -t * std::log(0.5) - std::log(1.5) - 2 * std::log(0.5);
  EXPECT_NEAR(objective_value(inst, y, t), expected, 1e-14);
  EXPECT_DOUBLE_EQ(unused_capacity(inst.network(), y, 0), 1.5);
  EXPECT_DOUBLE_EQ(link_sq_norm(inst.network(), y, 0), 0.25 + 2.25);
}

TEST(ObjectiveTest, MatchesOracleOnRandomPoints) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = random_small_instance(rng, 6, 3, 4);
    const PrimalPoint y = random_point(inst, rng);
    const double t = std::pow(10.0, trial % 4);
    const auto flat = y.flatten();
    EXPECT_LT(rel_err(objective_value(inst, y, t), oracle::objective(inst, flat, t)), 1e-12);
    const auto g = gradient(inst, y, t);
    const auto go = oracle::gradient(inst, flat, t);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_LT(rel_err(g[i], go[i]), 1e-12);
  }
}

TEST(ObjectiveTest, HessianBlocksMatchDenseOracle) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance inst = random_small_instance(rng, 5, 1 + trial % 4, 3);
    const PrimalPoint y = random_point(inst, rng);
    const double t = 1.0 + trial;
    const HessianBlocks hb = hessian_blocks(inst, y, t);
    const Matrix h = oracle::hessian(inst, y.flatten(), t);
    const FlatIndex idx = y.index();
    const int F = inst.session_count();
    for (int f = 0; f < F; ++f)
      EXPECT_LT(rel_err(hb.source[f], h(idx.s(f), idx.s(f))), 1e-12);
    for (int l = 0; l < inst.link_count(); ++l)
      for (int f = 0; f < F; ++f)
        for (int g = 0; g < F; ++g)
          EXPECT_LT(rel_err(hb.links[l](f, g), h(idx.x(l, f), idx.x(l, g))), 1e-12);
    // Block diagonal: no coupling between a rate and any flow.
    for (int f = 0; f < F; ++f)
      for (int l = 0; l < inst.link_count(); ++l)
        EXPECT_EQ(h(idx.s(f), idx.x(l, 0)), 0.0);
  }
}

TEST(ObjectiveTest, GradientAndHessianMatchFiniteDifferences) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const Instance inst = random_small_instance(rng, 5, 2, 2);
    const PrimalPoint y = random_point(inst, rng);
    const double t = 5.0;
    const auto g = gradient(inst, y, t);
    const auto fd = oracle::fd_objective_gradient(inst, y, t);
    for (std::size_t i = 0; i < g.size(); ++i)
      EXPECT_LT(std::abs(g[i] - fd[i]) / std::max(1.0, std::abs(g[i])), 1e-6);
    const HessianBlocks hb = hessian_blocks(inst, y, t);
    const Matrix fh = oracle::fd_objective_hessian(inst, y, t);
    const FlatIndex idx = y.index();
    for (int l = 0; l < inst.link_count(); ++l)
      for (int f = 0; f < 2; ++f)
        for (int k = 0; k < 2; ++k) {
          const double v = hb.links[l](f, k);
          EXPECT_LT(std::abs(v - fh(idx.x(l, f), idx.x(l, k))) / std::max(1.0, std::abs(v)),
                    1e-5);
        }
  }
}

TEST(ObjectiveTest, SourceHessianByHand) {
  EXPECT_DOUBLE_EQ(source_hessian(UtilitySpec::Log(), 0.5, 2.0), 2.0 / 0.25 + 4.0);
}

TEST(ObjectiveTest, OutsideDomainIsRejected) {
  const Instance inst = testing::two_node_instance(1.0);
  PrimalPoint y(1, 1);
  y.s(0) = 0.5;
  y.x(0, 0) = 1.5;  // exceeds capacity
  EXPECT_FALSE(is_interior(inst, y));
  EXPECT_THROW(require_interior(inst, y), DomainError);
  y.x(0, 0) = 0.5;
  EXPECT_TRUE(is_interior(inst, y));
  y.s(0) = 0.0;
  EXPECT_FALSE(is_interior(inst, y));
}

TEST(FeasibilityTest, ReportsPerSessionBalance) {
  const Instance inst = testing::six_link_instance(1);
  PrimalPoint y(6, 1);
  y.s(0) = 0.4;
  // Route 0->1->2 with 0.3 and 0->3->4->2 with 0.1: balanced.
  const double flows[6] = {0.1, 0.3, 0.1, 0.0, 0.3, 0.1};
  for (int l = 0; l < 6; ++l) y.x(l, 0) = flows[l];
  FeasibilityReport r = check_feasibility(inst, y);
  EXPECT_NEAR(r.max_balance_residual, 0.0, 1e-15);
  EXPECT_EQ(r.min_value, 0.0);
  EXPECT_FALSE(r.ok(1e-12));
  y.x(3, 0) = 0.05;  // extra 0.05 into node 4 from node 1
  r = check_feasibility(inst, y);
  // Node 1 sends 0.05 more than it receives, node 4 gets 0.05 too many.
  EXPECT_NEAR(r.max_balance_residual, 0.05, 1e-15);
  EXPECT_NEAR(r.total_balance_residual, 0.1, 1e-15);
  EXPECT_GT(r.min_slack, 0.0);
  EXPECT_TRUE(r.capacity_violations.empty());
}

TEST(BarrierConfigTest, Validation) {
  BarrierConfig c;
  EXPECT_NO_THROW(c.validate());
  c.mu = 1.0;
  EXPECT_THROW(c.validate(), InvalidInputError);
  c = {};
  c.t = 0.0;
  EXPECT_THROW(c.validate(), InvalidInputError);
}

}  // namespace
}  // namespace mrfc
