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
#include "mrfc/newton_primal.hpp"
#include "mrfc/objective.hpp"
#include "mrfc/oracle.hpp"

namespace mrfc {
namespace {

using testing::random_point;
using testing::random_small_instance;

// X_l built entry by entry: diag(1 / x^2) + 11^T / delta^2.
Matrix link_hessian_by_hand(const std::vector<double>& x, double delta) {
  const std::size_t n = x.size();
  Matrix m(n, n, 1.0 / (delta * delta));
  for (std::size_t i = 0; i < n; ++i) m(i, i) += 1.0 / (x[i] * x[i]);
  return m;
}

TEST(LinkInverseTest, MatchesDenseInverseOnRandomDraws) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> log_scale(-2.0, 0.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int F = 1 + trial % 8;
    std::vector<double> x(F);
    for (auto& v : x) v = std::pow(10.0, log_scale(rng));
    const double delta = std::pow(10.0, log_scale(rng));
    const Matrix inv = invert_link_block(x, delta);
    const Matrix h = link_hessian_by_hand(x, delta);
    EXPECT_LT(oracle::inverse_residual(h, inv), 1e-10) << "F=" << F;
    const Matrix dense = oracle::invert(h);
    for (int i = 0; i < F; ++i)
      for (int j = 0; j < F; ++j)
        EXPECT_NEAR(inv(i, j), dense(i, j), 1e-9 * std::max(1.0, std::abs(dense(i, j))));
  }
}

TEST(LinkInverseTest, SingleSessionByHand) {
  // 1 / (1/x^2 + 1/d^2) = x^2 d^2 / (x^2 + d^2)
  const Matrix inv = invert_link_block(std::vector<double>{0.5}, 2.0);
  EXPECT_NEAR(inv(0, 0), 0.25 * 4.0 / 4.25, 1e-15);
}

TEST(LinkInverseTest, RejectsBoundaryPoints) {
  EXPECT_THROW(invert_link_block(std::vector<double>{0.5, 0.0}, 1.0), DomainError);
  EXPECT_THROW(invert_link_block(std::vector<double>{0.5}, 0.0), DomainError);
  EXPECT_THROW(invert_source_block(std::vector<double>{1.0, -2.0}), DomainError);
  EXPECT_EQ(invert_source_block(std::vector<double>{4.0})[0], 0.25);
}

TEST(DualPointTest, ReducedRoundTripKeepsDestinationsAtZero) {
  const Instance inst = testing::six_link_instance();
  const DualPoint w0 = DualPoint::Initial(inst);
  EXPECT_EQ(w0(2, 0), 0.0);
  EXPECT_EQ(w0(4, 1), 0.0);
  EXPECT_EQ(w0(4, 0), 1.0);
  std::vector<double> r(dual_dimension(inst));
  ASSERT_EQ(r.size(), 8u);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = 1.0 + i;
  const DualPoint w = DualPoint::FromReduced(inst, r);
  EXPECT_EQ(w.to_reduced(inst), r);
  for (int n = 0; n < 5; ++n)
    for (int f = 0; f < 2; ++f) {
      const int row = dual_row(inst, n, f);
      if (row < 0) {
        EXPECT_EQ(n, inst.session(f).dst);
        EXPECT_EQ(w(n, f), 0.0);
      } else {
        EXPECT_EQ(w(n, f), r[row]);
      }
    }
  EXPECT_THROW(DualPoint::FromReduced(inst, std::vector<double>(3)), InvalidInputError);
}

TEST(PrimalDirectionTest, MatchesDenseKktWithItsDuals) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 15; ++trial) {
    const Instance inst = random_small_instance(rng, 6, 1 + trial % 3, 3);
    const PrimalPoint y = random_point(inst, rng);
    const double t = std::pow(10.0, trial % 3);
    const oracle::KktSolution kkt = oracle::kkt_solve(inst, y, t);
    const PrimalDirection dir = primal_direction(inst, y, kkt.w, t);
    const auto flat = dir.flatten();
    for (std::size_t i = 0; i < flat.size(); ++i)
      EXPECT_NEAR(flat[i], kkt.dy[i], 1e-8 * std::max(1.0, std::abs(kkt.dy[i])));
  }
}

TEST(PrimalDirectionTest, PerEntityPiecesAgreeWithWholeDirection) {
  std::mt19937_64 rng(23);
  const Instance inst = random_small_instance(rng, 5, 3, 2);
  const PrimalPoint y = random_point(inst, rng);
  DualPoint w(inst.node_count(), 3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int n = 0; n < inst.node_count(); ++n)
    for (int f = 0; f < 3; ++f)
      if (n != inst.session(f).dst) w(n, f) = u(rng);
  const double t = 7.0;
  const PrimalDirection dir = primal_direction(inst, y, w, t);
  for (int f = 0; f < 3; ++f)
    EXPECT_DOUBLE_EQ(dir.ds[f], source_direction(inst.session(f).utility, y.s(f), t,
                                                 w(inst.session(f).src, f)));
  for (int l = 0; l < inst.link_count(); ++l) {
    const Link& k = inst.network().link(l);
    std::vector<double> wt(3), wr(3);
    for (int f = 0; f < 3; ++f) {
      wt[f] = w(k.tx, f);
      wr[f] = w(k.rx, f);
    }
    const auto dx = link_direction(y.link_flows(l), unused_capacity(inst.network(), y, l),
                                   wt, wr);
    for (int f = 0; f < 3; ++f) EXPECT_DOUBLE_EQ(dir.x(l, f, 3), dx[f]);
  }
}

TEST(PrimalDirectionTest, SourceDirectionByHand) {
  // U = log, S = t/s^2 + 1/s^2, grad = -t/s - 1/s. The balance rows read
  // s_f b - A x, so the rate column carries +1 at the source:
  // ds = -(grad + w) / S.
  const double s = 0.5, t = 2.0, w = 0.3;
  const double S = (t + 1.0) / (s * s);
  const double grad = -(t + 1.0) / s;
  EXPECT_NEAR(source_direction(UtilitySpec::Log(), s, t, w), -(grad + w) / S, 1e-15);
}

}  // namespace
}  // namespace mrfc
