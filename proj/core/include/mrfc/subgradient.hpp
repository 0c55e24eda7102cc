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

#ifndef MRFC_SUBGRADIENT_HPP_
#define MRFC_SUBGRADIENT_HPP_

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "mrfc/network.hpp"
#include "mrfc/objective.hpp"
#include "mrfc/solver.hpp"

namespace mrfc {

// Projected subgradient descent on the dual of the routing/flow-control
// problem with flow balance relaxed to outflow - inflow >= rate. Prices are
// stored node-major, u[n * F + f], and stay at zero at each destination.
struct SubgradientConfig {
  double step_a = 1.0;  // pi_k = step_a / (step_b + k) ...
  double step_b = 100.0;
  bool constant_step = false;  // ... or pi_k = step_a when set
  double initial_price = 1.0;
  double s_max = 0.0;  // 0 selects 10 * max capacity
  int max_iterations = 200000;
  // Stop when the best dual value improved by less than rel_tol (relative)
  // over the last `window` iterations; rel_tol = 0 disables the test.
  double rel_tol = 0.0;
  int window = 1000;
  int record_every = 1;
  // Stop as soon as the best dual value is at or below this.
  std::optional<double> target_dual;

  void validate() const;
};

// argmax { U(s) - price * s : 0 <= s <= s_max }.
double flow_control_subproblem(double price, const UtilitySpec& utility, double s_max);

// Winner-takes-capacity allocation: the session with the largest positive
// price difference u_tx - u_rx (lowest index on ties) gets all of C_l.
std::vector<double> routing_subproblem(std::span<const double> price_diff,
                                       double capacity);

// max(u - step * d, 0) componentwise.
std::vector<double> subgradient_step(std::span<const double> u,
                                     std::span<const double> d, double step);

struct DualEvaluation {
  double value = 0.0;
  PrimalPoint y;                 // maximizers of the Lagrangian
  std::vector<double> subgradient;  // d[n * F + f], zero at destinations
};
DualEvaluation evaluate_dual(const Instance& instance, std::span<const double> u,
                             double s_max);
// The Lagrangian at (y, u) written out without separating by entity.
double lagrangian(const Instance& instance, const PrimalPoint& y,
                  std::span<const double> u);

struct SubgradientResult {
  std::vector<double> u;
  PrimalPoint average;  // running average of the Lagrangian maximizers
  RunTrace trace;
  int iterations = 0;
  double best_dual = 0.0;
  int best_iteration = 0;
};
SubgradientResult subgradient_solve(const Instance& instance,
                                    const SubgradientConfig& config);

}  // namespace mrfc

#endif  // MRFC_SUBGRADIENT_HPP_
