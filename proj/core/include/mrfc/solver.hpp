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

#ifndef MRFC_SOLVER_HPP_
#define MRFC_SOLVER_HPP_

#include <functional>
#include <span>
#include <vector>

#include "mrfc/dual_splitting.hpp"
#include "mrfc/network.hpp"
#include "mrfc/newton_primal.hpp"
#include "mrfc/objective.hpp"
#include "mrfc/runtime.hpp"

namespace mrfc {

struct LineSearchParams {
  double sigma = 0.1;   // sufficient-decrease fraction, in (0, 1/2)
  double beta = 0.5;    // backtracking factor, in (0, 1)
  double fraction_to_boundary = 0.99;
  double eta = 0.25;    // unit steps once the decrement is at or below this
  double min_step = 1e-12;

  void validate() const;
};

enum class ExecutionMode { kDistributed, kCentralized };

struct SolverConfig {
  BarrierConfig barrier;
  // The flow-balance residual after a full step equals the inner residual,
  // so the solver runs the dual iteration much tighter than the splitting
  // default.
  SplitConfig split{0.55, 1e-10, 1000000};
  LineSearchParams line_search;
  double eps_lambda = 1e-6;
  int max_newton_per_stage = 200;
  int max_iterations = 5000;
  // Stop after exactly this many Newton iterations when positive, regardless
  // of the decrement (fixed-time stopping).
  int fixed_iterations = 0;
  ExecutionMode mode = ExecutionMode::kDistributed;
  double init_rate = 0.1;  // seed rate per session for the initializer

  void validate() const;
};

struct IterationRecord {
  int iteration = 0;  // 1-based over the whole run
  int stage = 0;      // barrier stage, 0-based
  double t = 0.0;
  double objective = 0.0;  // barrier objective after the step
  double utility = 0.0;    // sum U_f(s_f) after the step
  double decrement = 0.0;  // at the start of the iteration
  double step = 0.0;
  int inner_iterations = 0;
  double balance_residual = 0.0;
  double min_slack = 0.0;
};

struct RunTrace {
  std::vector<IterationRecord> records;
};

struct SolverState {
  PrimalPoint y;
  DualPoint w;
  double t = 1.0;
};

struct InitResult {
  PrimalPoint y;
  DualPoint w;
  bool used_phase_one = false;
  double scale = 1.0;  // uniform shrink applied to respect capacities
};

// Equal-split propagation of each session's seed rate toward its
// destination, phase-I circulations for links that stay empty, and a
// uniform shrink keeping every link at most half full. Throws
// InvalidInputError listing the (link, session) pairs that no balanced
// strictly positive flow can cover.
InitResult initialize(const Instance& instance, std::span<const double> eps);

// sqrt(dy^T H dy) from per-source and per-link sums.
double newton_decrement(const Instance& instance, const PrimalPoint& y,
                        const PrimalDirection& dir, double t);

// Largest step keeping every coordinate and slack nonnegative (inf if none
// binds).
double boundary_step(const Instance& instance, const PrimalPoint& y,
                     const PrimalDirection& dir);
double directional_slope(const Instance& instance, const PrimalPoint& y,
                         const PrimalDirection& dir, double t);
PrimalPoint step_point(const PrimalPoint& y, const PrimalDirection& dir,
                       double step);

// Step-size rule shared by both execution modes. phi(step) is the merit
// f + penalty * ||M~ y~||_1 along the direction (+inf outside the domain)
// and f0 its value at step 0. slope is the derivative of f alone; the Armijo
// test uses slope - penalty * infeasibility, the merit's derivative when the
// direction removes the balance residual infeasibility = ||M~ y~||_1.
struct StepQuery {
  double decrement = 0.0;
  double slope = 0.0;
  double boundary = 0.0;
  double f0 = 0.0;
  double penalty = 0.0;
  double infeasibility = 0.0;
  std::function<double(double)> phi;
};
double choose_step(const StepQuery& query, const LineSearchParams& params);

// Penalty weight for the balance term of the merit: twice the largest
// multiplier magnitude, which exceeds what the exact penalty needs.
inline double merit_penalty(double largest_multiplier) {
  return 2.0 * largest_multiplier;
}

double line_search(const Instance& instance, const PrimalPoint& y,
                   const PrimalDirection& dir, double t,
                   const LineSearchParams& params, double penalty = 0.0);

struct IterationOutcome {
  SolverState state;
  IterationRecord record;
  PrimalDirection direction;
};
// One centralized-reference iteration (structured assembly + splitting
// solve warm-started from state.w).
IterationOutcome newton_iteration(const Instance& instance, const SolverState& state,
                                  const SolverConfig& config);

struct Solution {
  PrimalPoint y;
  DualPoint w;
  double t = 0.0;
  double decrement = 0.0;
  int iterations = 0;
  int stages = 0;
  bool stopped_by_observer = false;
};

struct SolveResult {
  Solution solution;
  RunTrace trace;
  LocalityReport locality;
};

// Optional per-iteration hook: called after each iteration with the state
// and the direction that produced it. Returning false ends the run there.
using IterationObserver = std::function<bool(const IterationRecord&, const SolverState&,
                                             const PrimalDirection&)>;

SolveResult barrier_solve(const Instance& instance, const SolverConfig& config,
                          const IterationObserver& observer = {});
SolveResult run_distributed(const Instance& instance, SolverConfig config,
                            const IterationObserver& observer = {});

// m = L + F + L F, the number of inequality constraints.
int inequality_count(const Instance& instance);

}  // namespace mrfc

#endif  // MRFC_SOLVER_HPP_
