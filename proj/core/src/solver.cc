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

#include "mrfc/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <memory>
#include <sstream>
#include <string>

#include "mrfc/errors.hpp"

namespace mrfc {

void LineSearchParams::validate() const {
  if (!(sigma > 0.0 && sigma < 0.5))
    throw InvalidInputError("line search sigma must lie in (0, 1/2)");
  if (!(beta > 0.0 && beta < 1.0))
    throw InvalidInputError("line search beta must lie in (0, 1)");
  if (!(fraction_to_boundary > 0.0 && fraction_to_boundary < 1.0))
    throw InvalidInputError("fraction to boundary must lie in (0, 1)");
  if (!(eta > 0.0)) throw InvalidInputError("eta must be positive");
  if (!(min_step > 0.0)) throw InvalidInputError("min_step must be positive");
}

void SolverConfig::validate() const {
  barrier.validate();
  split.validate();
  line_search.validate();
  if (!(eps_lambda > 0.0)) throw InvalidInputError("eps_lambda must be positive");
  if (max_newton_per_stage < 1 || max_iterations < 1)
    throw InvalidInputError("iteration caps must be at least 1");
  if (fixed_iterations < 0) throw InvalidInputError("fixed_iterations must be >= 0");
  if (!(init_rate > 0.0)) throw InvalidInputError("init_rate must be positive");
}

int inequality_count(const Instance& instance) {
  const int l = instance.link_count();
  const int f = instance.session_count();
  return l + f + l * f;
}

namespace {

std::vector<bool> reaches(const Network& net, int target) {
  std::vector<bool> seen(net.node_count(), false);
  std::deque<int> queue{target};
  seen[target] = true;
  while (!queue.empty()) {
    const int n = queue.front();
    queue.pop_front();
    for (int l : net.in_links(n)) {
      const int m = net.link(l).tx;
      if (!seen[m]) {
        seen[m] = true;
        queue.push_back(m);
      }
    }
  }
  return seen;
}

// Expected number of times each link is crossed by a walk that starts at
// src with mass eps, leaves every node over a uniformly chosen link that
// can still reach dst, and is absorbed at dst.
void equal_split(const Network& net, const Session& sess, int f, double eps,
                 PrimalPoint& y) {
  const std::vector<bool> from_src = reachable_from(net, sess.src);
  const std::vector<bool> to_dst = reaches(net, sess.dst);
  auto usable = [&](int l) {
    const Link& k = net.link(l);
    return k.tx != sess.dst && from_src[k.tx] && to_dst[k.rx];
  };
  std::vector<int> index(net.node_count(), -1);
  std::vector<int> nodes;
  for (int n = 0; n < net.node_count(); ++n)
    if (n != sess.dst && from_src[n] && to_dst[n]) {
      index[n] = static_cast<int>(nodes.size());
      nodes.push_back(n);
    }
  std::vector<int> outdeg(net.node_count(), 0);
  for (int l = 0; l < net.link_count(); ++l)
    if (usable(l)) ++outdeg[net.link(l).tx];

  const std::size_t dim = nodes.size();
  Matrix a = Matrix::Identity(dim);
  std::vector<double> b(dim, 0.0);
  b[index[sess.src]] = eps;
  for (int l = 0; l < net.link_count(); ++l) {
    if (!usable(l)) continue;
    const Link& k = net.link(l);
    if (k.rx == sess.dst) continue;
    a(index[k.rx], index[k.tx]) -= 1.0 / outdeg[k.tx];
  }
  const std::vector<double> z = gaussian_solve(std::move(a), std::move(b));
  y.s(f) = eps;
  for (int l = 0; l < net.link_count(); ++l)
    if (usable(l)) y.x(l, f) = z[index[net.link(l).tx]] / outdeg[net.link(l).tx];
}

// Shortest path from `from` to `to` over real links plus a virtual edge
// dst -> src (encoded as -1). Empty optional when unreachable.
bool find_return_path(const Network& net, const Session& sess, int from, int to,
                      std::vector<int>& path) {
  const int n = net.node_count();
  std::vector<int> via(n, -2);  // -2 unvisited, -3 root
  std::deque<int> queue{from};
  via[from] = -3;
  while (!queue.empty() && via[to] == -2) {
    const int u = queue.front();
    queue.pop_front();
    for (int l : net.out_links(u)) {
      const int v = net.link(l).rx;
      if (via[v] == -2) {
        via[v] = l;
        queue.push_back(v);
      }
    }
    if (u == sess.dst && via[sess.src] == -2) {
      via[sess.src] = -1;
      queue.push_back(sess.src);
    }
  }
  if (via[to] == -2) return false;
  path.clear();
  for (int v = to; via[v] != -3;) {
    const int l = via[v];
    path.push_back(l);
    v = l == -1 ? sess.dst : net.link(l).tx;
  }
  return true;
}

}  // namespace

InitResult initialize(const Instance& instance, std::span<const double> eps) {
  const Network& net = instance.network();
  const int sessions = instance.session_count();
  if (eps.size() != static_cast<std::size_t>(sessions))
    throw InvalidInputError("initializer needs one seed rate per session");
  for (double e : eps)
    if (!(e > 0.0) || !std::isfinite(e))
      throw InvalidInputError("initializer seed rates must be positive");

  InitResult out{PrimalPoint(net.link_count(), sessions), DualPoint::Initial(instance)};
  std::ostringstream failures;
  int failure_count = 0;
  for (int f = 0; f < sessions; ++f) {
    const Session& sess = instance.session(f);
    equal_split(net, sess, f, eps[f], out.y);
    // Phase I: close each empty link into a cycle, possibly through the
    // session itself (the virtual dst -> src edge), and push a small
    // circulation around it. Balance is unchanged at every non-destination.
    const double amount = 0.1 * eps[f];
    std::vector<int> path;
    for (int l = 0; l < net.link_count(); ++l) {
      if (out.y.x(l, f) > 0.0) continue;
      if (!find_return_path(net, sess, net.link(l).rx, net.link(l).tx, path)) {
        if (failure_count++ > 0) failures << ", ";
        failures << "(link " << l << " " << net.link(l).tx << "->" << net.link(l).rx
                 << ", session " << f << ")";
        continue;
      }
      out.used_phase_one = true;
      out.y.x(l, f) += amount;
      for (int k : path) {
        if (k == -1) out.y.s(f) += amount;
        else out.y.x(k, f) += amount;
      }
    }
  }
  if (failure_count > 0)
    throw InvalidInputError(
        "no strictly positive balanced flow exists for " +
        std::to_string(failure_count) +
        " link/session pair(s); the barrier problem has no interior point: " +
        failures.str());

  double scale = 1.0;
  for (int l = 0; l < net.link_count(); ++l) {
    double load = 0.0;
    for (int f = 0; f < sessions; ++f) load += out.y.x(l, f);
    scale = std::min(scale, 0.5 * net.link(l).capacity / load);
  }
  if (scale < 1.0) {
    for (double& s : out.y.rates()) s *= scale;
    for (int l = 0; l < net.link_count(); ++l)
      for (double& v : out.y.link_flows(l)) v *= scale;
  }
  out.scale = scale;
  return out;
}

double newton_decrement(const Instance& instance, const PrimalPoint& y,
                        const PrimalDirection& dir, double t) {
  const int sessions = instance.session_count();
  double total = 0.0;
  for (int f = 0; f < sessions; ++f)
    total += dir.ds[f] * dir.ds[f] *
             source_hessian(instance.session(f).utility, y.s(f), t);
  for (int l = 0; l < instance.link_count(); ++l) {
    const double delta = unused_capacity(instance.network(), y, l);
    double sum = 0.0;
    for (int f = 0; f < sessions; ++f) {
      const double dx = dir.x(l, f, sessions);
      total += (dx / y.x(l, f)) * (dx / y.x(l, f));
      sum += dx;
    }
    total += sum * sum / (delta * delta);
  }
  return std::sqrt(std::max(total, 0.0));
}

double boundary_step(const Instance& instance, const PrimalPoint& y,
                     const PrimalDirection& dir) {
  const int sessions = instance.session_count();
  double step = std::numeric_limits<double>::infinity();
  for (int f = 0; f < sessions; ++f)
    if (dir.ds[f] < 0.0) step = std::min(step, -y.s(f) / dir.ds[f]);
  for (int l = 0; l < instance.link_count(); ++l) {
    double sum = 0.0;
    for (int f = 0; f < sessions; ++f) {
      const double dx = dir.x(l, f, sessions);
      if (dx < 0.0) step = std::min(step, -y.x(l, f) / dx);
      sum += dx;
    }
    if (sum > 0.0) step = std::min(step, unused_capacity(instance.network(), y, l) / sum);
  }
  return step;
}

double directional_slope(const Instance& instance, const PrimalPoint& y,
                         const PrimalDirection& dir, double t) {
  const std::vector<double> g = gradient(instance, y, t);
  const std::vector<double> d = dir.flatten();
  double acc = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) acc += g[i] * d[i];
  return acc;
}

PrimalPoint step_point(const PrimalPoint& y, const PrimalDirection& dir, double step) {
  PrimalPoint out = y;
  const int sessions = y.session_count();
  for (int f = 0; f < sessions; ++f) out.s(f) += step * dir.ds[f];
  for (int l = 0; l < y.link_count(); ++l)
    for (int f = 0; f < sessions; ++f) out.x(l, f) += step * dir.x(l, f, sessions);
  return out;
}

double choose_step(const StepQuery& q, const LineSearchParams& params) {
  if (q.decrement <= params.eta) {
    double step = 1.0;
    while (!std::isfinite(q.phi(step))) {
      step *= params.beta;
      if (step < params.min_step)
        throw ConvergenceError("line search stalled keeping the iterate interior",
                               q.decrement);
    }
    return step;
  }
  const double model_slope = q.slope - q.penalty * q.infeasibility;
  if (!(model_slope < 0.0))
    throw ConvergenceError("line search: direction is not a descent direction "
                           "(slope " + std::to_string(model_slope) + ")",
                           q.decrement);
  double step = std::min(1.0, params.fraction_to_boundary * q.boundary);
  for (;;) {
    if (step < params.min_step)
      throw ConvergenceError("line search stalled below the minimum step", q.decrement);
    if (q.phi(step) <= q.f0 + params.sigma * step * model_slope) return step;
    step *= params.beta;
  }
}

namespace {

double objective_or_inf(const Instance& instance, const PrimalPoint& y, double t) {
  if (!is_interior(instance, y)) return std::numeric_limits<double>::infinity();
  return objective_value(instance, y, t);
}

}  // namespace

double line_search(const Instance& instance, const PrimalPoint& y,
                   const PrimalDirection& dir, double t,
                   const LineSearchParams& params, double penalty) {
  StepQuery q;
  q.decrement = newton_decrement(instance, y, dir, t);
  q.slope = directional_slope(instance, y, dir, t);
  q.boundary = boundary_step(instance, y, dir);
  q.penalty = penalty;
  q.infeasibility = check_feasibility(instance, y).total_balance_residual;
  q.f0 = objective_value(instance, y, t) + penalty * q.infeasibility;
  q.phi = [&](double step) {
    const PrimalPoint trial = step_point(y, dir, step);
    const double f = objective_or_inf(instance, trial, t);
    if (!std::isfinite(f)) return f;
    return f + penalty * check_feasibility(instance, trial).total_balance_residual;
  };
  return choose_step(q, params);
}

IterationOutcome newton_iteration(const Instance& instance, const SolverState& state,
                                  const SolverConfig& config) {
  const SplitSystem system = assemble_dual_system(instance, state.y, state.t);
  SplitConfig split = config.split;
  std::vector<double> w0 = state.w.to_reduced(instance);
  IterationOutcome out;
  out.state.t = state.t;
  for (;;) {
    const DualSolveResult dual = solve_duals(system, split, w0);
    out.record.inner_iterations += dual.iterations;
    out.state.w = DualPoint::FromReduced(instance, dual.w);
    out.direction = primal_direction(instance, state.y, out.state.w, state.t);
    out.record.decrement = newton_decrement(instance, state.y, out.direction, state.t);
    try {
      out.record.step = line_search(instance, state.y, out.direction, state.t,
                                    config.line_search, merit_penalty(max_abs(dual.w)));
      break;
    } catch (const ConvergenceError&) {
      // A loosely solved dual system can yield a poor direction; finish the
      // dual solve to the full tolerance before giving up.
      if (split.reduction == 0.0) throw;
      split.reduction = 0.0;
      w0 = dual.w;
    }
  }
  out.state.y = step_point(state.y, out.direction, out.record.step);
  out.record.t = state.t;
  return out;
}

namespace {

[[noreturn]] void rethrow_with_context(const Error& e, const std::string& context) {
  const std::string what = context + ": " + e.what();
  if (const auto* c = dynamic_cast<const ConvergenceError*>(&e))
    throw ConvergenceError(what, c->last_residual());
  switch (e.kind()) {
    case ErrorKind::kConvergence: throw ConvergenceError(what, 0.0);
    case ErrorKind::kInvalidInput: throw InvalidInputError(what);
    case ErrorKind::kInvariant: throw InvariantError(what);
  }
  throw InvariantError(what);
}

}  // namespace

SolveResult barrier_solve(const Instance& instance, const SolverConfig& config,
                          const IterationObserver& observer) {
  config.validate();
  const std::vector<double> eps(instance.session_count(), config.init_rate);
  InitResult init = initialize(instance, eps);

  SolverState state{std::move(init.y), std::move(init.w), config.barrier.t};
  std::unique_ptr<DistributedRuntime> runtime;
  if (config.mode == ExecutionMode::kDistributed)
    runtime = std::make_unique<DistributedRuntime>(instance, state.y, state.w);

  SolveResult result;
  const double m = inequality_count(instance);
  int iteration = 0;
  int stage = 0;
  double last_decrement = 0.0;
  bool done = false;
  while (!done) {
    for (int k = 0;; ++k) {
      if (config.fixed_iterations > 0 && iteration >= config.fixed_iterations) {
        done = true;
        break;
      }
      if (k >= config.max_newton_per_stage || iteration >= config.max_iterations)
        throw ConvergenceError(
            "barrier stage " + std::to_string(stage) + " (t = " +
                std::to_string(state.t) + ") did not reach decrement " +
                std::to_string(config.eps_lambda) + " within the iteration cap",
            last_decrement);

      IterationRecord rec;
      PrimalDirection dir;
      try {
        if (runtime) {
          SplitConfig split = config.split;
          for (;;) {
            rec.inner_iterations += runtime->solve_duals(state.t, split).iterations;
            dir = runtime->compute_direction(state.t);
            StepQuery q;
            q.decrement = runtime->decrement(state.t);
            q.slope = runtime->slope(state.t);
            q.boundary = runtime->boundary_step();
            q.penalty = merit_penalty(runtime->largest_multiplier());
            q.infeasibility = runtime->balance_at(0.0);
            q.f0 = runtime->objective_at(0.0, state.t) + q.penalty * q.infeasibility;
            q.phi = [&](double step) {
              const double f = runtime->objective_at(step, state.t);
              if (!std::isfinite(f)) return f;
              return f + q.penalty * runtime->balance_at(step);
            };
            rec.decrement = q.decrement;
            try {
              rec.step = choose_step(q, config.line_search);
              break;
            } catch (const ConvergenceError&) {
              if (split.reduction == 0.0) throw;
              split.reduction = 0.0;
            }
          }
          runtime->apply_step(rec.step);
          state.y = runtime->primal();
          state.w = runtime->duals();
        } else {
          IterationOutcome out = newton_iteration(instance, state, config);
          rec = out.record;
          dir = std::move(out.direction);
          state.y = std::move(out.state.y);
          state.w = std::move(out.state.w);
        }
      } catch (const Error& e) {
        rethrow_with_context(e, "barrier stage " + std::to_string(stage) +
                                    " (t = " + std::to_string(state.t) +
                                    "), iteration " + std::to_string(iteration + 1));
      }

      ++iteration;
      rec.iteration = iteration;
      rec.stage = stage;
      rec.t = state.t;
      rec.objective = objective_value(instance, state.y, state.t);
      rec.utility = total_utility(instance, state.y.rates());
      const FeasibilityReport feas = check_feasibility(instance, state.y);
      rec.balance_residual = feas.max_balance_residual;
      rec.min_slack = feas.min_slack;
      last_decrement = rec.decrement;
      result.trace.records.push_back(rec);
      if (observer && !observer(rec, state, dir)) {
        result.solution.stopped_by_observer = true;
        done = true;
        break;
      }
      if (rec.decrement < config.eps_lambda) break;
    }
    if (done) break;
    if (m / state.t < config.barrier.gap_tol) break;
    state.t *= config.barrier.mu;
    ++stage;
  }

  result.solution.y = state.y;
  result.solution.w = state.w;
  result.solution.t = state.t;
  result.solution.decrement = last_decrement;
  result.solution.iterations = iteration;
  result.solution.stages = stage + 1;
  if (runtime) result.locality = runtime->report();
  return result;
}

SolveResult run_distributed(const Instance& instance, SolverConfig config,
                            const IterationObserver& observer) {
  config.mode = ExecutionMode::kDistributed;
  SolveResult result = barrier_solve(instance, config, observer);
  if (!result.locality.clean())
    throw InvariantError("distributed run recorded " +
                         std::to_string(result.locality.violations.size()) +
                         " locality violation(s)");
  return result;
}

}  // namespace mrfc
