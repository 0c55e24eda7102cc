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

#include "mrfc/subgradient.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mrfc/errors.hpp"

namespace mrfc {

void SubgradientConfig::validate() const {
  if (!(step_a > 0.0)) throw InvalidInputError("subgradient step_a must be positive");
  if (!constant_step && !(step_b > 0.0))
    throw InvalidInputError("subgradient step_b must be positive");
  if (!(initial_price >= 0.0)) throw InvalidInputError("initial price must be >= 0");
  if (s_max < 0.0) throw InvalidInputError("s_max must be >= 0");
  if (max_iterations < 1) throw InvalidInputError("max_iterations must be >= 1");
  if (rel_tol < 0.0 || window < 1) throw InvalidInputError("bad stopping window");
  if (record_every < 1) throw InvalidInputError("record_every must be >= 1");
}

double flow_control_subproblem(double price, const UtilitySpec& utility, double s_max) {
  if (price < 0.0) throw InvalidInputError("flow control price must be >= 0");
  if (price == 0.0) return s_max;
  return std::min(utility.inverse_marginal(price), s_max);
}

std::vector<double> routing_subproblem(std::span<const double> price_diff,
                                       double capacity) {
  std::vector<double> x(price_diff.size(), 0.0);
  int winner = -1;
  for (std::size_t f = 0; f < price_diff.size(); ++f)
    if (price_diff[f] > 0.0 && (winner < 0 || price_diff[f] > price_diff[winner]))
      winner = static_cast<int>(f);
  if (winner >= 0) x[winner] = capacity;
  return x;
}

std::vector<double> subgradient_step(std::span<const double> u,
                                     std::span<const double> d, double step) {
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::max(u[i] - step * d[i], 0.0);
  return out;
}

DualEvaluation evaluate_dual(const Instance& instance, std::span<const double> u,
                             double s_max) {
  const Network& net = instance.network();
  const int sessions = instance.session_count();
  DualEvaluation ev;
  ev.y = PrimalPoint(net.link_count(), sessions);
  for (int f = 0; f < sessions; ++f) {
    const Session& sess = instance.session(f);
    const double price = u[sess.src * sessions + f];
    const double s = flow_control_subproblem(price, sess.utility, s_max);
    ev.y.s(f) = s;
    ev.value += sess.utility.value(s) - price * s;
  }
  std::vector<double> diff(sessions);
  for (int l = 0; l < net.link_count(); ++l) {
    const Link& k = net.link(l);
    double best = 0.0;
    for (int f = 0; f < sessions; ++f) {
      diff[f] = u[k.tx * sessions + f] - u[k.rx * sessions + f];
      best = std::max(best, diff[f]);
    }
    const auto x = routing_subproblem(diff, k.capacity);
    std::copy(x.begin(), x.end(), ev.y.link_flows(l).begin());
    ev.value += best * k.capacity;
  }
  ev.subgradient.assign(u.size(), 0.0);
  for (int f = 0; f < sessions; ++f) {
    const Session& sess = instance.session(f);
    for (int n = 0; n < net.node_count(); ++n) {
      if (n == sess.dst) continue;
      double d = 0.0;
      for (int l : net.out_links(n)) d += ev.y.x(l, f);
      for (int l : net.in_links(n)) d -= ev.y.x(l, f);
      if (n == sess.src) d -= ev.y.s(f);
      ev.subgradient[n * sessions + f] = d;
    }
  }
  return ev;
}

double lagrangian(const Instance& instance, const PrimalPoint& y,
                  std::span<const double> u) {
  const Network& net = instance.network();
  const int sessions = instance.session_count();
  double value = total_utility(instance, y.rates());
  for (int f = 0; f < sessions; ++f) {
    const Session& sess = instance.session(f);
    for (int n = 0; n < net.node_count(); ++n) {
      if (n == sess.dst) continue;
      double g = 0.0;
      for (int l = 0; l < net.link_count(); ++l) {
        if (net.link(l).tx == n) g += y.x(l, f);
        if (net.link(l).rx == n) g -= y.x(l, f);
      }
      if (n == sess.src) g -= y.s(f);
      value += u[n * sessions + f] * g;
    }
  }
  return value;
}

SubgradientResult subgradient_solve(const Instance& instance,
                                    const SubgradientConfig& config) {
  config.validate();
  const Network& net = instance.network();
  const int sessions = instance.session_count();
  const double s_max = config.s_max > 0.0 ? config.s_max : 10.0 * net.max_capacity();

  SubgradientResult out;
  out.u.assign(static_cast<std::size_t>(net.node_count()) * sessions,
               config.initial_price);
  for (int f = 0; f < sessions; ++f) out.u[instance.session(f).dst * sessions + f] = 0.0;
  out.average = PrimalPoint(net.link_count(), sessions);
  out.best_dual = std::numeric_limits<double>::infinity();
  std::vector<double> best_history;
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (int k = 1; k <= config.max_iterations; ++k) {
    const DualEvaluation ev = evaluate_dual(instance, out.u, s_max);
    out.iterations = k;
    if (ev.value < out.best_dual) {
      out.best_dual = ev.value;
      out.best_iteration = k;
    }
    // Running average of the Lagrangian maximizers.
    const double weight = 1.0 / k;
    for (int f = 0; f < sessions; ++f)
      out.average.s(f) += weight * (ev.y.s(f) - out.average.s(f));
    for (int l = 0; l < net.link_count(); ++l)
      for (int f = 0; f < sessions; ++f)
        out.average.x(l, f) += weight * (ev.y.x(l, f) - out.average.x(l, f));

    const double step =
        config.constant_step ? config.step_a : config.step_a / (config.step_b + k - 1);
    if (k % config.record_every == 0 || k == 1) {
      IterationRecord rec;
      rec.iteration = k;
      rec.objective = ev.value;
      rec.t = nan;
      bool positive = true;
      for (double s : out.average.rates()) positive = positive && s > 0.0;
      rec.utility = positive ? total_utility(instance, out.average.rates()) : nan;
      rec.decrement = nan;
      rec.step = step;
      const FeasibilityReport feas = check_feasibility(instance, out.average);
      rec.balance_residual = feas.max_balance_residual;
      rec.min_slack = feas.min_slack;
      out.trace.records.push_back(rec);
    }
    if (config.target_dual && out.best_dual <= *config.target_dual) break;
    best_history.push_back(out.best_dual);
    if (config.rel_tol > 0.0 && k > config.window) {
      const double before = best_history[k - 1 - config.window];
      if (before - out.best_dual <= config.rel_tol * std::max(1.0, std::abs(before))) break;
    }
    out.u = subgradient_step(out.u, ev.subgradient, step);
    for (int f = 0; f < sessions; ++f) out.u[instance.session(f).dst * sessions + f] = 0.0;
  }
  return out;
}

}  // namespace mrfc
