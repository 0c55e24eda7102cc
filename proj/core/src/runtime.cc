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

#include "mrfc/runtime.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mrfc/errors.hpp"

namespace mrfc {

std::string describe(EntityId id) {
  return (id.kind == EntityKind::kNode ? "node " : "link ") + std::to_string(id.index);
}

const char* phase_name(Phase phase) {
  switch (phase) {
    case Phase::kLinkPrepare: return "link_prepare";
    case Phase::kDualRound: return "dual_round";
    case Phase::kSourceDirection: return "source_direction";
    case Phase::kLinkDirection: return "link_direction";
    case Phase::kDecrement: return "decrement";
    case Phase::kLineSearch: return "line_search";
    case Phase::kUpdate: return "update";
  }
  return "unknown";
}

bool AccessLedger::one_hop(EntityId reader, EntityId owner) const {
  const Network& net = *network_;
  if (reader.kind == EntityKind::kNode) {
    if (owner.kind == EntityKind::kNode)
      return owner.index == reader.index || net.adjacent(reader.index, owner.index);
    const Link& k = net.link(owner.index);
    return k.tx == reader.index || k.rx == reader.index;
  }
  const Link& k = net.link(reader.index);
  if (owner.kind == EntityKind::kNode) return owner.index == k.tx || owner.index == k.rx;
  return owner.index == reader.index || net.shares_endpoint(reader.index, owner.index);
}

void AccessLedger::record(Phase phase, EntityId reader, EntityId owner,
                          const char* field) {
  PhaseCounts& c = counts_[static_cast<int>(phase)];
  if (reader == owner) {
    ++c.own_reads;
    return;
  }
  if (one_hop(reader, owner)) {
    ++c.neighbor_reads;
    return;
  }
  violations_.push_back({phase, reader, owner, field});
  if (strict_)
    throw InvariantError(std::string("locality violation in phase ") +
                         phase_name(phase) + ": " + describe(reader) + " read " +
                         field + " of " + describe(owner));
}

DistributedRuntime::DistributedRuntime(const Instance& instance, const PrimalPoint& y,
                                       const DualPoint& w, bool strict)
    : instance_(&instance),
      sessions_(instance.session_count()),
      floor_(interior_floor(instance.network())),
      ledger_(instance.network(), strict) {
  require_interior(instance, y);
  if (w.node_count() != instance.node_count() || w.session_count() != sessions_)
    throw InvalidInputError("dual point has the wrong shape");
  w_.assign(w.values().begin(), w.values().end());
  s_.assign(y.rates().begin(), y.rates().end());
  ds_.assign(sessions_, 0.0);
  x_.assign(y.flows().begin(), y.flows().end());
  dx_.assign(x_.size(), 0.0);
  delta_.assign(instance.link_count(), 0.0);
  sq_norm_.assign(instance.link_count(), 0.0);
  prepare_links();

  const Network& net = instance.network();
  std::vector<int> destinations(sessions_);
  for (int f = 0; f < sessions_; ++f) destinations[f] = instance.session(f).dst;
  views_.resize(instance.node_count());
  for (int n = 0; n < instance.node_count(); ++n) {
    NodeNeighborhood& view = views_[n];
    view.node = n;
    view.destinations = destinations;
    view.w_self.assign(sessions_, 0.0);
    for (int l : net.incident_links(n)) {
      IncidentLinkState k;
      k.link = l;
      k.tx = net.link(l).tx;
      k.rx = net.link(l).rx;
      k.x.assign(sessions_, 0.0);
      k.w_tx.assign(sessions_, 0.0);
      k.w_rx.assign(sessions_, 0.0);
      view.links.push_back(std::move(k));
    }
  }
}

PrimalPoint DistributedRuntime::primal() const {
  PrimalPoint y(instance_->link_count(), sessions_);
  std::copy(s_.begin(), s_.end(), y.rates().begin());
  for (int l = 0; l < instance_->link_count(); ++l)
    for (int f = 0; f < sessions_; ++f) y.x(l, f) = x_[l * sessions_ + f];
  return y;
}

DualPoint DistributedRuntime::duals() const {
  DualPoint w(instance_->node_count(), sessions_);
  for (int n = 0; n < instance_->node_count(); ++n)
    for (int f = 0; f < sessions_; ++f) w(n, f) = w_[n * sessions_ + f];
  return w;
}

LocalityReport DistributedRuntime::report() const {
  LocalityReport r;
  for (int p = 0; p < kPhaseCount; ++p) r.phases[p] = ledger_.counts(static_cast<Phase>(p));
  r.violations.assign(ledger_.violations().begin(), ledger_.violations().end());
  return r;
}

std::span<const double> DistributedRuntime::node_w(Phase p, EntityId reader, int n) {
  ledger_.record(p, reader, EntityId::Node(n), "w");
  return {w_.data() + static_cast<std::size_t>(n) * sessions_,
          static_cast<std::size_t>(sessions_)};
}

double DistributedRuntime::node_rate(Phase p, EntityId reader, int f) {
  ledger_.record(p, reader, EntityId::Node(instance_->session(f).src), "s");
  return s_[f];
}

double DistributedRuntime::node_rate_step(Phase p, EntityId reader, int f) {
  ledger_.record(p, reader, EntityId::Node(instance_->session(f).src), "ds");
  return ds_[f];
}

std::span<const double> DistributedRuntime::link_x(Phase p, EntityId reader, int l) {
  ledger_.record(p, reader, EntityId::Link(l), "x");
  return {x_.data() + static_cast<std::size_t>(l) * sessions_,
          static_cast<std::size_t>(sessions_)};
}

std::span<const double> DistributedRuntime::link_dx(Phase p, EntityId reader, int l) {
  ledger_.record(p, reader, EntityId::Link(l), "dx");
  return {dx_.data() + static_cast<std::size_t>(l) * sessions_,
          static_cast<std::size_t>(sessions_)};
}

double DistributedRuntime::link_delta(Phase p, EntityId reader, int l) {
  ledger_.record(p, reader, EntityId::Link(l), "delta");
  return delta_[l];
}

double DistributedRuntime::link_sq_norm_of(Phase p, EntityId reader, int l) {
  ledger_.record(p, reader, EntityId::Link(l), "sq_norm");
  return sq_norm_[l];
}

void DistributedRuntime::prepare_links() {
  const Network& net = instance_->network();
  for (int l = 0; l < net.link_count(); ++l) {
    const EntityId me = EntityId::Link(l);
    const auto x = link_x(Phase::kLinkPrepare, me, l);
    double used = 0.0;
    double sq = 0.0;
    for (double v : x) {
      used += v;
      sq += v * v;
    }
    delta_[l] = net.link(l).capacity - used;
    sq_norm_[l] = sq + delta_[l] * delta_[l];
  }
}

DistributedRuntime::Round DistributedRuntime::dual_round(double t, double alpha) {
  const Instance& inst = *instance_;
  const Network& net = inst.network();
  const int dim = dual_dimension(inst);
  Round round;
  round.next.assign(dim, 0.0);
  round.residual.assign(dim, 0.0);

  double worst = 0.0;
  double rhs_norm = 0.0;
  for (int n = 0; n < net.node_count(); ++n) {
    const EntityId me = EntityId::Node(n);
    // Refresh the node's cached snapshot in place; the layout never changes.
    NodeNeighborhood& view = views_[n];
    const auto own = node_w(Phase::kDualRound, me, n);
    std::copy(own.begin(), own.end(), view.w_self.begin());
    for (IncidentLinkState& k : view.links) {
      const auto x = link_x(Phase::kDualRound, me, k.link);
      std::copy(x.begin(), x.end(), k.x.begin());
      k.delta = link_delta(Phase::kDualRound, me, k.link);
      k.sq_norm = link_sq_norm_of(Phase::kDualRound, me, k.link);
      const auto wt = node_w(Phase::kDualRound, me, k.tx);
      const auto wr = node_w(Phase::kDualRound, me, k.rx);
      std::copy(wt.begin(), wt.end(), k.w_tx.begin());
      std::copy(wr.begin(), wr.end(), k.w_rx.begin());
    }
    for (int f = 0; f < sessions_; ++f) {
      const int row = dual_row(inst, n, f);
      if (row < 0) continue;
      view.session = f;
      view.source.reset();
      if (inst.session(f).src == n)
        view.source = SourceState{node_rate(Phase::kDualRound, me, f),
                                  inst.session(f).utility, t};
      const LocalDualUpdate upd = local_dual_update(view, alpha);
      round.next[row] = upd.next;
      round.residual[row] = upd.u * view.w_self[f] - (upd.v1 + upd.v2 - upd.w);
      worst = std::max(worst, std::abs(round.residual[row]));
      rhs_norm = std::max(rhs_norm, std::abs(upd.w));
    }
  }
  ledger_.aggregate(Phase::kDualRound);
  ledger_.aggregate(Phase::kDualRound);
  round.relative_residual = worst / (1.0 + rhs_norm);
  return round;
}

void DistributedRuntime::commit_duals(std::span<const double> reduced) {
  const Instance& inst = *instance_;
  for (int n = 0; n < inst.node_count(); ++n)
    for (int f = 0; f < sessions_; ++f) {
      const int row = dual_row(inst, n, f);
      w_[n * sessions_ + f] = row < 0 ? 0.0 : reduced[row];
    }
}

DualSolveResult DistributedRuntime::solve_duals(double t, const SplitConfig& config) {
  config.validate();
  DualSolveResult out;
  Round round = dual_round(t, config.alpha);
  out.final_residual = round.relative_residual;
  const double level = config.stop_level(out.final_residual);
  while (out.final_residual > level) {
    if (out.iterations >= config.max_inner)
      throw ConvergenceError("distributed dual rounds did not reach tolerance in " +
                                 std::to_string(config.max_inner) + " rounds",
                             out.final_residual);
    commit_duals(round.next);
    ++out.iterations;
    round = dual_round(t, config.alpha);
    out.final_residual = round.relative_residual;
    out.residuals.push_back(out.final_residual);
  }
  out.w = duals().to_reduced(*instance_);
  return out;
}

PrimalDirection DistributedRuntime::compute_direction(double t) {
  const Instance& inst = *instance_;
  const Network& net = inst.network();
  PrimalDirection dir;
  dir.ds.resize(sessions_);
  dir.dx.resize(x_.size());
  for (int f = 0; f < sessions_; ++f) {
    const int src = inst.session(f).src;
    const EntityId me = EntityId::Node(src);
    const double s = node_rate(Phase::kSourceDirection, me, f);
    const double w_src = node_w(Phase::kSourceDirection, me, src)[f];
    ds_[f] = source_direction(inst.session(f).utility, s, t, w_src);
    dir.ds[f] = ds_[f];
  }
  for (int l = 0; l < net.link_count(); ++l) {
    const EntityId me = EntityId::Link(l);
    const auto x = link_x(Phase::kLinkDirection, me, l);
    const double delta = link_delta(Phase::kLinkDirection, me, l);
    const auto wt = node_w(Phase::kLinkDirection, me, net.link(l).tx);
    const auto wr = node_w(Phase::kLinkDirection, me, net.link(l).rx);
    const auto dx = link_direction(x, delta, wt, wr);
    std::copy(dx.begin(), dx.end(), dx_.begin() + static_cast<std::ptrdiff_t>(l) * sessions_);
    std::copy(dx.begin(), dx.end(), dir.dx.begin() + static_cast<std::ptrdiff_t>(l) * sessions_);
  }
  return dir;
}

double DistributedRuntime::decrement(double t) {
  const Instance& inst = *instance_;
  double total = 0.0;
  for (int f = 0; f < sessions_; ++f) {
    const EntityId me = EntityId::Node(inst.session(f).src);
    const double s = node_rate(Phase::kDecrement, me, f);
    const double ds = node_rate_step(Phase::kDecrement, me, f);
    total += ds * ds * source_hessian(inst.session(f).utility, s, t);
  }
  for (int l = 0; l < inst.link_count(); ++l) {
    const EntityId me = EntityId::Link(l);
    const auto x = link_x(Phase::kDecrement, me, l);
    const auto dx = link_dx(Phase::kDecrement, me, l);
    const double delta = link_delta(Phase::kDecrement, me, l);
    double sum = 0.0;
    for (int f = 0; f < sessions_; ++f) {
      const double r = dx[f] / x[f];
      total += r * r;
      sum += dx[f];
    }
    total += sum * sum / (delta * delta);
  }
  ledger_.aggregate(Phase::kDecrement);
  return std::sqrt(std::max(total, 0.0));
}

double DistributedRuntime::slope(double t) {
  const Instance& inst = *instance_;
  double total = 0.0;
  for (int f = 0; f < sessions_; ++f) {
    const EntityId me = EntityId::Node(inst.session(f).src);
    const double s = node_rate(Phase::kLineSearch, me, f);
    const double ds = node_rate_step(Phase::kLineSearch, me, f);
    total += (-t * inst.session(f).utility.first(s) - 1.0 / s) * ds;
  }
  for (int l = 0; l < inst.link_count(); ++l) {
    const EntityId me = EntityId::Link(l);
    const auto x = link_x(Phase::kLineSearch, me, l);
    const auto dx = link_dx(Phase::kLineSearch, me, l);
    const double delta = link_delta(Phase::kLineSearch, me, l);
    for (int f = 0; f < sessions_; ++f) total += (1.0 / delta - 1.0 / x[f]) * dx[f];
  }
  ledger_.aggregate(Phase::kLineSearch);
  return total;
}

double DistributedRuntime::boundary_step() {
  const Instance& inst = *instance_;
  double step = std::numeric_limits<double>::infinity();
  for (int f = 0; f < sessions_; ++f) {
    const EntityId me = EntityId::Node(inst.session(f).src);
    const double s = node_rate(Phase::kLineSearch, me, f);
    const double ds = node_rate_step(Phase::kLineSearch, me, f);
    if (ds < 0.0) step = std::min(step, -s / ds);
  }
  for (int l = 0; l < inst.link_count(); ++l) {
    const EntityId me = EntityId::Link(l);
    const auto x = link_x(Phase::kLineSearch, me, l);
    const auto dx = link_dx(Phase::kLineSearch, me, l);
    const double delta = link_delta(Phase::kLineSearch, me, l);
    double sum = 0.0;
    for (int f = 0; f < sessions_; ++f) {
      if (dx[f] < 0.0) step = std::min(step, -x[f] / dx[f]);
      sum += dx[f];
    }
    if (sum > 0.0) step = std::min(step, delta / sum);
  }
  ledger_.aggregate(Phase::kLineSearch);
  return step;
}

bool DistributedRuntime::interior_at(double step) {
  return std::isfinite(objective_at(step, 1.0));
}

double DistributedRuntime::objective_at(double step, double t) {
  const Instance& inst = *instance_;
  const double inf = std::numeric_limits<double>::infinity();
  double utility = 0.0;
  double barrier = 0.0;
  bool inside = true;
  for (int f = 0; f < sessions_; ++f) {
    const EntityId me = EntityId::Node(inst.session(f).src);
    const double s = node_rate(Phase::kLineSearch, me, f) +
                     step * node_rate_step(Phase::kLineSearch, me, f);
    if (!(s > floor_)) {
      inside = false;
      continue;
    }
    utility += inst.session(f).utility.value(s);
    barrier -= std::log(s);
  }
  for (int l = 0; l < inst.link_count(); ++l) {
    const EntityId me = EntityId::Link(l);
    const auto x = link_x(Phase::kLineSearch, me, l);
    const auto dx = link_dx(Phase::kLineSearch, me, l);
    double used = 0.0;
    for (int f = 0; f < sessions_; ++f) {
      const double v = x[f] + step * dx[f];
      if (!(v > floor_)) inside = false;
      else barrier -= std::log(v);
      used += v;
    }
    const double delta = inst.network().link(l).capacity - used;
    if (!(delta > floor_)) inside = false;
    else barrier -= std::log(delta);
  }
  ledger_.aggregate(Phase::kLineSearch);
  if (!inside) return inf;
  return -t * utility + barrier;
}

double DistributedRuntime::balance_at(double step) {
  const Instance& inst = *instance_;
  const Network& net = inst.network();
  double total = 0.0;
  for (int n = 0; n < net.node_count(); ++n) {
    const EntityId me = EntityId::Node(n);
    std::vector<double> bal(sessions_, 0.0);
    for (int l : net.incident_links(n)) {
      const auto x = link_x(Phase::kLineSearch, me, l);
      const auto dx = link_dx(Phase::kLineSearch, me, l);
      const double sign = net.link(l).tx == n ? 1.0 : -1.0;
      for (int f = 0; f < sessions_; ++f) bal[f] += sign * (x[f] + step * dx[f]);
    }
    for (int f = 0; f < sessions_; ++f) {
      const Session& sess = inst.session(f);
      if (n == sess.dst) continue;
      if (n == sess.src)
        bal[f] -= node_rate(Phase::kLineSearch, me, f) +
                  step * node_rate_step(Phase::kLineSearch, me, f);
      total += std::abs(bal[f]);
    }
  }
  ledger_.aggregate(Phase::kLineSearch);
  return total;
}

double DistributedRuntime::largest_multiplier() {
  double big = 0.0;
  for (int n = 0; n < instance_->node_count(); ++n)
    for (double v : node_w(Phase::kLineSearch, EntityId::Node(n), n))
      big = std::max(big, std::abs(v));
  ledger_.aggregate(Phase::kLineSearch);
  return big;
}

void DistributedRuntime::apply_step(double step) {
  const Instance& inst = *instance_;
  for (int f = 0; f < sessions_; ++f) {
    const EntityId me = EntityId::Node(inst.session(f).src);
    s_[f] = node_rate(Phase::kUpdate, me, f) + step * node_rate_step(Phase::kUpdate, me, f);
  }
  for (int l = 0; l < inst.link_count(); ++l) {
    const EntityId me = EntityId::Link(l);
    const auto dx = link_dx(Phase::kUpdate, me, l);
    for (int f = 0; f < sessions_; ++f) x_[l * sessions_ + f] += step * dx[f];
  }
  prepare_links();
}

}  // namespace mrfc
