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

#include "mrfc/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mrfc/errors.hpp"

namespace mrfc {

std::vector<double> PrimalPoint::flatten() const {
  std::vector<double> out;
  out.reserve(s_.size() + x_.size());
  out.insert(out.end(), s_.begin(), s_.end());
  out.insert(out.end(), x_.begin(), x_.end());
  return out;
}

PrimalPoint PrimalPoint::Unflatten(std::span<const double> flat, int links,
                                   int sessions) {
  PrimalPoint y(links, sessions);
  if (flat.size() != static_cast<std::size_t>(y.index().size()))
    throw InvalidInputError("flat primal vector has the wrong length");
  std::copy(flat.begin(), flat.begin() + sessions, y.s_.begin());
  std::copy(flat.begin() + sessions, flat.end(), y.x_.begin());
  return y;
}

void BarrierConfig::validate() const {
  if (!(t > 0.0) || !std::isfinite(t))
    throw InvalidInputError("barrier t must be positive");
  if (!(mu > 1.0) || !std::isfinite(mu))
    throw InvalidInputError("barrier mu must exceed 1");
  if (!(gap_tol > 0.0)) throw InvalidInputError("gap_tol must be positive");
}

double unused_capacity(const Network& network, const PrimalPoint& y, int l) {
  double used = 0.0;
  for (double v : y.link_flows(l)) used += v;
  return network.link(l).capacity - used;
}

double link_sq_norm(const Network& network, const PrimalPoint& y, int l) {
  const double delta = unused_capacity(network, y, l);
  double acc = delta * delta;
  for (double v : y.link_flows(l)) acc += v * v;
  return acc;
}

double interior_floor(const Network& network) {
  return 1e-12 * network.max_capacity();
}

namespace {

// Returns an empty string when y is interior, else a description.
std::string interior_violation(const Instance& instance, const PrimalPoint& y) {
  if (y.session_count() != instance.session_count() ||
      y.link_count() != instance.link_count())
    return "primal point has the wrong shape";
  const double floor = interior_floor(instance.network());
  for (int f = 0; f < y.session_count(); ++f)
    if (!(y.s(f) > floor))
      return "s[" + std::to_string(f) + "] = " + std::to_string(y.s(f));
  for (int l = 0; l < y.link_count(); ++l) {
    for (int f = 0; f < y.session_count(); ++f)
      if (!(y.x(l, f) > floor))
        return "x[" + std::to_string(l) + "][" + std::to_string(f) +
               "] = " + std::to_string(y.x(l, f));
    const double delta = unused_capacity(instance.network(), y, l);
    if (!(delta > floor))
      return "slack of link " + std::to_string(l) + " = " + std::to_string(delta);
  }
  return {};
}

}  // namespace

bool is_interior(const Instance& instance, const PrimalPoint& y) {
  return interior_violation(instance, y).empty();
}

void require_interior(const Instance& instance, const PrimalPoint& y) {
  const std::string why = interior_violation(instance, y);
  if (!why.empty()) throw DomainError("point is not strictly interior: " + why);
}

double total_utility(const Instance& instance, std::span<const double> rates) {
  double acc = 0.0;
  for (int f = 0; f < instance.session_count(); ++f)
    acc += instance.session(f).utility.value(rates[f]);
  return acc;
}

double objective_value(const Instance& instance, const PrimalPoint& y, double t) {
  require_interior(instance, y);
  double acc = -t * total_utility(instance, y.rates());
  for (int f = 0; f < y.session_count(); ++f) acc -= std::log(y.s(f));
  for (int l = 0; l < y.link_count(); ++l) {
    acc -= std::log(unused_capacity(instance.network(), y, l));
    for (double v : y.link_flows(l)) acc -= std::log(v);
  }
  return acc;
}

std::vector<double> gradient(const Instance& instance, const PrimalPoint& y,
                             double t) {
  require_interior(instance, y);
  const FlatIndex idx = y.index();
  std::vector<double> g(idx.size());
  for (int f = 0; f < y.session_count(); ++f) {
    const double s = y.s(f);
    g[idx.s(f)] = -t * instance.session(f).utility.first(s) - 1.0 / s;
  }
  for (int l = 0; l < y.link_count(); ++l) {
    const double inv_delta = 1.0 / unused_capacity(instance.network(), y, l);
    for (int f = 0; f < y.session_count(); ++f)
      g[idx.x(l, f)] = inv_delta - 1.0 / y.x(l, f);
  }
  return g;
}

double source_hessian(const UtilitySpec& utility, double s, double t) {
  return -t * utility.second(s) + 1.0 / (s * s);
}

HessianBlocks hessian_blocks(const Instance& instance, const PrimalPoint& y,
                             double t) {
  require_interior(instance, y);
  const int sessions = y.session_count();
  HessianBlocks out;
  out.source.resize(sessions);
  for (int f = 0; f < sessions; ++f)
    out.source[f] = source_hessian(instance.session(f).utility, y.s(f), t);
  out.links.reserve(y.link_count());
  for (int l = 0; l < y.link_count(); ++l) {
    const double delta = unused_capacity(instance.network(), y, l);
    const double w = 1.0 / (delta * delta);
    Matrix block(sessions, sessions, w);
    for (int f = 0; f < sessions; ++f)
      block(f, f) += 1.0 / (y.x(l, f) * y.x(l, f));
    out.links.push_back(std::move(block));
  }
  return out;
}

FeasibilityReport check_feasibility(const Instance& instance,
                                    const PrimalPoint& y) {
  const Network& net = instance.network();
  FeasibilityReport r;
  r.balance_residual.assign(instance.session_count(), 0.0);
  for (int f = 0; f < instance.session_count(); ++f) {
    const Session& sess = instance.session(f);
    double worst = 0.0;
    for (int n = 0; n < net.node_count(); ++n) {
      if (n == sess.dst) continue;
      double bal = 0.0;
      for (int l : net.out_links(n)) bal += y.x(l, f);
      for (int l : net.in_links(n)) bal -= y.x(l, f);
      if (n == sess.src) bal -= y.s(f);
      worst = std::max(worst, std::abs(bal));
      r.total_balance_residual += std::abs(bal);
    }
    r.balance_residual[f] = worst;
    r.max_balance_residual = std::max(r.max_balance_residual, worst);
  }
  r.min_slack = std::numeric_limits<double>::infinity();
  r.min_value = std::numeric_limits<double>::infinity();
  for (int f = 0; f < y.session_count(); ++f) r.min_value = std::min(r.min_value, y.s(f));
  for (int l = 0; l < net.link_count(); ++l) {
    const double delta = unused_capacity(net, y, l);
    if (delta < 0.0) r.capacity_violations.push_back(l);
    if (delta < r.min_slack) {
      r.min_slack = delta;
      r.min_slack_link = l;
    }
    for (double v : y.link_flows(l)) r.min_value = std::min(r.min_value, v);
  }
  return r;
}

}  // namespace mrfc
