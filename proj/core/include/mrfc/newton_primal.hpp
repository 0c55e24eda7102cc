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

#ifndef MRFC_NEWTON_PRIMAL_HPP_
#define MRFC_NEWTON_PRIMAL_HPP_

#include <span>
#include <vector>

#include "mrfc/dense.hpp"
#include "mrfc/network.hpp"
#include "mrfc/objective.hpp"

namespace mrfc {

// Flow-balance multipliers w~_n^(f), stored node-major w[n * F + f]. The
// entry at each session's destination is held at exactly zero.
class DualPoint {
 public:
  DualPoint() = default;
  DualPoint(int nodes, int sessions)
      : nodes_(nodes), sessions_(sessions),
        w_(static_cast<std::size_t>(nodes) * sessions, 0.0) {}

  // 1 off-destination, 0 at each destination.
  static DualPoint Initial(const Instance& instance);

  int node_count() const { return nodes_; }
  int session_count() const { return sessions_; }

  double& operator()(int n, int f) {
    return w_[static_cast<std::size_t>(n) * sessions_ + f];
  }
  double operator()(int n, int f) const {
    return w_[static_cast<std::size_t>(n) * sessions_ + f];
  }
  std::span<const double> values() const { return w_; }

  // Stacked reduced vector [w~^(1); ...; w~^(F)] with the destination rows
  // removed, matching the rows of the dual system.
  std::vector<double> to_reduced(const Instance& instance) const;
  static DualPoint FromReduced(const Instance& instance,
                               std::span<const double> reduced);

  bool operator==(const DualPoint&) const = default;

 private:
  int nodes_ = 0;
  int sessions_ = 0;
  std::vector<double> w_;
};

// Row of the stacked dual system for (node n, session f); -1 at dst(f).
int dual_row(const Instance& instance, int n, int f);
int dual_dimension(const Instance& instance);

// Diagonal of S^-1; throws DomainError on a nonpositive entry.
std::vector<double> invert_source_block(std::span<const double> source_diag);

// Closed-form X_l^-1 for flows x_l and slack delta_l.
Matrix invert_link_block(std::span<const double> x, double delta);

// Delta s_f from the source's own rate and its multiplier.
double source_direction(const UtilitySpec& utility, double s, double t,
                        double w_src);

// Delta x_l^(1..F) from the link's own flows and the multipliers at its two
// endpoints (w_tx[f] = w~_tx(l)^(f), w_rx likewise).
std::vector<double> link_direction(std::span<const double> x, double delta,
                                   std::span<const double> w_tx,
                                   std::span<const double> w_rx);

struct PrimalDirection {
  std::vector<double> ds;  // per session
  std::vector<double> dx;  // link-major, dx[l * F + f]

  double x(int l, int f, int sessions) const {
    return dx[static_cast<std::size_t>(l) * sessions + f];
  }
  std::vector<double> flatten() const;
};

PrimalDirection primal_direction(const Instance& instance, const PrimalPoint& y,
                                 const DualPoint& w, double t);

}  // namespace mrfc

#endif  // MRFC_NEWTON_PRIMAL_HPP_
