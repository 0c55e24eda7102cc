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

#ifndef MRFC_OBJECTIVE_HPP_
#define MRFC_OBJECTIVE_HPP_

#include <span>
#include <vector>

#include "mrfc/dense.hpp"
#include "mrfc/network.hpp"

namespace mrfc {

// Offsets into the flat link-major layout
//   [s_1 .. s_F | x_1^(1) .. x_1^(F) | ... | x_L^(1) .. x_L^(F)],
// the ordering in which the barrier Hessian is block diagonal.
struct FlatIndex {
  int sessions = 0;
  int links = 0;

  int s(int f) const { return f; }
  int x(int l, int f) const { return sessions + l * sessions + f; }
  int size() const { return (links + 1) * sessions; }
};

// Primal iterate: session rates and per-link per-session flows. Flows are
// stored link-major, x[l * F + f].
class PrimalPoint {
 public:
  PrimalPoint() = default;
  PrimalPoint(int links, int sessions)
      : links_(links), sessions_(sessions), s_(sessions, 0.0),
        x_(static_cast<std::size_t>(links) * sessions, 0.0) {}

  int link_count() const { return links_; }
  int session_count() const { return sessions_; }
  FlatIndex index() const { return {sessions_, links_}; }

  double& s(int f) { return s_[f]; }
  double s(int f) const { return s_[f]; }
  double& x(int l, int f) { return x_[static_cast<std::size_t>(l) * sessions_ + f]; }
  double x(int l, int f) const {
    return x_[static_cast<std::size_t>(l) * sessions_ + f];
  }

  std::span<const double> rates() const { return s_; }
  std::span<double> rates() { return s_; }
  // x_l^(1..F) for one link.
  std::span<const double> link_flows(int l) const {
    return {x_.data() + static_cast<std::size_t>(l) * sessions_,
            static_cast<std::size_t>(sessions_)};
  }
  std::span<double> link_flows(int l) {
    return {x_.data() + static_cast<std::size_t>(l) * sessions_,
            static_cast<std::size_t>(sessions_)};
  }
  std::span<const double> flows() const { return x_; }

  // Flat vector in FlatIndex order (which coincides with storage order).
  std::vector<double> flatten() const;
  static PrimalPoint Unflatten(std::span<const double> flat, int links,
                               int sessions);

  bool operator==(const PrimalPoint&) const = default;

 private:
  int links_ = 0;
  int sessions_ = 0;
  std::vector<double> s_;
  std::vector<double> x_;
};

struct BarrierConfig {
  double t = 1.0;       // initial barrier parameter
  double mu = 10.0;     // t multiplier between stages
  double gap_tol = 0.05;  // stop once m / t < gap_tol

  void validate() const;
};

// delta_l = C_l - sum_f x_l^(f).
double unused_capacity(const Network& network, const PrimalPoint& y, int l);
// ||x^_l||^2 = sum_f (x_l^(f))^2 + delta_l^2.
double link_sq_norm(const Network& network, const PrimalPoint& y, int l);

// Coordinates and slacks must exceed this to count as interior.
double interior_floor(const Network& network);
bool is_interior(const Instance& instance, const PrimalPoint& y);
// Throws DomainError naming the first offending coordinate.
void require_interior(const Instance& instance, const PrimalPoint& y);

double total_utility(const Instance& instance, std::span<const double> rates);

// -t sum U_f(s_f) - sum_l log delta_l - sum_f log s_f - sum_{l,f} log x_l^(f)
double objective_value(const Instance& instance, const PrimalPoint& y, double t);
std::vector<double> gradient(const Instance& instance, const PrimalPoint& y,
                             double t);

// S is diagonal (one entry per session); X_l is dense F x F per link.
struct HessianBlocks {
  std::vector<double> source;
  std::vector<Matrix> links;
};
HessianBlocks hessian_blocks(const Instance& instance, const PrimalPoint& y,
                             double t);

// Source entry S_ff = -t U''(s) + 1/s^2.
double source_hessian(const UtilitySpec& utility, double s, double t);

struct FeasibilityReport {
  std::vector<double> balance_residual;  // per session, infinity norm
  double max_balance_residual = 0.0;
  double total_balance_residual = 0.0;  // 1-norm over every balance row
  double min_slack = 0.0;
  int min_slack_link = -1;
  double min_value = 0.0;  // smallest s_f or x_l^(f)
  std::vector<int> capacity_violations;  // links with delta_l < 0

  bool ok(double balance_tol) const {
    return max_balance_residual <= balance_tol && capacity_violations.empty() &&
           min_slack > 0.0 && min_value > 0.0;
  }
};

// Residuals of A^(f) x^(f) - s_f b~^(f) = 0, evaluated node by node over all
// non-destination nodes.
FeasibilityReport check_feasibility(const Instance& instance,
                                    const PrimalPoint& y);

}  // namespace mrfc

#endif  // MRFC_OBJECTIVE_HPP_
