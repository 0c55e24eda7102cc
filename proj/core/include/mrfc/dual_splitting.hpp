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

#ifndef MRFC_DUAL_SPLITTING_HPP_
#define MRFC_DUAL_SPLITTING_HPP_

#include <optional>
#include <span>
#include <vector>

#include "mrfc/dense.hpp"
#include "mrfc/network.hpp"
#include "mrfc/objective.hpp"

namespace mrfc {

struct SplitConfig {
  double alpha = 0.55;
  double inner_tol = 1e-6;  // on ||G w - rhs||_inf / (1 + ||rhs||_inf)
  int max_inner = 200000;
  // When positive, also stop once the relative residual has dropped by this
  // factor from its value at the warm start.
  double reduction = 0.0;

  void validate() const;
  double stop_level(double initial_residual) const;
};

// Quantities a link derives from its own flows, shared by every node at
// either end. d[f] is the diagonal of X_l^-1, x2[f] = (x_l^(f))^2, and
// q = X_l^-1 times the link's gradient block.
struct LinkTerms {
  double delta = 0.0;
  double sq_norm = 0.0;
  std::vector<double> x2;
  std::vector<double> d;
  std::vector<double> q;

  // Off-diagonal magnitude (x^(f1) x^(f2))^2 / ||x^||^2.
  double coupling(int f1, int f2) const { return x2[f1] * x2[f2] / sq_norm; }
};
LinkTerms link_terms(std::span<const double> x, double delta);
// Same, reusing the buffers of `out`.
void link_terms(std::span<const double> x, double delta, LinkTerms& out);

// sigma = 1 / S_ff and grad_term = S_ff^-1 times the rate gradient.
struct SourceTerms {
  double sigma = 0.0;
  double grad_term = 0.0;
};
SourceTerms source_terms(const UtilitySpec& utility, double s, double t);

// The dual system G w~ = rhs with G = M~ H~^-1 M~^T, kept as sparse rows
// (diagonal + off-diagonal entries). Rows are stacked session-major with
// each session's destination row removed. rhs = M~ y~ - M~ H~^-1 grad f, so
// a step also cancels any flow-balance residual left by earlier steps.
class SplitSystem {
 public:
  struct Entry {
    int col = 0;
    double value = 0.0;
  };

  SplitSystem() = default;
  SplitSystem(std::vector<double> diag, std::vector<std::vector<Entry>> off,
              std::vector<double> rhs);
  static SplitSystem FromDense(const Matrix& g, std::span<const double> rhs);

  int dimension() const { return static_cast<int>(diag_.size()); }
  std::span<const double> diag() const { return diag_; }
  std::span<const Entry> off(int i) const { return off_[i]; }
  std::span<const double> rhs() const { return rhs_; }
  // Row sums of |Omega|, the diagonal of Omega-bar.
  std::span<const double> abs_row_sums() const { return abs_sums_; }

  Matrix dense() const;
  std::vector<double> multiply(std::span<const double> w) const;
  // ||G w - rhs||_inf
  double residual(std::span<const double> w) const;
  double relative_residual(std::span<const double> w) const;

 private:
  std::vector<double> diag_;
  std::vector<std::vector<Entry>> off_;
  std::vector<double> rhs_;
  std::vector<double> abs_sums_;
};

SplitSystem assemble_dual_system(const Instance& instance, const PrimalPoint& y,
                                 double t);

struct Splitting {
  Matrix lambda;     // diag(G)
  Matrix omega;      // G - lambda
  Matrix omega_bar;  // diag of absolute row sums of omega
};
Splitting split_matrices(const Matrix& g, double alpha);

// One step w' = (Lambda + a Omega-bar)^-1 [(a Omega-bar - Omega) w + rhs].
std::vector<double> splitting_iterate(std::span<const double> w,
                                      const SplitSystem& system, double alpha);

struct DualSolveResult {
  std::vector<double> w;
  int iterations = 0;
  std::vector<double> residuals;  // relative residual after each iterate
  double final_residual = 0.0;
};
// Throws ConvergenceError after config.max_inner iterates.
DualSolveResult solve_duals(const SplitSystem& system, const SplitConfig& config,
                            std::span<const double> w0);

// What node n can see when updating w~_n^(f): its own multipliers, every
// incident link's flows and slack, and the multipliers at both endpoints of
// those links. Source state is present only when n = src(f).
struct IncidentLinkState {
  int link = -1;
  int tx = -1;
  int rx = -1;
  std::vector<double> x;
  double delta = 0.0;
  double sq_norm = 0.0;
  std::vector<double> w_tx;
  std::vector<double> w_rx;
};

struct SourceState {
  double s = 0.0;
  UtilitySpec utility;
  double t = 1.0;
};

struct NodeNeighborhood {
  int node = -1;
  int session = -1;
  std::vector<int> destinations;  // dst of every session
  std::vector<double> w_self;     // w~_n^(.) for all sessions
  std::vector<IncidentLinkState> links;
  std::optional<SourceState> source;
};

// The update in the form w' = (V1 + V2 - W) / U: U is the diagonal of
// Lambda + a Omega-bar, V1 collects same-session terms (own a Omega-bar
// weight and neighbors), V2 cross-session terms, W = -rhs.
struct LocalDualUpdate {
  double u = 0.0;
  double v1 = 0.0;
  double v2 = 0.0;
  double w = 0.0;
  double next = 0.0;
};
LocalDualUpdate local_dual_update(const NodeNeighborhood& view, double alpha);

struct SpectralEstimate {
  double rho = 0.0;
  int iterations = 0;
  bool dense_fallback = false;
};
// rho((Lambda + a Omega-bar)^-1 (a Omega-bar - Omega)) by power iteration on
// the symmetrically scaled iteration matrix, stopped once the Rayleigh
// residual is below `tol`; falls back to a dense eigen-solve if it does not
// settle within `max_iterations`.
SpectralEstimate estimate_spectral_radius(const SplitSystem& system,
                                          double alpha, int max_iterations = 20000,
                                          double tol = 1e-11);

}  // namespace mrfc

#endif  // MRFC_DUAL_SPLITTING_HPP_
