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

#ifndef MRFC_ORACLE_HPP_
#define MRFC_ORACLE_HPP_

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "mrfc/dense.hpp"
#include "mrfc/network.hpp"
#include "mrfc/newton_primal.hpp"
#include "mrfc/objective.hpp"

// Centralized dense ground truth. Nothing here calls the structured fast
// paths: matrices are built entry by entry from the problem definition and
// handed to a general-purpose dense solver, so agreement with the fast paths
// is evidence rather than tautology.
namespace mrfc::oracle {

// M~ with rows stacked session-major (destination rows removed) and columns
// in the link-major primal order.
Matrix constraint_matrix(const Instance& instance);

// Straight-line re-implementations of the barrier and its derivatives.
double objective(const Instance& instance, std::span<const double> flat, double t);
std::vector<double> gradient(const Instance& instance, std::span<const double> flat,
                             double t);
Matrix hessian(const Instance& instance, std::span<const double> flat, double t);

struct KktSystem {
  Matrix matrix;             // [[H, M^T], [M, 0]]
  std::vector<double> rhs;   // [-grad f; -M y]
};
KktSystem kkt_system(const Instance& instance, const PrimalPoint& y, double t);

// ||K z - b||_inf / (||K||_inf ||z||_inf + ||b||_inf)
double relative_residual(const Matrix& k, std::span<const double> z,
                         std::span<const double> b);

struct KktSolution {
  std::vector<double> dy;         // primal direction, flat
  std::vector<double> w_reduced;  // stacked duals without destination rows
  DualPoint w;
  double relative_residual = 0.0;
};
KktSolution kkt_solve(const Instance& instance, const PrimalPoint& y, double t);

// LU with partial pivoting plus one refinement step. Throws InvariantError
// on a singular matrix.
std::vector<double> solve(const Matrix& a, std::span<const double> b);
Matrix invert(const Matrix& a);
// ||A A^-1 - I||_inf
double inverse_residual(const Matrix& a, const Matrix& inverse);

std::vector<double> symmetric_eigenvalues(const Matrix& a);
std::vector<std::complex<double>> eigenvalues(const Matrix& a);
double spectral_radius(const Matrix& a);
bool cholesky_succeeds(const Matrix& a);

// G = M~ H~^-1 M~^T and its right-hand side -M~ H~^-1 grad f, both dense.
Matrix dual_matrix(const Instance& instance, const PrimalPoint& y, double t);
std::vector<double> dual_rhs(const Instance& instance, const PrimalPoint& y,
                             double t);

// sqrt(d^T H~ d).
double decrement(const Instance& instance, const PrimalPoint& y,
                 std::span<const double> direction, double t);

// Central differences with per-coordinate step h_i = rel_step * max(1, |x_i|).
// Throws DomainError if any step would leave the domain (callers pass a
// predicate).
std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& f,
                                std::span<const double> x, double rel_step);
Matrix fd_jacobian(
    const std::function<std::vector<double>(std::span<const double>)>& g,
    std::span<const double> x, double rel_step);

// Derivatives of the barrier objective by central differences, refusing
// points within a step of the boundary.
std::vector<double> fd_objective_gradient(const Instance& instance,
                                          const PrimalPoint& y, double t,
                                          double rel_step = 1e-6);
Matrix fd_objective_hessian(const Instance& instance, const PrimalPoint& y,
                            double t, double rel_step = 1e-6);

// Dense centralized barrier method (KKT Newton with backtracking), used as
// the reference optimum for iteration-count comparisons. Starts from y0,
// which must be interior and balanced.
struct ReferenceSolution {
  PrimalPoint y;
  double utility = 0.0;
  double t = 0.0;
  int newton_iterations = 0;
};
ReferenceSolution barrier_reference(const Instance& instance, const PrimalPoint& y0,
                                    double t0, double t_final, double mu = 10.0);

}  // namespace mrfc::oracle

#endif  // MRFC_ORACLE_HPP_
