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

#include "mrfc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "mrfc/errors.hpp"

namespace mrfc::oracle {

namespace {

using EMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using EVector = Eigen::VectorXd;

EMatrix to_eigen(const Matrix& m) {
  EMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

Matrix from_eigen(const EMatrix& m) {
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

// Flat layout: s_f at f, x_l^(f) at F + l F + f.
int sx(int f) { return f; }
int xx(int sessions, int l, int f) { return sessions + l * sessions + f; }

double slack(const Instance& inst, std::span<const double> flat, int l) {
  const int sessions = inst.session_count();
  double used = 0.0;
  for (int f = 0; f < sessions; ++f) used += flat[xx(sessions, l, f)];
  return inst.network().link(l).capacity - used;
}

bool inside(const Instance& inst, std::span<const double> flat) {
  for (double v : flat)
    if (!(v > 0.0)) return false;
  for (int l = 0; l < inst.link_count(); ++l)
    if (!(slack(inst, flat, l) > 0.0)) return false;
  return true;
}

int reduced(int n, int dst) { return n == dst ? -1 : (n < dst ? n : n - 1); }

}  // namespace

Matrix constraint_matrix(const Instance& inst) {
  const int nodes = inst.node_count();
  const int sessions = inst.session_count();
  const int links = inst.link_count();
  Matrix m((nodes - 1) * sessions, (links + 1) * sessions);
  for (int f = 0; f < sessions; ++f) {
    const Session& sess = inst.session(f);
    const int base = f * (nodes - 1);
    m(base + reduced(sess.src, sess.dst), sx(f)) = 1.0;
    for (int l = 0; l < links; ++l) {
      const Link& k = inst.network().link(l);
      const int rt = reduced(k.tx, sess.dst);
      const int rr = reduced(k.rx, sess.dst);
      if (rt >= 0) m(base + rt, xx(sessions, l, f)) = -1.0;
      if (rr >= 0) m(base + rr, xx(sessions, l, f)) = 1.0;
    }
  }
  return m;
}

double objective(const Instance& inst, std::span<const double> flat, double t) {
  if (!inside(inst, flat)) return std::numeric_limits<double>::infinity();
  const int sessions = inst.session_count();
  double value = 0.0;
  for (int f = 0; f < sessions; ++f) {
    value -= t * inst.session(f).utility.value(flat[sx(f)]);
    value -= std::log(flat[sx(f)]);
  }
  for (int l = 0; l < inst.link_count(); ++l) {
    value -= std::log(slack(inst, flat, l));
    for (int f = 0; f < sessions; ++f) value -= std::log(flat[xx(sessions, l, f)]);
  }
  return value;
}

std::vector<double> gradient(const Instance& inst, std::span<const double> flat,
                             double t) {
  if (!inside(inst, flat)) throw DomainError("oracle gradient outside the domain");
  const int sessions = inst.session_count();
  std::vector<double> g(flat.size());
  for (int f = 0; f < sessions; ++f) {
    const double s = flat[sx(f)];
    g[sx(f)] = -t * inst.session(f).utility.first(s) - 1.0 / s;
  }
  for (int l = 0; l < inst.link_count(); ++l) {
    const double d = slack(inst, flat, l);
    for (int f = 0; f < sessions; ++f) {
      const double x = flat[xx(sessions, l, f)];
      g[xx(sessions, l, f)] = 1.0 / d - 1.0 / x;
    }
  }
  return g;
}

Matrix hessian(const Instance& inst, std::span<const double> flat, double t) {
  if (!inside(inst, flat)) throw DomainError("oracle Hessian outside the domain");
  const int sessions = inst.session_count();
  Matrix h(flat.size(), flat.size());
  for (int f = 0; f < sessions; ++f) {
    const double s = flat[sx(f)];
    h(sx(f), sx(f)) = -t * inst.session(f).utility.second(s) + 1.0 / (s * s);
  }
  for (int l = 0; l < inst.link_count(); ++l) {
    const double d = slack(inst, flat, l);
    for (int f1 = 0; f1 < sessions; ++f1) {
      for (int f2 = 0; f2 < sessions; ++f2) {
        double v = 1.0 / (d * d);
        if (f1 == f2) {
          const double x = flat[xx(sessions, l, f1)];
          v += 1.0 / (x * x);
        }
        h(xx(sessions, l, f1), xx(sessions, l, f2)) = v;
      }
    }
  }
  return h;
}

KktSystem kkt_system(const Instance& inst, const PrimalPoint& y, double t) {
  const std::vector<double> flat = y.flatten();
  const Matrix h = hessian(inst, flat, t);
  const Matrix m = constraint_matrix(inst);
  const std::size_t n = h.rows();
  const std::size_t p = m.rows();
  KktSystem out{Matrix(n + p, n + p), std::vector<double>(n + p, 0.0)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.matrix(i, j) = h(i, j);
  for (std::size_t r = 0; r < p; ++r)
    for (std::size_t j = 0; j < n; ++j) {
      out.matrix(n + r, j) = m(r, j);
      out.matrix(j, n + r) = m(r, j);
    }
  const std::vector<double> g = gradient(inst, flat, t);
  for (std::size_t i = 0; i < n; ++i) out.rhs[i] = -g[i];
  const std::vector<double> balance = m * flat;
  for (std::size_t r = 0; r < p; ++r) out.rhs[n + r] = -balance[r];
  return out;
}

double relative_residual(const Matrix& k, std::span<const double> z,
                         std::span<const double> b) {
  const std::vector<double> kz = k * z;
  double res = 0.0;
  for (std::size_t i = 0; i < kz.size(); ++i) res = std::max(res, std::abs(kz[i] - b[i]));
  double knorm = 0.0;
  for (std::size_t i = 0; i < k.rows(); ++i) {
    double row = 0.0;
    for (double v : k.row(i)) row += std::abs(v);
    knorm = std::max(knorm, row);
  }
  const double denom = knorm * max_abs(z) + max_abs(b);
  return denom == 0.0 ? res : res / denom;
}

std::vector<double> solve(const Matrix& a, std::span<const double> b) {
  if (a.rows() != a.cols() || a.rows() != b.size())
    throw InvalidInputError("oracle solve: dimension mismatch");
  const EMatrix ea = to_eigen(a);
  const Eigen::PartialPivLU<EMatrix> lu(ea);
  if (!(lu.rcond() > 1e-15))
    throw InvariantError("oracle solve: matrix is singular to working precision "
                         "(rcond " + std::to_string(lu.rcond()) + ")");
  const EVector eb = Eigen::Map<const EVector>(b.data(), b.size());
  EVector x = lu.solve(eb);
  const EVector r = eb - ea * x;
  x += lu.solve(r);
  return {x.data(), x.data() + x.size()};
}

Matrix invert(const Matrix& a) {
  if (a.rows() != a.cols()) throw InvalidInputError("oracle invert: not square");
  const EMatrix ea = to_eigen(a);
  const Eigen::PartialPivLU<EMatrix> lu(ea);
  if (!(lu.rcond() > 1e-15))
    throw InvariantError("oracle invert: matrix is singular to working precision");
  const EMatrix id = EMatrix::Identity(a.rows(), a.cols());
  EMatrix inv = lu.solve(id);
  inv += lu.solve(id - ea * inv);
  return from_eigen(inv);
}

double inverse_residual(const Matrix& a, const Matrix& inverse) {
  return max_abs((a * inverse) - Matrix::Identity(a.rows()));
}

std::vector<double> symmetric_eigenvalues(const Matrix& a) {
  const Eigen::SelfAdjointEigenSolver<EMatrix> es(to_eigen(a),
                                                  Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw InvariantError("oracle: symmetric eigen-solve failed");
  const EVector ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<std::complex<double>> eigenvalues(const Matrix& a) {
  const Eigen::EigenSolver<EMatrix> es(to_eigen(a), false);
  if (es.info() != Eigen::Success) throw InvariantError("oracle: eigen-solve failed");
  const auto ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double spectral_radius(const Matrix& a) {
  double rho = 0.0;
  for (const auto& ev : eigenvalues(a)) rho = std::max(rho, std::abs(ev));
  return rho;
}

bool cholesky_succeeds(const Matrix& a) {
  const Eigen::LLT<EMatrix> llt(to_eigen(a));
  return llt.info() == Eigen::Success;
}

Matrix dual_matrix(const Instance& inst, const PrimalPoint& y, double t) {
  const Matrix m = constraint_matrix(inst);
  const Matrix hinv = invert(hessian(inst, y.flatten(), t));
  return m * hinv * m.transpose();
}

std::vector<double> dual_rhs(const Instance& inst, const PrimalPoint& y, double t) {
  const std::vector<double> flat = y.flatten();
  const Matrix m = constraint_matrix(inst);
  const std::vector<double> hg = solve(hessian(inst, flat, t), gradient(inst, flat, t));
  const std::vector<double> balance = m * flat;
  std::vector<double> out = m * hg;
  for (std::size_t r = 0; r < out.size(); ++r) out[r] = balance[r] - out[r];
  return out;
}

KktSolution kkt_solve(const Instance& inst, const PrimalPoint& y, double t) {
  const KktSystem sys = kkt_system(inst, y, t);
  // Symmetric equilibration keeps the LU meaningful when barrier terms
  // spread the Hessian over many orders of magnitude.
  const std::size_t dim = sys.matrix.rows();
  std::vector<double> scale(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    double big = 0.0;
    for (double v : sys.matrix.row(i)) big = std::max(big, std::abs(v));
    scale[i] = big > 0.0 ? 1.0 / std::sqrt(big) : 1.0;
  }
  Matrix scaled(dim, dim);
  std::vector<double> scaled_rhs(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j)
      scaled(i, j) = scale[i] * sys.matrix(i, j) * scale[j];
    scaled_rhs[i] = scale[i] * sys.rhs[i];
  }
  std::vector<double> z = solve(scaled, scaled_rhs);
  for (std::size_t i = 0; i < dim; ++i) z[i] *= scale[i];
  const std::size_t n = y.index().size();
  KktSolution out;
  out.dy.assign(z.begin(), z.begin() + n);
  out.w_reduced.assign(z.begin() + n, z.end());
  out.w = DualPoint(inst.node_count(), inst.session_count());
  for (int f = 0; f < inst.session_count(); ++f)
    for (int node = 0; node < inst.node_count(); ++node) {
      const int r = reduced(node, inst.session(f).dst);
      out.w(node, f) = r < 0 ? 0.0 : out.w_reduced[f * (inst.node_count() - 1) + r];
    }
  out.relative_residual = relative_residual(sys.matrix, z, sys.rhs);
  return out;
}

double decrement(const Instance& inst, const PrimalPoint& y,
                 std::span<const double> direction, double t) {
  const Matrix h = hessian(inst, y.flatten(), t);
  const std::vector<double> hd = h * direction;
  double acc = 0.0;
  for (std::size_t i = 0; i < hd.size(); ++i) acc += direction[i] * hd[i];
  return std::sqrt(std::max(acc, 0.0));
}

std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& f,
                                std::span<const double> x, double rel_step) {
  std::vector<double> work(x.begin(), x.end());
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double h = rel_step * std::max(1.0, std::abs(x[i]));
    work[i] = x[i] + h;
    const double up = f(work);
    work[i] = x[i] - h;
    const double down = f(work);
    work[i] = x[i];
    g[i] = (up - down) / (2.0 * h);
  }
  return g;
}

Matrix fd_jacobian(
    const std::function<std::vector<double>(std::span<const double>)>& g,
    std::span<const double> x, double rel_step) {
  std::vector<double> work(x.begin(), x.end());
  const std::size_t rows = g(work).size();
  Matrix jac(rows, x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double h = rel_step * std::max(1.0, std::abs(x[j]));
    work[j] = x[j] + h;
    const std::vector<double> up = g(work);
    work[j] = x[j] - h;
    const std::vector<double> down = g(work);
    work[j] = x[j];
    for (std::size_t i = 0; i < rows; ++i) jac(i, j) = (up[i] - down[i]) / (2.0 * h);
  }
  return jac;
}

namespace {

void require_margin(const Instance& inst, std::span<const double> flat,
                    double rel_step) {
  const int sessions = inst.session_count();
  for (double v : flat)
    if (!(v - rel_step * std::max(1.0, std::abs(v)) > 0.0))
      throw DomainError("finite-difference step would leave the domain");
  for (int l = 0; l < inst.link_count(); ++l) {
    double reach = 0.0;
    for (int f = 0; f < sessions; ++f)
      reach += rel_step * std::max(1.0, std::abs(flat[xx(sessions, l, f)]));
    if (!(slack(inst, flat, l) - reach > 0.0))
      throw DomainError("finite-difference step would exceed a link capacity");
  }
}

}  // namespace

std::vector<double> fd_objective_gradient(const Instance& inst, const PrimalPoint& y,
                                          double t, double rel_step) {
  const std::vector<double> flat = y.flatten();
  require_margin(inst, flat, rel_step);
  return fd_gradient(
      [&](std::span<const double> z) { return objective(inst, z, t); }, flat,
      rel_step);
}

Matrix fd_objective_hessian(const Instance& inst, const PrimalPoint& y, double t,
                            double rel_step) {
  const std::vector<double> flat = y.flatten();
  require_margin(inst, flat, rel_step);
  return fd_jacobian(
      [&](std::span<const double> z) { return gradient(inst, z, t); }, flat,
      rel_step);
}

ReferenceSolution barrier_reference(const Instance& inst, const PrimalPoint& y0,
                                    double t0, double t_final, double mu) {
  if (!inside(inst, y0.flatten()))
    throw DomainError("reference solve needs an interior start");
  ReferenceSolution out;
  out.y = y0;
  double t = t0;
  for (;;) {
    for (int iter = 0;; ++iter) {
      if (iter >= 500)
        throw ConvergenceError("reference barrier solve stalled at t = " +
                                   std::to_string(t),
                               0.0);
      const KktSolution kkt = kkt_solve(inst, out.y, t);
      const std::vector<double> flat = out.y.flatten();
      const double lambda = decrement(inst, out.y, kkt.dy, t);
      const double f0 = objective(inst, flat, t);
      // Half the squared decrement bounds the remaining objective decrease;
      // stop once it is below what double precision can resolve in f.
      if (lambda < 1e-10 || 0.5 * lambda * lambda < 1e-14 * (1.0 + std::abs(f0))) break;
      ++out.newton_iterations;
      const std::vector<double> g = gradient(inst, flat, t);
      double slope = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) slope += g[i] * kkt.dy[i];
      double step = 1.0;
      std::vector<double> trial(flat.size());
      for (;;) {
        for (std::size_t i = 0; i < flat.size(); ++i)
          trial[i] = flat[i] + step * kkt.dy[i];
        const double f1 = objective(inst, trial, t);
        if (f1 <= f0 + 0.1 * step * slope) break;
        step *= 0.5;
        if (step < 1e-14) break;
      }
      if (step < 1e-14) break;  // no further progress at working precision
      out.y = PrimalPoint::Unflatten(trial, inst.link_count(), inst.session_count());
    }
    if (t >= t_final) break;
    t = std::min(t * mu, t_final);
  }
  out.t = t;
  out.utility = total_utility(inst, out.y.rates());
  return out;
}

}  // namespace mrfc::oracle
