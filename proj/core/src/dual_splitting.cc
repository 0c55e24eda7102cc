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

#include "mrfc/dual_splitting.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrfc/errors.hpp"
#include "mrfc/newton_primal.hpp"
#include "mrfc/oracle.hpp"

namespace mrfc {

void SplitConfig::validate() const {
  if (!(alpha > 0.5) || !std::isfinite(alpha))
    throw InvalidInputError("splitting alpha must be greater than 1/2, got " +
                            std::to_string(alpha));
  if (!(inner_tol > 0.0)) throw InvalidInputError("inner_tol must be positive");
  if (max_inner < 1) throw InvalidInputError("max_inner must be at least 1");
  if (!(reduction >= 0.0 && reduction < 1.0))
    throw InvalidInputError("reduction must lie in [0, 1)");
}

double SplitConfig::stop_level(double initial_residual) const {
  return std::max(inner_tol, reduction * initial_residual);
}

LinkTerms link_terms(std::span<const double> x, double delta) {
  LinkTerms out;
  link_terms(x, delta, out);
  return out;
}

void link_terms(std::span<const double> x, double delta, LinkTerms& out) {
  if (!(delta > 0.0)) throw DomainError("link slack must be positive");
  const std::size_t n = x.size();
  out.delta = delta;
  out.sq_norm = delta * delta;
  out.x2.resize(n);
  for (std::size_t f = 0; f < n; ++f) {
    if (!(x[f] > 0.0)) throw DomainError("link flows must be positive");
    out.x2[f] = x[f] * x[f];
    out.sq_norm += out.x2[f];
  }
  out.d.resize(n);
  out.q.resize(n);
  double coupling = 0.0;
  for (std::size_t f = 0; f < n; ++f) {
    out.d[f] = out.x2[f] * (1.0 - out.x2[f] / out.sq_norm);
    const double scaled = out.x2[f] * (1.0 / delta - 1.0 / x[f]);
    out.q[f] = scaled;
    coupling += scaled;
  }
  coupling /= out.sq_norm;
  for (std::size_t f = 0; f < n; ++f) out.q[f] -= out.x2[f] * coupling;
}

SourceTerms source_terms(const UtilitySpec& utility, double s, double t) {
  const double h = source_hessian(utility, s, t);
  if (!(h > 0.0)) throw DomainError("source Hessian entry is not positive");
  return {1.0 / h, (-t * utility.first(s) - 1.0 / s) / h};
}

SplitSystem::SplitSystem(std::vector<double> diag,
                         std::vector<std::vector<Entry>> off,
                         std::vector<double> rhs)
    : diag_(std::move(diag)), off_(std::move(off)), rhs_(std::move(rhs)) {
  if (off_.size() != diag_.size() || rhs_.size() != diag_.size())
    throw InvalidInputError("split system parts have mismatched sizes");
  abs_sums_.assign(diag_.size(), 0.0);
  for (std::size_t i = 0; i < off_.size(); ++i)
    for (const Entry& e : off_[i]) abs_sums_[i] += std::abs(e.value);
}

SplitSystem SplitSystem::FromDense(const Matrix& g, std::span<const double> rhs) {
  const std::size_t n = g.rows();
  std::vector<double> diag(n);
  std::vector<std::vector<Entry>> off(n);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = g(i, i);
    for (std::size_t j = 0; j < n; ++j)
      if (j != i && g(i, j) != 0.0) off[i].push_back({static_cast<int>(j), g(i, j)});
  }
  return SplitSystem(std::move(diag), std::move(off),
                     std::vector<double>(rhs.begin(), rhs.end()));
}

Matrix SplitSystem::dense() const {
  Matrix g(diag_.size(), diag_.size());
  for (std::size_t i = 0; i < diag_.size(); ++i) {
    g(i, i) = diag_[i];
    for (const Entry& e : off_[i]) g(i, e.col) += e.value;
  }
  return g;
}

std::vector<double> SplitSystem::multiply(std::span<const double> w) const {
  std::vector<double> out(diag_.size());
  for (std::size_t i = 0; i < diag_.size(); ++i) {
    double acc = diag_[i] * w[i];
    for (const Entry& e : off_[i]) acc += e.value * w[e.col];
    out[i] = acc;
  }
  return out;
}

double SplitSystem::residual(std::span<const double> w) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < diag_.size(); ++i) {
    double acc = diag_[i] * w[i] - rhs_[i];
    for (const Entry& e : off_[i]) acc += e.value * w[e.col];
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

double SplitSystem::relative_residual(std::span<const double> w) const {
  return residual(w) / (1.0 + max_abs(rhs_));
}

SplitSystem assemble_dual_system(const Instance& instance, const PrimalPoint& y,
                                 double t) {
  require_interior(instance, y);
  const Network& net = instance.network();
  const int sessions = instance.session_count();
  const int dim = dual_dimension(instance);

  std::vector<LinkTerms> terms;
  terms.reserve(net.link_count());
  for (int l = 0; l < net.link_count(); ++l)
    terms.push_back(link_terms(y.link_flows(l), unused_capacity(net, y, l)));

  std::vector<double> diag(dim, 0.0);
  std::vector<std::vector<SplitSystem::Entry>> off(dim);
  std::vector<double> rhs(dim, 0.0);

  for (int n = 0; n < net.node_count(); ++n) {
    for (int f = 0; f < sessions; ++f) {
      const int i = dual_row(instance, n, f);
      if (i < 0) continue;
      auto& row = off[i];
      for (int l : net.incident_links(n)) {
        const LinkTerms& lt = terms[l];
        const int m = net.other_end(l, n);
        const bool outgoing = net.link(l).tx == n;
        diag[i] += lt.d[f];
        rhs[i] += outgoing ? lt.q[f] - y.x(l, f) : y.x(l, f) - lt.q[f];
        const int same = dual_row(instance, m, f);
        if (same >= 0) row.push_back({same, -lt.d[f]});
        for (int g = 0; g < sessions; ++g) {
          if (g == f) continue;
          const double c = lt.coupling(f, g);
          const int here = dual_row(instance, n, g);
          if (here >= 0) row.push_back({here, -c});
          const int there = dual_row(instance, m, g);
          if (there >= 0) row.push_back({there, c});
        }
      }
      const Session& sess = instance.session(f);
      if (n == sess.src) {
        const SourceTerms st = source_terms(sess.utility, y.s(f), t);
        diag[i] += st.sigma;
        rhs[i] += y.s(f) - st.grad_term;
      }
      // Parallel links and shared neighbors produce repeated columns.
      std::sort(row.begin(), row.end(),
                [](const auto& a, const auto& b) { return a.col < b.col; });
      std::vector<SplitSystem::Entry> merged;
      for (const auto& e : row) {
        if (!merged.empty() && merged.back().col == e.col)
          merged.back().value += e.value;
        else
          merged.push_back(e);
      }
      row = std::move(merged);
    }
  }
  return SplitSystem(std::move(diag), std::move(off), std::move(rhs));
}

Splitting split_matrices(const Matrix& g, double alpha) {
  SplitConfig{alpha}.validate();
  const std::size_t n = g.rows();
  Splitting out{Matrix(n, n), g, Matrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.lambda(i, i) = g(i, i);
    out.omega(i, i) = 0.0;
  }
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += std::abs(out.omega(i, j));
    out.omega_bar(i, i) = acc;
  }
  return out;
}

std::vector<double> splitting_iterate(std::span<const double> w,
                                      const SplitSystem& system, double alpha) {
  const int n = system.dimension();
  const auto diag = system.diag();
  const auto bar = system.abs_row_sums();
  const auto rhs = system.rhs();
  std::vector<double> next(n);
  for (int i = 0; i < n; ++i) {
    const double denom = diag[i] + alpha * bar[i];
    if (!(denom > 0.0))
      throw DomainError("splitting diagonal entry " + std::to_string(i) +
                        " is not positive");
    double acc = alpha * bar[i] * w[i] + rhs[i];
    for (const auto& e : system.off(i)) acc -= e.value * w[e.col];
    next[i] = acc / denom;
  }
  return next;
}

DualSolveResult solve_duals(const SplitSystem& system, const SplitConfig& config,
                            std::span<const double> w0) {
  config.validate();
  if (w0.size() != static_cast<std::size_t>(system.dimension()))
    throw InvalidInputError("dual start has the wrong length");
  DualSolveResult out;
  out.w.assign(w0.begin(), w0.end());
  out.final_residual = system.relative_residual(out.w);
  const double level = config.stop_level(out.final_residual);
  while (out.final_residual > level) {
    if (out.iterations >= config.max_inner)
      throw ConvergenceError("dual splitting did not reach tolerance in " +
                                 std::to_string(config.max_inner) + " iterations",
                             out.final_residual);
    out.w = splitting_iterate(out.w, system, config.alpha);
    ++out.iterations;
    out.final_residual = system.relative_residual(out.w);
    out.residuals.push_back(out.final_residual);
  }
  return out;
}

LocalDualUpdate local_dual_update(const NodeNeighborhood& view, double alpha) {
  const int n = view.node;
  const int f = view.session;
  const int sessions = static_cast<int>(view.destinations.size());
  if (f < 0 || f >= sessions || view.w_self.size() != view.destinations.size())
    throw InvariantError("node " + std::to_string(n) +
                         ": neighborhood snapshot is missing session state");
  if (n == view.destinations[f])
    throw InvariantError("no dual update at a session's destination");

  LocalDualUpdate out;
  LinkTerms lt;
  double lambda = 0.0;
  double bar = 0.0;
  double rhs = 0.0;
  for (const IncidentLinkState& k : view.links) {
    if (k.tx != n && k.rx != n)
      throw InvariantError("node " + std::to_string(n) + " is not an endpoint of link " +
                           std::to_string(k.link));
    if (static_cast<int>(k.x.size()) != sessions ||
        static_cast<int>(k.w_tx.size()) != sessions ||
        static_cast<int>(k.w_rx.size()) != sessions)
      throw InvariantError("node " + std::to_string(n) +
                           ": missing neighbor state for link " +
                           std::to_string(k.link));
    const bool outgoing = k.tx == n;
    const int m = outgoing ? k.rx : k.tx;
    const auto& w_other = outgoing ? k.w_rx : k.w_tx;
    link_terms(k.x, k.delta, lt);

    lambda += lt.d[f];
    rhs += outgoing ? lt.q[f] - k.x[f] : k.x[f] - lt.q[f];
    if (m != view.destinations[f]) {
      bar += lt.d[f];
      out.v1 += lt.d[f] * w_other[f];
    }
    for (int g = 0; g < sessions; ++g) {
      if (g == f) continue;
      const double c = lt.coupling(f, g);
      if (n != view.destinations[g]) {
        bar += c;
        out.v2 += c * view.w_self[g];
      }
      if (m != view.destinations[g]) {
        bar += c;
        out.v2 -= c * w_other[g];
      }
    }
  }
  if (view.source) {
    const SourceTerms st =
        source_terms(view.source->utility, view.source->s, view.source->t);
    lambda += st.sigma;
    rhs += view.source->s - st.grad_term;
  }
  out.u = lambda + alpha * bar;
  if (!(out.u > 0.0))
    throw DomainError("node " + std::to_string(n) + ", session " +
                      std::to_string(f) +
                      ": zero update weight (no incident links and not a source)");
  out.v1 += alpha * bar * view.w_self[f];
  out.w = -rhs;
  out.next = (out.v1 + out.v2 - out.w) / out.u;
  return out;
}

SpectralEstimate estimate_spectral_radius(const SplitSystem& system,
                                          double alpha, int max_iterations,
                                          double tol) {
  SplitConfig{alpha}.validate();
  const int n = system.dimension();
  SpectralEstimate out;
  if (n == 0) return out;
  const auto diag = system.diag();
  const auto bar = system.abs_row_sums();
  // B = D^-1/2 (a Omega-bar - Omega) D^-1/2 with D = Lambda + a Omega-bar is
  // symmetric and similar to the iteration matrix.
  std::vector<double> scale(n);
  for (int i = 0; i < n; ++i) {
    const double d = diag[i] + alpha * bar[i];
    if (!(d > 0.0)) throw DomainError("splitting diagonal is not positive");
    scale[i] = 1.0 / std::sqrt(d);
  }
  auto apply = [&](const std::vector<double>& v) {
    std::vector<double> out_v(n);
    for (int i = 0; i < n; ++i) {
      double acc = alpha * bar[i] * scale[i] * v[i];
      for (const auto& e : system.off(i)) acc -= e.value * scale[e.col] * v[e.col];
      out_v[i] = scale[i] * acc;
    }
    return out_v;
  };
  auto norm = [](const std::vector<double>& v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
  };

  // Deterministic start with no special alignment to the eigenvectors.
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = 1.0 + 0.1 * std::sin(1.0 + i);
  double nv = norm(v);
  for (double& x : v) x /= nv;
  // Iterate with B^2 so that eigenvalues +rho and -rho do not make the
  // iterate oscillate; the Rayleigh quotient residual bounds the error.
  for (int k = 1; k <= max_iterations; ++k) {
    const std::vector<double> bv = apply(v);
    const std::vector<double> bbv = apply(bv);
    double theta = 0.0;
    for (double x : bv) theta += x * x;
    out.iterations = k;
    if (theta == 0.0) {
      out.rho = 0.0;
      return out;
    }
    double res = 0.0;
    for (int i = 0; i < n; ++i) res += (bbv[i] - theta * v[i]) * (bbv[i] - theta * v[i]);
    const double nz = norm(bbv);
    for (int i = 0; i < n; ++i) v[i] = bbv[i] / nz;
    if (std::sqrt(res) <= tol) {
      out.rho = std::sqrt(theta);
      return out;
    }
  }
  Matrix b(n, n);
  for (int i = 0; i < n; ++i) {
    b(i, i) = alpha * bar[i] * scale[i] * scale[i];
    for (const auto& e : system.off(i)) b(i, e.col) -= e.value * scale[i] * scale[e.col];
  }
  double rho = 0.0;
  for (double ev : oracle::symmetric_eigenvalues(b)) rho = std::max(rho, std::abs(ev));
  out.rho = rho;
  out.dense_fallback = true;
  return out;
}

}  // namespace mrfc
