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

#include "mrfc/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "mrfc/dual_splitting.hpp"
#include "mrfc/errors.hpp"
#include "mrfc/incidence.hpp"
#include "mrfc/newton_primal.hpp"
#include "mrfc/oracle.hpp"
#include "mrfc/runtime.hpp"

namespace mrfc {

PrimalPoint random_interior_point(const Instance& instance, std::mt19937_64& rng) {
  const Network& net = instance.network();
  const int sessions = instance.session_count();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PrimalPoint y(net.link_count(), sessions);
  for (int f = 0; f < sessions; ++f) y.s(f) = (0.1 + 0.9 * unit(rng)) * net.min_capacity();
  for (int l = 0; l < net.link_count(); ++l) {
    const double fill = 0.05 + 0.9 * unit(rng);
    std::vector<double> share(sessions);
    double total = 0.0;
    for (double& v : share) {
      v = 0.1 + unit(rng);
      total += v;
    }
    for (int f = 0; f < sessions; ++f)
      y.x(l, f) = net.link(l).capacity * fill * share[f] / total;
  }
  return y;
}

namespace {

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

CheckResult run_check(const std::string& name, const std::function<std::string()>& body,
                      const std::function<bool(const std::string&)>& ok) {
  CheckResult r{name, false, ""};
  try {
    r.detail = body();
    r.passed = ok(r.detail);
  } catch (const std::exception& e) {
    r.detail = std::string("exception: ") + e.what();
  }
  return r;
}

// Each check body returns "" on success or a diagnostic; the wrapper turns
// that into a CheckResult.
CheckResult check(const std::string& name, const std::function<std::string()>& body) {
  CheckResult r = run_check(name, body, [](const std::string& d) { return d.empty(); });
  if (r.passed) r.detail = "ok";
  return r;
}

std::string incidence_columns(const Instance& inst) {
  const Matrix a = build_incidence(inst.network());
  for (std::size_t l = 0; l < a.cols(); ++l) {
    int plus = 0, minus = 0;
    double sum = 0.0;
    for (std::size_t n = 0; n < a.rows(); ++n) {
      plus += a(n, l) == 1.0;
      minus += a(n, l) == -1.0;
      sum += a(n, l);
    }
    if (plus != 1 || minus != 1 || sum != 0.0)
      return "column " + std::to_string(l) + " is not a +1/-1 pair";
  }
  return "";
}

std::string reduced_rank(const Instance& inst) {
  for (int f = 0; f < inst.session_count(); ++f) {
    const ReducedIncidence view = reduced_incidence(inst.network(), inst.session(f));
    if (matrix_rank(view.a) != inst.node_count() - 1)
      return "session " + std::to_string(f) + " reduced matrix is rank deficient";
  }
  return "";
}

std::string outer_products(const Instance& inst) {
  const Network& net = inst.network();
  const int rows = inst.node_count() - 1;
  std::vector<ReducedIncidence> views;
  for (int f = 0; f < inst.session_count(); ++f)
    views.push_back(reduced_incidence(net, inst.session(f)));
  for (int f1 = 0; f1 < inst.session_count(); ++f1) {
    // b b^T: a single one at the source row.
    SparseColumn b;
    b.push(views[f1].row_of(views[f1].src), 1.0);
    const Matrix bb = outer_product(b, b, rows, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < rows; ++j) {
        const double expect = (i == j && i == views[f1].row_of(views[f1].src)) ? 1.0 : 0.0;
        if (bb(i, j) != expect) return "source outer product mismatch";
      }
    for (int f2 = 0; f2 < inst.session_count(); ++f2) {
      const int d1 = inst.session(f1).dst;
      const int d2 = inst.session(f2).dst;
      for (int l = 0; l < net.link_count(); ++l) {
        const Matrix got = outer_product(link_column(views[f1], l),
                                         link_column(views[f2], l), rows, rows);
        Matrix expect(rows, rows);
        const int tx = net.link(l).tx;
        const int rx = net.link(l).rx;
        // Nonzeros sit at (tx or rx in session f1) x (tx or rx in session f2)
        // unless that endpoint is the session's destination.
        if (tx != d1 && tx != d2) expect(reduced_row(tx, d1), reduced_row(tx, d2)) = 1.0;
        if (rx != d1 && rx != d2) expect(reduced_row(rx, d1), reduced_row(rx, d2)) = 1.0;
        if (tx != d1 && rx != d2) expect(reduced_row(tx, d1), reduced_row(rx, d2)) = -1.0;
        if (rx != d1 && tx != d2) expect(reduced_row(rx, d1), reduced_row(tx, d2)) = -1.0;
        if (!(got == expect))
          return "link " + std::to_string(l) + ", sessions " + std::to_string(f1) + "/" +
                 std::to_string(f2) + ": outer product does not match the case table";
      }
    }
  }
  return "";
}

}  // namespace

std::vector<CheckResult> validate_instance(const Instance& inst,
                                           const ValidationOptions& opt) {
  SplitConfig{opt.alpha}.validate();
  std::mt19937_64 rng(opt.seed);
  std::vector<PrimalPoint> points;
  for (int i = 0; i < opt.random_points; ++i) points.push_back(random_interior_point(inst, rng));
  const double t = opt.t;
  const int sessions = inst.session_count();

  std::vector<CheckResult> out;
  out.push_back(check("incidence_columns", [&] { return incidence_columns(inst); }));
  out.push_back(check("reduced_rank", [&] { return reduced_rank(inst); }));
  out.push_back(check("outer_products", [&] { return outer_products(inst); }));

  out.push_back(check("gradient_vs_finite_differences", [&]() -> std::string {
    double worst = 0.0;
    for (const auto& y : points) {
      const auto g = gradient(inst, y, t);
      const auto fd = oracle::fd_objective_gradient(inst, y, t);
      for (std::size_t i = 0; i < g.size(); ++i)
        worst = std::max(worst, std::abs(g[i] - fd[i]) / std::max(1.0, std::abs(fd[i])));
    }
    return worst < 1e-6 ? "" : "max relative error " + fmt(worst);
  }));
  out.push_back(check("hessian_vs_finite_differences", [&]() -> std::string {
    double worst = 0.0;
    const FlatIndex idx{sessions, inst.link_count()};
    for (const auto& y : points) {
      const HessianBlocks h = hessian_blocks(inst, y, t);
      const Matrix fd = oracle::fd_objective_hessian(inst, y, t);
      auto cmp = [&](double a, double b) {
        worst = std::max(worst, std::abs(a - b) / std::max(1.0, std::abs(b)));
      };
      for (int f = 0; f < sessions; ++f) cmp(h.source[f], fd(idx.s(f), idx.s(f)));
      for (int l = 0; l < inst.link_count(); ++l)
        for (int a = 0; a < sessions; ++a)
          for (int b = 0; b < sessions; ++b)
            cmp(h.links[l](a, b), fd(idx.x(l, a), idx.x(l, b)));
    }
    return worst < 1e-5 ? "" : "max relative error " + fmt(worst);
  }));
  out.push_back(check("link_block_inverse", [&]() -> std::string {
    double worst = 0.0;
    for (const auto& y : points) {
      const HessianBlocks h = hessian_blocks(inst, y, t);
      for (int l = 0; l < inst.link_count(); ++l) {
        const Matrix inv = invert_link_block(y.link_flows(l),
                                             unused_capacity(inst.network(), y, l));
        worst = std::max(worst, max_abs(inv * h.links[l] - Matrix::Identity(sessions)));
      }
    }
    return worst < 1e-10 ? "" : "max ||X^-1 X - I|| " + fmt(worst);
  }));
  out.push_back(check("dual_system_assembly", [&]() -> std::string {
    double worst = 0.0;
    for (const auto& y : points) {
      const Matrix dense = oracle::dual_matrix(inst, y, t);
      const Matrix fast = assemble_dual_system(inst, y, t).dense();
      worst = std::max(worst, max_abs(fast - dense) / std::max(1.0, max_abs(dense)));
    }
    return worst < 1e-10 ? "" : "max scaled difference " + fmt(worst);
  }));
  out.push_back(check("kkt_equivalence", [&]() -> std::string {
    double worst = 0.0;
    for (const auto& y : points) {
      const SplitSystem sys = assemble_dual_system(inst, y, t);
      const DualSolveResult dual = solve_duals(sys, SplitConfig{opt.alpha, 1e-10},
                                               DualPoint::Initial(inst).to_reduced(inst));
      const DualPoint w = DualPoint::FromReduced(inst, dual.w);
      const PrimalDirection dir = primal_direction(inst, y, w, t);
      const oracle::KktSystem k = oracle::kkt_system(inst, y, t);
      std::vector<double> z = dir.flatten();
      z.insert(z.end(), dual.w.begin(), dual.w.end());
      worst = std::max(worst, oracle::relative_residual(k.matrix, z, k.rhs));
    }
    return worst < 1e-8 ? "" : "max relative KKT residual " + fmt(worst);
  }));
  out.push_back(check("splitting_spectral_radius", [&]() -> std::string {
    for (const auto& y : points) {
      const SplitSystem sys = assemble_dual_system(inst, y, t);
      double previous = 0.0;
      for (double a : {0.51, 0.55, 0.75, 1.0, 2.0}) {
        const double rho = estimate_spectral_radius(sys, a).rho;
        if (!(rho < 1.0)) return "rho = " + fmt(rho) + " at alpha " + fmt(a);
        if (rho + 1e-9 < previous) return "rho decreased as alpha grew";
        previous = rho;
      }
    }
    return "";
  }));
  out.push_back(check("positive_definiteness_certificates", [&]() -> std::string {
    for (const auto& y : points) {
      const Matrix g = assemble_dual_system(inst, y, t).dense();
      const Splitting sp = split_matrices(g, opt.alpha);
      const std::size_t n = g.rows();
      Matrix sum(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          sum(i, j) = sp.lambda(i, j) + 2.0 * opt.alpha * sp.omega_bar(i, j) - sp.omega(i, j);
      for (std::size_t i = 0; i < n; ++i) {
        double off = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          if (j != i) off += std::abs(sum(i, j));
        const double margin = (2.0 * opt.alpha * sp.omega_bar(i, i) - sp.omega(i, i)) - off;
        const double expect = (2.0 * opt.alpha - 1.0) * sp.omega_bar(i, i);
        if (std::abs(margin - expect) > 1e-12 * std::max(1.0, sp.omega_bar(i, i)))
          return "dominance margin differs from (2a-1) row sum at row " + std::to_string(i);
      }
      if (!oracle::cholesky_succeeds(g)) return "Cholesky failed on G";
      if (!oracle::cholesky_succeeds(sum)) return "Cholesky failed on Lambda + 2a Omega-bar - Omega";
    }
    return "";
  }));
  out.push_back(check("local_updates_match_matrix_iterate", [&]() -> std::string {
    double worst = 0.0;
    for (const auto& y : points) {
      DistributedRuntime rt(inst, y, DualPoint::Initial(inst));
      const SplitSystem sys = assemble_dual_system(inst, y, t);
      std::vector<double> w = DualPoint::Initial(inst).to_reduced(inst);
      for (int k = 0; k < 20; ++k) {
        const auto round = rt.dual_round(t, opt.alpha);
        const auto central = splitting_iterate(w, sys, opt.alpha);
        for (std::size_t i = 0; i < w.size(); ++i)
          worst = std::max(worst, std::abs(round.next[i] - central[i]) /
                                      std::max(1.0, std::abs(central[i])));
        rt.commit_duals(round.next);
        w = round.next;
      }
      if (!rt.report().clean()) return "locality violation recorded";
    }
    return worst < 1e-10 ? "" : "max difference " + fmt(worst);
  }));
  out.push_back(check("decrement_vs_dense", [&]() -> std::string {
    double worst = 0.0;
    for (const auto& y : points) {
      const oracle::KktSolution kkt = oracle::kkt_solve(inst, y, t);
      const PrimalDirection dir = primal_direction(inst, y, kkt.w, t);
      const double fast = newton_decrement(inst, y, dir, t);
      const double dense = oracle::decrement(inst, y, dir.flatten(), t);
      worst = std::max(worst, std::abs(fast - dense) / std::max(1.0, dense));
    }
    return worst < 1e-10 ? "" : "max relative difference " + fmt(worst);
  }));
  out.push_back(check("initializer_feasible", [&]() -> std::string {
    const std::vector<double> eps(sessions, 0.1);
    const InitResult init = initialize(inst, eps);
    const FeasibilityReport r = check_feasibility(inst, init.y);
    if (!r.ok(1e-10)) return "balance residual " + fmt(r.max_balance_residual);
    return "";
  }));
  out.push_back(check("distributed_matches_centralized", [&]() -> std::string {
    SolverConfig cfg;
    cfg.split.alpha = opt.alpha;
    cfg.fixed_iterations = opt.mode_iterations;
    cfg.mode = ExecutionMode::kCentralized;
    const SolveResult a = barrier_solve(inst, cfg);
    const SolveResult b = run_distributed(inst, cfg);
    if (a.trace.records.size() != b.trace.records.size()) return "trace lengths differ";
    double worst = 0.0;
    for (std::size_t i = 0; i < a.trace.records.size(); ++i) {
      const auto& ra = a.trace.records[i];
      const auto& rb = b.trace.records[i];
      worst = std::max({worst, rel_err(ra.objective, rb.objective),
                        rel_err(ra.utility, rb.utility), rel_err(ra.decrement, rb.decrement),
                        rel_err(ra.step, rb.step)});
    }
    return worst < 1e-9 ? "" : "max relative trace difference " + fmt(worst);
  }));
  return out;
}

}  // namespace mrfc
