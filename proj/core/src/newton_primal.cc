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

#include "mrfc/newton_primal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mrfc/errors.hpp"
#include "mrfc/incidence.hpp"

namespace mrfc {

DualPoint DualPoint::Initial(const Instance& instance) {
  DualPoint w(instance.node_count(), instance.session_count());
  for (int n = 0; n < instance.node_count(); ++n)
    for (int f = 0; f < instance.session_count(); ++f)
      w(n, f) = n == instance.session(f).dst ? 0.0 : 1.0;
  return w;
}

int dual_row(const Instance& instance, int n, int f) {
  const int row = reduced_row(n, instance.session(f).dst);
  return row < 0 ? -1 : f * (instance.node_count() - 1) + row;
}

int dual_dimension(const Instance& instance) {
  return (instance.node_count() - 1) * instance.session_count();
}

std::vector<double> DualPoint::to_reduced(const Instance& instance) const {
  std::vector<double> out(dual_dimension(instance));
  for (int f = 0; f < sessions_; ++f)
    for (int n = 0; n < nodes_; ++n) {
      const int row = dual_row(instance, n, f);
      if (row >= 0) out[row] = (*this)(n, f);
    }
  return out;
}

DualPoint DualPoint::FromReduced(const Instance& instance,
                                 std::span<const double> reduced) {
  if (reduced.size() != static_cast<std::size_t>(dual_dimension(instance)))
    throw InvalidInputError("reduced dual vector has the wrong length");
  DualPoint w(instance.node_count(), instance.session_count());
  for (int f = 0; f < instance.session_count(); ++f)
    for (int n = 0; n < instance.node_count(); ++n) {
      const int row = dual_row(instance, n, f);
      w(n, f) = row < 0 ? 0.0 : reduced[row];
    }
  return w;
}

std::vector<double> invert_source_block(std::span<const double> source_diag) {
  std::vector<double> out(source_diag.size());
  for (std::size_t f = 0; f < source_diag.size(); ++f) {
    if (!(source_diag[f] > 0.0) || !std::isfinite(source_diag[f]))
      throw DomainError("source Hessian entry " + std::to_string(f) +
                        " is not positive");
    out[f] = 1.0 / source_diag[f];
  }
  return out;
}

Matrix invert_link_block(std::span<const double> x, double delta) {
  if (!(delta > 0.0)) throw DomainError("link slack must be positive");
  double sq = delta * delta;
  for (double v : x) {
    if (!(v > 0.0)) throw DomainError("link flows must be positive");
    sq += v * v;
  }
  const std::size_t n = x.size();
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi2 = x[i] * x[i];
    for (std::size_t j = 0; j < n; ++j) {
      const double xj2 = x[j] * x[j];
      inv(i, j) = i == j ? xi2 * (1.0 - xi2 / sq) : -xi2 * xj2 / sq;
    }
  }
  return inv;
}

double source_direction(const UtilitySpec& utility, double s, double t,
                        double w_src) {
  if (!(s > 0.0)) throw DomainError("session rate must be positive");
  return s * (t * s * utility.first(s) + 1.0 - s * w_src) /
         (1.0 - t * s * s * utility.second(s));
}

std::vector<double> link_direction(std::span<const double> x, double delta,
                                   std::span<const double> w_tx,
                                   std::span<const double> w_rx) {
  if (!(delta > 0.0)) throw DomainError("link slack must be positive");
  const std::size_t n = x.size();
  double sq = delta * delta;
  for (double v : x) {
    if (!(v > 0.0)) throw DomainError("link flows must be positive");
    sq += v * v;
  }
  // dx = -X^-1 g with g_f = 1/delta - 1/x_f + w_rx^f - w_tx^f, using
  // X^-1 = diag(x^2) - (x^2)(x^2)^T / ||x^||^2.
  std::vector<double> scaled(n);
  double coupling = 0.0;
  for (std::size_t f = 0; f < n; ++f) {
    const double g = 1.0 / delta - 1.0 / x[f] + w_rx[f] - w_tx[f];
    scaled[f] = x[f] * x[f] * g;
    coupling += scaled[f];
  }
  coupling /= sq;
  std::vector<double> dx(n);
  for (std::size_t f = 0; f < n; ++f)
    dx[f] = -scaled[f] + x[f] * x[f] * coupling;
  return dx;
}

std::vector<double> PrimalDirection::flatten() const {
  std::vector<double> out(ds);
  out.insert(out.end(), dx.begin(), dx.end());
  return out;
}

PrimalDirection primal_direction(const Instance& instance, const PrimalPoint& y,
                                 const DualPoint& w, double t) {
  require_interior(instance, y);
  const Network& net = instance.network();
  const int sessions = instance.session_count();
  PrimalDirection dir;
  dir.ds.resize(sessions);
  dir.dx.resize(static_cast<std::size_t>(net.link_count()) * sessions);
  for (int f = 0; f < sessions; ++f) {
    const Session& sess = instance.session(f);
    dir.ds[f] = source_direction(sess.utility, y.s(f), t, w(sess.src, f));
  }
  std::vector<double> w_tx(sessions), w_rx(sessions);
  for (int l = 0; l < net.link_count(); ++l) {
    for (int f = 0; f < sessions; ++f) {
      w_tx[f] = w(net.link(l).tx, f);
      w_rx[f] = w(net.link(l).rx, f);
    }
    const auto dx = link_direction(y.link_flows(l), unused_capacity(net, y, l),
                                   w_tx, w_rx);
    std::copy(dx.begin(), dx.end(), dir.dx.begin() + static_cast<std::ptrdiff_t>(l) * sessions);
  }
  return dir;
}

}  // namespace mrfc
