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

#include "mrfc/incidence.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "mrfc/errors.hpp"

namespace mrfc {

Matrix build_incidence(const Network& network) {
  Matrix a(network.node_count(), network.link_count());
  for (int l = 0; l < network.link_count(); ++l) {
    a(network.link(l).tx, l) = 1.0;
    a(network.link(l).rx, l) = -1.0;
  }
  return a;
}

ReducedIncidence reduce_incidence(const Matrix& full, int src, int dst) {
  const int n = static_cast<int>(full.rows());
  if (src < 0 || src >= n || dst < 0 || dst >= n || src == dst)
    throw InvalidInputError("reduce_incidence: bad src/dst pair");
  ReducedIncidence view;
  view.src = src;
  view.dst = dst;
  view.a = Matrix(n - 1, full.cols());
  for (int node = 0; node < n; ++node) {
    const int row = reduced_row(node, dst);
    if (row < 0) continue;
    for (std::size_t l = 0; l < full.cols(); ++l) view.a(row, l) = full(node, l);
  }
  view.b.assign(n - 1, 0.0);
  view.b[reduced_row(src, dst)] = 1.0;
  if (matrix_rank(view.a) != n - 1)
    throw InvalidInputError("reduced incidence for destination " +
                            std::to_string(dst) +
                            " is rank deficient; network is not connected");
  return view;
}

ReducedIncidence reduced_incidence(const Network& network,
                                   const Session& session) {
  return reduce_incidence(build_incidence(network), session.src, session.dst);
}

SparseColumn link_column(const ReducedIncidence& view, int l) {
  SparseColumn col;
  for (std::size_t row = 0; row < view.a.rows(); ++row) {
    const double v = view.a(row, l);
    if (v != 0.0) col.push(static_cast<int>(row), v);
  }
  return col;
}

Matrix outer_product(const SparseColumn& a, const SparseColumn& b,
                     std::size_t rows, std::size_t cols) {
  Matrix out(rows, cols);
  for (int i = 0; i < a.size; ++i)
    for (int j = 0; j < b.size; ++j)
      out(a.entries[i].first, b.entries[j].first) +=
          a.entries[i].second * b.entries[j].second;
  return out;
}

int matrix_rank(const Matrix& m, double tol) {
  Matrix work = m;
  const std::size_t rows = work.rows();
  const std::size_t cols = work.cols();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t pivot = rank;
    for (std::size_t r = rank + 1; r < rows; ++r)
      if (std::abs(work(r, c)) > std::abs(work(pivot, c))) pivot = r;
    if (std::abs(work(pivot, c)) <= tol) continue;
    for (std::size_t j = 0; j < cols; ++j) std::swap(work(rank, j), work(pivot, j));
    for (std::size_t r = rank + 1; r < rows; ++r) {
      const double factor = work(r, c) / work(rank, c);
      if (factor == 0.0) continue;
      for (std::size_t j = c; j < cols; ++j) work(r, j) -= factor * work(rank, j);
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

}  // namespace mrfc
