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

#ifndef MRFC_INCIDENCE_HPP_
#define MRFC_INCIDENCE_HPP_

#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "mrfc/dense.hpp"
#include "mrfc/network.hpp"

namespace mrfc {

// Row position of node n once the row of `dst` has been deleted, or -1 for
// n == dst.
inline int reduced_row(int n, int dst) {
  if (n == dst) return -1;
  return n < dst ? n : n - 1;
}

inline int node_of_reduced_row(int row, int dst) {
  return row < dst ? row : row + 1;
}

// Node-arc incidence matrix A (N x L): +1 at the transmitter, -1 at the
// receiver of each link.
Matrix build_incidence(const Network& network);

// A^(f) and b~^(f) for one session: A with the destination row removed and
// the unit vector at the source's reduced row.
struct ReducedIncidence {
  Matrix a;
  std::vector<double> b;
  int src = 0;
  int dst = 0;

  int row_of(int node) const { return reduced_row(node, dst); }
  int node_of(int row) const { return node_of_reduced_row(row, dst); }
};

ReducedIncidence reduced_incidence(const Network& network,
                                   const Session& session);
// Same as above from an explicit full incidence matrix; throws
// InvalidInputError if the reduced matrix is not of full row rank.
ReducedIncidence reduce_incidence(const Matrix& full, int src, int dst);

// Column l of A^(f) with at most two nonzeros, as (row, value) pairs.
struct SparseColumn {
  std::array<std::pair<int, double>, 2> entries{};
  int size = 0;

  void push(int row, double value) { entries[size++] = {row, value}; }
};

SparseColumn link_column(const ReducedIncidence& view, int l);

// Dense a * b^T for two sparse columns of a reduced incidence matrix.
Matrix outer_product(const SparseColumn& a, const SparseColumn& b,
                     std::size_t rows, std::size_t cols);

// Numerical rank via Gaussian elimination with partial pivoting.
int matrix_rank(const Matrix& m, double tol = 1e-9);

}  // namespace mrfc

#endif  // MRFC_INCIDENCE_HPP_
