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

#ifndef MRFC_DENSE_HPP_
#define MRFC_DENSE_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace mrfc {

// Row-major dense matrix. Only used for small blocks (X_l, test fixtures) and
// for exporting structured operators; heavy dense algebra lives in oracle.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix Identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  const std::vector<double>& data() const { return data_; }

  Matrix operator*(const Matrix& rhs) const;
  std::vector<double> operator*(std::span<const double> v) const;
  Matrix operator-(const Matrix& rhs) const;
  Matrix operator+(const Matrix& rhs) const;
  Matrix transpose() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double max_abs(const Matrix& m);
double max_abs(std::span<const double> v);

// Gaussian elimination with partial pivoting for small dense systems.
// Throws InvariantError if a pivot vanishes.
std::vector<double> gaussian_solve(Matrix a, std::vector<double> b);

}  // namespace mrfc

#endif  // MRFC_DENSE_HPP_
