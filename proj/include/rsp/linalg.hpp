// Copyright 2026 The rsp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Small dense linear algebra on top of the dispatched kernels. Vectors are
// plain std::vector<double>; matrices are row-major.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rsp/kernels.hpp"

namespace rsp {

using Vector = std::vector<double>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vector>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  Matrix transposed() const;

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// y = A x
Vector matvec(const Matrix& a, std::span<const double> x);
// y = A^T x
Vector matvec_t(const Matrix& a, std::span<const double> x);
Matrix matmul(const Matrix& a, const Matrix& b);
// A^T A
Matrix gram(const Matrix& a);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double norm_inf(std::span<const double> a);
double dist(std::span<const double> a, std::span<const double> b);
Vector add(std::span<const double> a, std::span<const double> b);
Vector sub(std::span<const double> a, std::span<const double> b);
Vector scaled(double alpha, std::span<const double> a);
// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

// Eigen-decomposition of a symmetric matrix by Householder tridiagonalization
// followed by implicit QL. Eigenvalues ascending; column j of `vectors` pairs
// with values[j].
struct SymmetricEigen {
  Vector values;
  Matrix vectors;
};
SymmetricEigen symmetric_eigen(const Matrix& sym);

// Solves S x = rhs for symmetric positive definite S by Cholesky. Throws
// NoConvergence when a pivot is not positive.
Vector solve_spd(const Matrix& spd, std::span<const double> rhs);

// Singular values of A (descending), via the eigenvalues of the smaller Gram
// matrix.
Vector singular_values(const Matrix& a);
// Largest singular value; 0 for an empty matrix.
double spectral_norm(const Matrix& a);
double sigma_min(const Matrix& a);

// Power iteration for the largest eigenvalue of a symmetric PSD operator
// given only through products. Stops when successive Rayleigh quotients agree
// to `rel_tol`. Returns the estimate even without convergence; `converged`
// reports which.
struct PowerResult {
  double value = 0.0;
  Vector vector;
  int iterations = 0;
  bool converged = false;
};
using LinearOp = std::function<void(std::span<const double>, std::span<double>)>;
PowerResult power_iteration(const LinearOp& op, std::size_t dim, double rel_tol,
                            int max_iter, std::span<const double> start = {});

}  // namespace rsp
