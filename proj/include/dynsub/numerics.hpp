// Copyright 2026 The dynsub Authors
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

#ifndef DYNSUB_NUMERICS_HPP_
#define DYNSUB_NUMERICS_HPP_

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynsub {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;

// Raised when a matrix is too close to rank deficient for the requested
// inverse. The harness treats it as a degenerate drop.
class SingularMatrixError : public std::runtime_error {
 public:
  explicit SingularMatrixError(const std::string& what) : std::runtime_error(what) {}
};

// Dense row-major complex matrix. Sized for the handful of rows/columns that
// show up in per-user processing (receive antennas, RF chains), but also
// holds full N_rx x N_tx channels.
class ComplexMatrix {
 public:
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix row_vector(std::span<const cplx> values);
  static ComplexMatrix column_vector(std::span<const cplx> values);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const cplx> data() const { return data_; }
  std::span<const cplx> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  std::span<cplx> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  ComplexVector column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const cplx> values);

  ComplexMatrix adjoint() const;
  bool all_finite() const;

  ComplexMatrix& operator*=(cplx s);
  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<cplx> data_;
};

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cplx s, ComplexMatrix m);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);

// y = m * x
ComplexVector multiply(const ComplexMatrix& m, std::span<const cplx> x);

// Sum of squared entry magnitudes.
double frobenius_norm_sq(const ComplexMatrix& m);
double norm_sq(std::span<const cplx> v);
double max_abs_entry(const ComplexMatrix& m);

struct Svd {
  ComplexMatrix u;             // rows x r, orthonormal columns
  std::vector<double> values;  // r = min(rows, cols), descending
  ComplexMatrix v;             // cols x r, orthonormal columns
};

// Thin SVD m = U diag(s) V^H by one-sided Jacobi rotations.
// Throws std::invalid_argument on non-finite input.
Svd svd_thin(const ComplexMatrix& m);

// Right inverse m^+ with m * m^+ = I, for full row rank m. Rejects inputs whose
// smallest singular value falls below kSingularityThreshold times the largest.
inline constexpr double kSingularityThreshold = 1e-12;
ComplexMatrix right_pinv(const ComplexMatrix& m);

}  // namespace dynsub

#endif  // DYNSUB_NUMERICS_HPP_
