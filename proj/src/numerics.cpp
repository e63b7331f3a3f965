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

#include "dynsub/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace dynsub {

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
  }
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (rows == 0 || cols == 0) {
    throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
  }
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("ComplexMatrix: entry count does not match dimensions");
  }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<cplx>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  if (rows_ == 0 || cols_ == 0) {
    throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
  }
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw std::invalid_argument("ComplexMatrix: ragged initializer");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::row_vector(std::span<const cplx> values) {
  return ComplexMatrix(1, values.size(), std::vector<cplx>(values.begin(), values.end()));
}

ComplexMatrix ComplexMatrix::column_vector(std::span<const cplx> values) {
  return ComplexMatrix(values.size(), 1, std::vector<cplx>(values.begin(), values.end()));
}

ComplexVector ComplexMatrix::column(std::size_t c) const {
  ComplexVector out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

void ComplexMatrix::set_column(std::size_t c, std::span<const cplx> values) {
  if (values.size() != rows_) {
    throw std::invalid_argument("set_column: length mismatch");
  }
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = std::conj((*this)(r, c));
  }
  return out;
}

bool ComplexMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const cplx& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matrix product: inner dimensions differ");
  }
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

ComplexMatrix operator*(cplx s, ComplexMatrix m) {
  m *= s;
  return m;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("matrix difference: shape mismatch");
  }
  std::vector<cplx> d(a.data().begin(), a.data().end());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] -= b.data()[i];
  return ComplexMatrix(a.rows(), a.cols(), std::move(d));
}

ComplexVector multiply(const ComplexMatrix& m, std::span<const cplx> x) {
  if (x.size() != m.cols()) {
    throw std::invalid_argument("matrix-vector product: length mismatch");
  }
  ComplexVector y(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    cplx acc{};
    for (std::size_t c = 0; c < row.size(); ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
  return y;
}

double norm_sq(std::span<const cplx> v) {
  double acc = 0.0;
  for (const auto& z : v) acc += std::norm(z);
  return acc;
}

double frobenius_norm_sq(const ComplexMatrix& m) { return norm_sq(m.data()); }

double max_abs_entry(const ComplexMatrix& m) {
  double best = 0.0;
  for (const auto& z : m.data()) best = std::max(best, std::abs(z));
  return best;
}

namespace {

// Column-major working copy for the Jacobi sweeps.
using Columns = std::vector<ComplexVector>;

cplx inner(const ComplexVector& a, const ComplexVector& b) {
  cplx acc{};
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

// Replaces cols[target] with a unit vector orthogonal to every column listed in
// `keep`, built by Gram-Schmidt from the standard basis.
void complete_orthonormal(Columns& cols, std::size_t target, const std::vector<std::size_t>& keep) {
  const std::size_t n = cols[target].size();
  for (std::size_t e = 0; e < n; ++e) {
    ComplexVector cand(n);
    cand[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k : keep) {
        const cplx p = inner(cols[k], cand);
        for (std::size_t i = 0; i < n; ++i) cand[i] -= p * cols[k][i];
      }
    }
    const double nrm = std::sqrt(norm_sq(cand));
    if (nrm > 0.5) {
      for (auto& z : cand) z /= nrm;
      cols[target] = std::move(cand);
      return;
    }
  }
  throw std::logic_error("complete_orthonormal: no complement direction found");
}

// One-sided Jacobi on a tall matrix (rows >= cols). Returns A = U S V^H.
Svd jacobi_tall(const ComplexMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Columns b(n), v(n);
  for (std::size_t j = 0; j < n; ++j) {
    b[j] = a.column(j);
    v[j].assign(n, cplx{});
    v[j][j] = 1.0;
  }

  const double tol = std::numeric_limits<double>::epsilon() * static_cast<double>(m);
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double alpha = norm_sq(b[i]);
        const double beta = norm_sq(b[j]);
        const cplx gamma = inner(b[i], b[j]);
        const double g = std::abs(gamma);
        if (g == 0.0 || g <= tol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        // Rotate the pair so that b_i^H b_j vanishes; phase folded into b_j.
        const cplx phase = gamma / g;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const cplx ph_conj = std::conj(phase);
        for (std::size_t r = 0; r < m; ++r) {
          const cplx bi = b[i][r];
          const cplx bj = b[j][r] * ph_conj;
          b[i][r] = c * bi - s * bj;
          b[j][r] = s * bi + c * bj;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const cplx vi = v[i][r];
          const cplx vj = v[j][r] * ph_conj;
          v[i][r] = c * vi - s * vj;
          v[j][r] = s * vi + c * vj;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = std::sqrt(norm_sq(b[j]));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  const double smax = sigma[order.front()];
  Columns u(n);
  std::vector<std::size_t> good;
  std::vector<std::size_t> weak;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    if (smax > 0.0 && sigma[j] > 1e-14 * smax) {
      u[k] = b[j];
      for (auto& z : u[k]) z /= sigma[j];
      good.push_back(k);
    } else {
      u[k].assign(m, cplx{});
      weak.push_back(k);
    }
  }
  for (std::size_t k : weak) {
    complete_orthonormal(u, k, good);
    good.push_back(k);
  }

  Svd out{ComplexMatrix(m, n), std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = sigma[order[k]];
    out.u.set_column(k, u[k]);
    out.v.set_column(k, v[order[k]]);
  }
  return out;
}

}  // namespace

Svd svd_thin(const ComplexMatrix& m) {
  if (!m.all_finite()) {
    throw std::invalid_argument("svd_thin: matrix has non-finite entries");
  }
  if (m.rows() >= m.cols()) return jacobi_tall(m);
  // m^H = U' S V'^H  =>  m = V' S U'^H
  Svd t = jacobi_tall(m.adjoint());
  return Svd{std::move(t.v), std::move(t.values), std::move(t.u)};
}

ComplexMatrix right_pinv(const ComplexMatrix& m) {
  if (m.rows() > m.cols()) {
    throw SingularMatrixError("right_pinv: more rows than columns, no full row rank");
  }
  const Svd d = svd_thin(m);
  const double smax = d.values.front();
  const double smin = d.values.back();
  if (!(smax > 0.0) || smin < kSingularityThreshold * smax) {
    throw SingularMatrixError("right_pinv: matrix is numerically rank deficient");
  }
  // V diag(1/s) U^H
  ComplexMatrix out(m.cols(), m.rows());
  const std::size_t r = d.values.size();
  for (std::size_t i = 0; i < m.cols(); ++i) {
    for (std::size_t j = 0; j < m.rows(); ++j) {
      cplx acc{};
      for (std::size_t k = 0; k < r; ++k) acc += d.v(i, k) * std::conj(d.u(j, k)) / d.values[k];
      out(i, j) = acc;
    }
  }
  return out;
}

}  // namespace dynsub
