// SPDX-License-Identifier: Apache-2.0

#include "maxrom/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace maxrom {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t c = 0; c < cols_; ++c)
    for (std::size_t r = 0; r < rows_; ++r) t(c, r) = (*this)(r, c);
  return t;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

bool Matrix::all_finite() const {
  for (double v : data_)
    if (!std::isfinite(v)) return false;
  return true;
}

Matrix Matrix::columns(std::size_t c0, std::size_t count) const {
  if (c0 + count > cols_) throw std::invalid_argument("Matrix::columns out of range");
  Matrix m(rows_, count);
  for (std::size_t c = 0; c < count; ++c)
    for (std::size_t r = 0; r < rows_; ++r) m(r, c) = (*this)(r, c0 + c);
  return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  Matrix c(a.rows(), b.cols());
  // column-major friendly: c(:,j) += b(k,j) * a(:,k)
  for (std::size_t j = 0; j < b.cols(); ++j) {
    double* cj = c.col(j).data();
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double bkj = b(k, j);
      if (bkj == 0.0) continue;
      const double* ak = a.col(k).data();
      for (std::size_t r = 0; r < a.rows(); ++r) cj[r] += ak[r] * bkj;
    }
  }
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("matrix difference: shape mismatch");
  Matrix c(a.rows(), a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t r = 0; r < a.rows(); ++r) c(r, j) = a(r, j) - b(r, j);
  return c;
}

Matrix gemm_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("gemm_tn: shape mismatch");
  Matrix c(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    const double* bj = b.col(j).data();
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const double* ai = a.col(i).data();
      double s = 0.0;
      for (std::size_t r = 0; r < a.rows(); ++r) s += ai[r] * bj[r];
      c(i, j) = s;
    }
  }
  return c;
}

Matrix hcat(const std::vector<Matrix>& blocks) {
  if (blocks.empty()) return {};
  std::size_t rows = blocks.front().rows();
  std::size_t cols = 0;
  for (const Matrix& b : blocks) {
    if (b.rows() != rows) throw std::invalid_argument("hcat: row count mismatch");
    cols += b.cols();
  }
  Matrix m(rows, cols);
  std::size_t at = 0;
  for (const Matrix& b : blocks)
    for (std::size_t c = 0; c < b.cols(); ++c, ++at)
      for (std::size_t r = 0; r < rows; ++r) m(r, at) = b(r, c);
  return m;
}

std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matvec: shape mismatch");
  std::vector<double> y(a.rows(), 0.0);
  for (std::size_t c = 0; c < a.cols(); ++c) {
    const double xc = x[c];
    const double* ac = a.col(c).data();
    for (std::size_t r = 0; r < a.rows(); ++r) y[r] += ac[r] * xc;
  }
  return y;
}

std::vector<double> matvec_t(const Matrix& a, std::span<const double> x) {
  if (a.rows() != x.size()) throw std::invalid_argument("matvec_t: shape mismatch");
  std::vector<double> y(a.cols(), 0.0);
  for (std::size_t c = 0; c < a.cols(); ++c) {
    const double* ac = a.col(c).data();
    double s = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) s += ac[r] * x[r];
    y[c] = s;
  }
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace maxrom
