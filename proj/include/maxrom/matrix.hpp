// SPDX-License-Identifier: Apache-2.0

#ifndef MAXROM_MATRIX_HPP
#define MAXROM_MATRIX_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace maxrom {

/// Dense real matrix, column-major, 64-bit floats.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r + c * rows_]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r + c * rows_]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  std::span<double> col(std::size_t c) { return {data_.data() + c * rows_, rows_}; }
  std::span<const double> col(std::size_t c) const {
    return {data_.data() + c * rows_, rows_};
  }

  Matrix transposed() const;
  double frobenius_norm() const;
  bool all_finite() const;

  /// Columns [c0, c0+count) as a new matrix.
  Matrix columns(std::size_t c0, std::size_t count) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

/// aᵀ · b without forming the transpose.
Matrix gemm_tn(const Matrix& a, const Matrix& b);

/// Concatenate matrices horizontally; all blocks must share the row count.
Matrix hcat(const std::vector<Matrix>& blocks);

std::vector<double> matvec(const Matrix& a, std::span<const double> x);
std::vector<double> matvec_t(const Matrix& a, std::span<const double> x);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace maxrom

#endif
