// SPDX-License-Identifier: Apache-2.0

#ifndef MAXROM_SPLINE_HPP
#define MAXROM_SPLINE_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace maxrom {

/// Not-a-knot cubic spline: interpolates every (x_k, y_k), C2 at interior
/// knots, third derivative continuous at the second and penultimate knots.
/// Outside [x_0, x_n] the boundary cubic extrapolates.
class Spline1D {
 public:
  Spline1D() = default;
  double operator()(double x) const;

  const std::vector<double>& knots() const { return knots_; }
  // per-interval cubic S_k(x) = a + b dx + c dx^2 + d dx^3, dx = x - x_k
  const std::vector<double>& coeff_a() const { return a_; }
  const std::vector<double>& coeff_b() const { return b_; }
  const std::vector<double>& coeff_c() const { return c_; }
  const std::vector<double>& coeff_d() const { return d_; }

  static Spline1D from_coefficients(std::vector<double> knots, std::vector<double> a,
                                    std::vector<double> b, std::vector<double> c,
                                    std::vector<double> d);

 private:
  friend Spline1D fit_spline_1d(std::span<const double>, std::span<const double>);
  std::vector<double> knots_;
  std::vector<double> a_, b_, c_, d_;
};

/// Requires >= 4 strictly increasing knots.
Spline1D fit_spline_1d(std::span<const double> knots, std::span<const double> values);

inline double eval_spline(const Spline1D& s, double x) { return s(x); }

/// Tensor-product interpolant on a full rectangular grid. Evaluation runs
/// 1-D polynomial interpolation dimension by dimension on the stencil of the
/// nearest knots: cubic where a dimension has >= 4 points, otherwise the
/// highest order the point count supports.
class TensorGridInterpolant {
 public:
  TensorGridInterpolant() = default;
  TensorGridInterpolant(std::vector<std::vector<double>> grid, std::vector<double> values);

  /// Lexicographic value layout: dimension 0 varies slowest.
  double operator()(std::span<const double> x) const;

  std::size_t dims() const { return grid_.size(); }
  const std::vector<std::vector<double>>& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }

  /// True when any coordinate falls outside its knot span.
  bool out_of_range(std::span<const double> x) const;

 private:
  double eval_recursive(std::size_t dim, std::size_t base,
                        std::span<const double> x,
                        const std::vector<std::size_t>& start,
                        const std::vector<std::size_t>& stencil) const;
  std::vector<std::vector<double>> grid_;
  std::vector<double> values_;
  std::vector<std::size_t> stride_;
};

inline TensorGridInterpolant fit_tensor_product(std::vector<std::vector<double>> grid,
                                                std::vector<double> values) {
  return {std::move(grid), std::move(values)};
}

}  // namespace maxrom

#endif
