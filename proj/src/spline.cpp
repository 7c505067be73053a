// SPDX-License-Identifier: Apache-2.0

#include "maxrom/spline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maxrom {

namespace {

// Thomas solve; diag/upper/lower are consumed.
std::vector<double> solve_tridiagonal(std::vector<double> lower, std::vector<double> diag,
                                      std::vector<double> upper, std::vector<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
  return x;
}

std::size_t interval_of(const std::vector<double>& knots, double x) {
  // clamp to the boundary pieces so evaluation extrapolates with them
  if (x <= knots.front()) return 0;
  if (x >= knots.back()) return knots.size() - 2;
  const auto it = std::upper_bound(knots.begin(), knots.end(), x);
  return static_cast<std::size_t>(it - knots.begin()) - 1;
}

}  // namespace

Spline1D fit_spline_1d(std::span<const double> x, std::span<const double> y) {
  const std::size_t np = x.size();
  if (y.size() != np) throw std::invalid_argument("fit_spline_1d: size mismatch");
  if (np < 4)
    throw std::runtime_error("fit_spline_1d: insufficient data, need at least 4 knots");
  for (std::size_t i = 0; i + 1 < np; ++i) {
    if (!(x[i] < x[i + 1]))
      throw std::invalid_argument("fit_spline_1d: knots must be strictly increasing");
  }

  const std::size_t n = np - 1;  // intervals
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = x[i + 1] - x[i];

  // Second derivatives M_k. Interior continuity rows for k = 1..n-1 with the
  // not-a-knot ends eliminated: M_0 and M_n are expressed through M_1, M_2 and
  // M_{n-1}, M_{n-2} by third-derivative continuity at x_1 and x_{n-1}.
  const std::size_t m = n - 1;
  std::vector<double> lower(m, 0.0), diag(m, 0.0), upper(m, 0.0), rhs(m, 0.0);
  for (std::size_t k = 1; k <= m; ++k) {
    const double d = 6.0 * ((y[k + 1] - y[k]) / h[k] - (y[k] - y[k - 1]) / h[k - 1]);
    lower[k - 1] = h[k - 1];
    diag[k - 1] = 2.0 * (h[k - 1] + h[k]);
    upper[k - 1] = h[k];
    rhs[k - 1] = d;
  }
  // M_0 = (1 + h0/h1) M_1 - (h0/h1) M_2
  {
    const double r = h[0] / h[1];
    diag[0] += h[0] * (1.0 + r);
    upper[0] -= h[0] * r;
    lower[0] = 0.0;
  }
  // M_n = (1 + h_{n-1}/h_{n-2}) M_{n-1} - (h_{n-1}/h_{n-2}) M_{n-2}
  {
    const double r = h[n - 1] / h[n - 2];
    diag[m - 1] += h[n - 1] * (1.0 + r);
    lower[m - 1] -= h[n - 1] * r;
    upper[m - 1] = 0.0;
  }

  const std::vector<double> mi = solve_tridiagonal(lower, diag, upper, rhs);
  std::vector<double> m2(np);
  for (std::size_t k = 1; k <= m; ++k) m2[k] = mi[k - 1];
  m2[0] = (1.0 + h[0] / h[1]) * m2[1] - (h[0] / h[1]) * m2[2];
  m2[n] = (1.0 + h[n - 1] / h[n - 2]) * m2[n - 1] - (h[n - 1] / h[n - 2]) * m2[n - 2];

  Spline1D s;
  s.knots_.assign(x.begin(), x.end());
  s.a_.resize(n);
  s.b_.resize(n);
  s.c_.resize(n);
  s.d_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    s.a_[k] = y[k];
    s.b_[k] = (y[k + 1] - y[k]) / h[k] - h[k] * (2.0 * m2[k] + m2[k + 1]) / 6.0;
    s.c_[k] = m2[k] / 2.0;
    s.d_[k] = (m2[k + 1] - m2[k]) / (6.0 * h[k]);
  }
  return s;
}

double Spline1D::operator()(double x) const {
  const std::size_t k = interval_of(knots_, x);
  const double dx = x - knots_[k];
  return a_[k] + dx * (b_[k] + dx * (c_[k] + dx * d_[k]));
}

Spline1D Spline1D::from_coefficients(std::vector<double> knots, std::vector<double> a,
                                     std::vector<double> b, std::vector<double> c,
                                     std::vector<double> d) {
  const std::size_t n = knots.size();
  if (n < 2 || a.size() != n - 1 || b.size() != n - 1 || c.size() != n - 1 ||
      d.size() != n - 1)
    throw std::invalid_argument("Spline1D::from_coefficients: inconsistent sizes");
  Spline1D s;
  s.knots_ = std::move(knots);
  s.a_ = std::move(a);
  s.b_ = std::move(b);
  s.c_ = std::move(c);
  s.d_ = std::move(d);
  return s;
}

TensorGridInterpolant::TensorGridInterpolant(std::vector<std::vector<double>> grid,
                                             std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (grid_.empty()) throw std::invalid_argument("tensor grid: no dimensions");
  std::size_t total = 1;
  for (const auto& g : grid_) {
    if (g.empty()) throw std::invalid_argument("tensor grid: empty dimension");
    for (std::size_t i = 0; i + 1 < g.size(); ++i)
      if (!(g[i] < g[i + 1]))
        throw std::invalid_argument("tensor grid: knots must be strictly increasing");
    total *= g.size();
  }
  if (total != values_.size())
    throw std::invalid_argument("tensor grid: value count does not match grid shape");
  stride_.assign(grid_.size(), 1);
  for (std::size_t d = grid_.size(); d-- > 1;)
    stride_[d - 1] = stride_[d] * grid_[d].size();
}

bool TensorGridInterpolant::out_of_range(std::span<const double> x) const {
  for (std::size_t d = 0; d < grid_.size(); ++d)
    if (x[d] < grid_[d].front() || x[d] > grid_[d].back()) return true;
  return false;
}

double TensorGridInterpolant::operator()(std::span<const double> x) const {
  if (x.size() != grid_.size())
    throw std::invalid_argument("tensor grid: query dimension mismatch");
  std::vector<std::size_t> start(grid_.size()), stencil(grid_.size());
  for (std::size_t d = 0; d < grid_.size(); ++d) {
    const auto& g = grid_[d];
    const std::size_t width = std::min<std::size_t>(4, g.size());
    stencil[d] = width;
    // nearest consecutive knots: centre the stencil on the containing interval
    std::size_t i = interval_of(g, x[d]);
    std::size_t s0 = (i >= (width - 1) / 2) ? i - (width - 1) / 2 : 0;
    s0 = std::min(s0, g.size() - width);
    start[d] = s0;
  }
  return eval_recursive(0, 0, x, start, stencil);
}

double TensorGridInterpolant::eval_recursive(std::size_t dim, std::size_t base,
                                             std::span<const double> x,
                                             const std::vector<std::size_t>& start,
                                             const std::vector<std::size_t>& stencil) const {
  const std::size_t w = stencil[dim];
  double fv[4];
  for (std::size_t i = 0; i < w; ++i) {
    const std::size_t idx = base + (start[dim] + i) * stride_[dim];
    fv[i] = (dim + 1 == grid_.size())
                ? values_[idx]
                : eval_recursive(dim + 1, idx, x, start, stencil);
  }
  // Neville's scheme on the local stencil
  const double* g = grid_[dim].data() + start[dim];
  double p[4];
  std::copy(fv, fv + w, p);
  for (std::size_t level = 1; level < w; ++level)
    for (std::size_t i = 0; i + level < w; ++i)
      p[i] = ((x[dim] - g[i + level]) * p[i] + (g[i] - x[dim]) * p[i + 1]) /
             (g[i] - g[i + level]);
  return p[0];
}

}  // namespace maxrom
