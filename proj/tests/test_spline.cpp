// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "maxrom/spline.hpp"

using namespace maxrom;

namespace {

struct Cubic {
  double a, b, c, d;
  double operator()(double x) const { return a + x * (b + x * (c + x * d)); }
};

Cubic random_cubic(std::mt19937& gen) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  return {u(gen), u(gen), u(gen), u(gen)};
}

}  // namespace

TEST_CASE("not-a-knot spline reproduces cubic polynomials exactly") {
  std::mt19937 gen(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Cubic f = random_cubic(gen);
    std::vector<double> x, y;
    for (int i = 0; i <= 7; ++i) {
      x.push_back(-1.0 + 2.0 * i / 7.0);
      y.push_back(f(x.back()));
    }
    const Spline1D s = fit_spline_1d(x, y);
    for (int i = 0; i <= 200; ++i) {
      const double q = -1.0 + 2.0 * i / 200.0;
      CHECK(std::abs(s(q) - f(q)) <= 1e-10);
    }
  }
}

TEST_CASE("spline interpolates every knot exactly") {
  const std::vector<double> x = {0.0, 0.3, 1.1, 2.0, 2.7};
  const std::vector<double> y = {1.0, -2.0, 0.5, 3.0, -1.0};
  const Spline1D s = fit_spline_1d(x, y);
  for (std::size_t k = 0; k < x.size(); ++k) CHECK(s(x[k]) == doctest::Approx(y[k]).epsilon(1e-14));
}

TEST_CASE("spline approximates sin on 9 knots over a period") {
  const double two_pi = 2.0 * 3.14159265358979323846;
  std::vector<double> x, y;
  for (int i = 0; i <= 8; ++i) {
    x.push_back(two_pi * i / 8.0);
    y.push_back(std::sin(x.back()));
  }
  const Spline1D s = fit_spline_1d(x, y);
  double worst = 0.0;  // dense-grid oracle
  for (int i = 0; i <= 2000; ++i) {
    const double q = two_pi * i / 2000.0;
    worst = std::max(worst, std::abs(s(q) - std::sin(q)));
  }
  // frozen from the dense oracle; the boundary intervals dominate
  // (0.0077487, identical to SciPy's not-a-knot CubicSpline)
  CHECK(worst <= 7.75e-3);
  CHECK(worst >= 7.7e-3);
}

TEST_CASE("spline is C2 with not-a-knot third-derivative continuity") {
  std::mt19937 gen(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x, y;
  for (int i = 0; i <= 9; ++i) {
    x.push_back(0.5 * i);
    y.push_back(u(gen));
  }
  const Spline1D s = fit_spline_1d(x, y);
  const auto& b = s.coeff_b();
  const auto& c = s.coeff_c();
  const auto& d = s.coeff_d();
  const std::size_t n = x.size() - 1;
  for (std::size_t k = 1; k < n; ++k) {
    const double h = x[k] - x[k - 1];
    const double d1_left = b[k - 1] + 2.0 * c[k - 1] * h + 3.0 * d[k - 1] * h * h;
    const double d2_left = 2.0 * c[k - 1] + 6.0 * d[k - 1] * h;
    CHECK(std::abs(d1_left - b[k]) <= 1e-9);
    CHECK(std::abs(d2_left - 2.0 * c[k]) <= 1e-9);
  }
  // third derivative continuous at the second and penultimate interior knots
  CHECK(std::abs(6.0 * d[0] - 6.0 * d[1]) <= 1e-9);
  CHECK(std::abs(6.0 * d[n - 2] - 6.0 * d[n - 1]) <= 1e-9);
}

TEST_CASE("spline derivative continuity probed by finite differences") {
  std::vector<double> x, y;
  for (int i = 0; i <= 6; ++i) {
    x.push_back(static_cast<double>(i));
    y.push_back(std::cos(1.7 * i));
  }
  const Spline1D s = fit_spline_1d(x, y);
  const double h = 1e-7;
  for (std::size_t k = 1; k + 1 < x.size(); ++k) {
    const double left = (s(x[k]) - s(x[k] - h)) / h;
    const double right = (s(x[k] + h) - s(x[k])) / h;
    CHECK(std::abs(left - right) <= 1e-5);  // O(h) one-sided differences
  }
}

TEST_CASE("spline rejects malformed knot vectors") {
  const std::vector<double> y = {0, 1, 2, 3};
  CHECK_THROWS_AS(fit_spline_1d(std::vector<double>{0, 1, 1, 2}, y), std::invalid_argument);
  CHECK_THROWS_AS(fit_spline_1d(std::vector<double>{0, 2, 1, 3}, y), std::invalid_argument);
  CHECK_THROWS_AS(fit_spline_1d(std::vector<double>{0, 1, 2}, std::vector<double>{0, 1, 2}),
                  std::runtime_error);
}

TEST_CASE("midpoint of linear data returns the linear interpolant") {
  const std::vector<double> x = {0, 1, 2, 3, 4};
  const std::vector<double> y = {1, 3, 5, 7, 9};
  const Spline1D s = fit_spline_1d(x, y);
  CHECK(s(1.5) == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(s(3.25) == doctest::Approx(7.5).epsilon(1e-12));
}

TEST_CASE("extrapolation continues the boundary cubic") {
  std::mt19937 gen(23);
  const Cubic f = random_cubic(gen);
  std::vector<double> x, y;
  for (int i = 0; i <= 5; ++i) {
    x.push_back(static_cast<double>(i));
    y.push_back(f(x.back()));
  }
  const Spline1D s = fit_spline_1d(x, y);
  CHECK(s(-0.5) == doctest::Approx(f(-0.5)).epsilon(1e-9));
  CHECK(s(5.75) == doctest::Approx(f(5.75)).epsilon(1e-9));
}

TEST_CASE("tensor-product interpolation is exact on separable cubics") {
  const auto g = [](double x) { return 1.0 + x - 0.5 * x * x + 0.25 * x * x * x; };
  const auto h = [](double y) { return 2.0 - y + y * y * y; };
  std::vector<double> ax, ay;
  for (int i = 0; i <= 5; ++i) ax.push_back(-1.0 + 0.4 * i);
  for (int i = 0; i <= 4; ++i) ay.push_back(0.25 * i);
  std::vector<double> values;
  for (double x : ax)
    for (double y : ay) values.push_back(g(x) * h(y));
  const TensorGridInterpolant f({ax, ay}, values);
  std::mt19937 gen(31);
  std::uniform_real_distribution<double> ux(-1.0, 1.0), uy(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::array<double, 2> q = {ux(gen), uy(gen)};
    CHECK(std::abs(f(q) - g(q[0]) * h(q[1])) <= 1e-9);
  }
}

TEST_CASE("tensor-product interpolation of a constant field is constant") {
  const std::vector<double> axis = {0.0, 1.0, 2.0};
  std::vector<double> values(9, 4.25);
  const TensorGridInterpolant f({axis, axis}, values);
  for (double x : {0.1, 0.77, 1.9})
    for (double y : {0.2, 1.33}) CHECK(f(std::array<double, 2>{x, y}) == doctest::Approx(4.25));
}

TEST_CASE("4-D interpolation of a Runge-type function stays within 5e-2") {
  const auto f = [](const std::array<double, 4>& x) {
    double v = 1.0;
    for (double xi : x) v *= 1.0 / (1.0 + xi * xi);
    return v;
  };
  std::vector<double> axis;
  for (int i = 0; i < 5; ++i) axis.push_back(-1.0 + 0.5 * i);
  std::vector<double> values;
  for (double a : axis)
    for (double b : axis)
      for (double c : axis)
        for (double d : axis) values.push_back(f({a, b, c, d}));
  const TensorGridInterpolant interp({axis, axis, axis, axis}, values);

  std::mt19937 gen(47);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0, scale = 0.0;  // dense-sample oracle
  for (int trial = 0; trial < 4000; ++trial) {
    const std::array<double, 4> q = {u(gen), u(gen), u(gen), u(gen)};
    const double exact = f(q);
    worst = std::max(worst, std::abs(interp(q) - exact));
    scale = std::max(scale, std::abs(exact));
  }
  CHECK(worst / scale <= 5e-2);
}

TEST_CASE("tensor-product evaluation does not depend on dimension order") {
  std::mt19937 gen(53);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<double> ax = {0.0, 0.5, 1.0, 1.5, 2.0};
  const std::vector<double> ay = {0.0, 0.7, 1.1, 2.0};
  std::vector<double> vxy, vyx(ax.size() * ay.size());
  for (std::size_t i = 0; i < ax.size(); ++i)
    for (std::size_t j = 0; j < ay.size(); ++j) vxy.push_back(u(gen));
  for (std::size_t i = 0; i < ax.size(); ++i)
    for (std::size_t j = 0; j < ay.size(); ++j)
      vyx[j * ax.size() + i] = vxy[i * ay.size() + j];
  const TensorGridInterpolant f1({ax, ay}, vxy);
  const TensorGridInterpolant f2({ay, ax}, vyx);
  for (int trial = 0; trial < 40; ++trial) {
    const double x = u(gen) + 1.0;
    const double y = 0.5 * (u(gen) + 1.0) + 0.3;
    CHECK(f1(std::array<double, 2>{x, y}) ==
          doctest::Approx(f2(std::array<double, 2>{y, x})).epsilon(1e-12));
  }
}

TEST_CASE("tensor grid rejects mismatched value counts") {
  CHECK_THROWS_AS(TensorGridInterpolant({{0.0, 1.0}, {0.0, 1.0}}, std::vector<double>(3)),
                  std::invalid_argument);
}

TEST_CASE("dimensions with few points degrade to the supported order") {
  // 3 knots: quadratic through all points is reproduced exactly
  const auto g = [](double x) { return 2.0 - x + 3.0 * x * x; };
  const std::vector<double> ax = {0.0, 1.0, 2.0};
  std::vector<double> values;
  for (double x : ax) values.push_back(g(x));
  const TensorGridInterpolant f({ax}, values);
  for (double q : {0.25, 0.9, 1.7})
    CHECK(f(std::array<double, 1>{q}) == doctest::Approx(g(q)).epsilon(1e-12));
}
