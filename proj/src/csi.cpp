// SPDX-License-Identifier: Apache-2.0

#include "maxrom/csi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "maxrom/binio.hpp"
#include "maxrom/errors.hpp"
#include "maxrom/linalg.hpp"

namespace maxrom {

namespace {

// Recover the per-dimension axes of a lexicographic tensor-product grid
// (dimension 0 slowest). Throws when the points do not form such a grid.
std::vector<std::vector<double>> tensor_grid_axes(
    const std::vector<std::vector<double>>& parameters) {
  if (parameters.empty()) throw std::invalid_argument("tensor axes: no parameters");
  const std::size_t dim = parameters.front().size();
  std::vector<std::vector<double>> axes(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    for (const auto& p : parameters) {
      if (axes[d].empty() || std::find(axes[d].begin(), axes[d].end(), p[d]) == axes[d].end())
        axes[d].push_back(p[d]);
    }
    std::sort(axes[d].begin(), axes[d].end());
  }
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.size();
  if (total != parameters.size())
    throw std::invalid_argument("parameter sampling is not a full tensor-product grid");
  // verify lexicographic order
  std::vector<std::size_t> stride(dim, 1);
  for (std::size_t d = dim; d-- > 1;) stride[d - 1] = stride[d] * axes[d].size();
  for (std::size_t g = 0; g < parameters.size(); ++g)
    for (std::size_t d = 0; d < dim; ++d)
      if (parameters[g][d] != axes[d][(g / stride[d]) % axes[d].size()])
        throw std::invalid_argument("parameter grid is not in lexicographic order");
  return axes;
}

void write_spline(BinWriter& w, const Spline1D& s) {
  w.u32(static_cast<std::uint32_t>(s.knots().size()));
  w.f64_block(s.knots());
  w.f64_block(s.coeff_a());
  w.f64_block(s.coeff_b());
  w.f64_block(s.coeff_c());
  w.f64_block(s.coeff_d());
}

Spline1D read_spline(BinReader& r) {
  const std::uint32_t n = r.u32();
  if (n < 2) throw FormatError("spline needs at least 2 knots", r.offset() - 4);
  std::vector<double> knots(n), a(n - 1), b(n - 1), c(n - 1), d(n - 1);
  r.f64_block(knots);
  r.f64_block(a);
  r.f64_block(b);
  r.f64_block(c);
  r.f64_block(d);
  return Spline1D::from_coefficients(std::move(knots), std::move(a), std::move(b),
                                     std::move(c), std::move(d));
}

}  // namespace

ReducedMatrixSet build_reduced_matrices(const Matrix& codes, const SamplingPlan& plan) {
  const std::size_t n_t = plan.n_t();
  const std::size_t n_p = plan.n_p();
  if (codes.cols() != n_t * n_p)
    throw std::invalid_argument("build_reduced_matrices: need a code per grid point");
  ReducedMatrixSet set;
  set.times = plan.times;
  set.parameters = plan.parameters;
  set.p.reserve(codes.rows());
  for (std::size_t l = 0; l < codes.rows(); ++l) {
    Matrix p(n_t, n_p);
    for (std::size_t j = 0; j < n_p; ++j) {
      for (std::size_t i = 0; i < n_t; ++i) {
        const double v = codes(l, j * n_t + i);
        if (std::isnan(v))
          throw IncompleteDataError("build_reduced_matrices: missing code", i, j);
        p(i, j) = v;
      }
    }
    set.p.push_back(std::move(p));
  }
  return set;
}

bool ParameterInterpolant::out_of_range(std::span<const double> mu) const {
  if (spline) return mu[0] < spline1d.knots().front() || mu[0] > spline1d.knots().back();
  return tensor.out_of_range(mu);
}

ModeModelSet decompose_modes(const ReducedMatrixSet& set, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("decompose_modes: delta must lie in (0,1)");
  if (set.p.empty()) throw std::invalid_argument("decompose_modes: empty matrix set");

  const std::size_t dim = set.parameters.front().size();
  const bool param_spline = (dim == 1 && set.parameters.size() >= 4);
  std::vector<std::vector<double>> axes;
  if (!param_spline) axes = tensor_grid_axes(set.parameters);

  ModeModelSet out;
  out.delta = delta;
  out.times = set.times;
  out.parameters = set.parameters;
  out.models.reserve(set.p.size());

  for (const Matrix& p : set.p) {
    ModeModel model;
    if (p.frobenius_norm() == 0.0) {
      out.models.push_back(std::move(model));  // q = 0: identically zero
      continue;
    }
    const SvdResult svd = svd_thin(p);
    double total = 0.0;
    for (double s : svd.singular_values) total += s * s;
    double kept = 0.0;
    std::size_t q = 0;
    while (q < svd.singular_values.size() && kept / total < 1.0 - delta) {
      kept += svd.singular_values[q] * svd.singular_values[q];
      ++q;
    }
    model.q = q;
    model.sigma.assign(svd.singular_values.begin(), svd.singular_values.begin() + q);
    for (std::size_t k = 0; k < q; ++k) {
      model.time_modes.push_back(fit_spline_1d(set.times, svd.left_vectors.col(k)));
      ParameterInterpolant pi;
      if (param_spline) {
        pi.spline = true;
        std::vector<double> knots(set.parameters.size());
        for (std::size_t j = 0; j < knots.size(); ++j) knots[j] = set.parameters[j][0];
        pi.spline1d = fit_spline_1d(knots, svd.right_vectors.col(k));
      } else {
        const auto col = svd.right_vectors.col(k);
        pi.tensor = TensorGridInterpolant(axes, {col.begin(), col.end()});
      }
      model.param_modes.push_back(std::move(pi));
    }
    out.models.push_back(std::move(model));
  }
  return out;
}

CodeEval eval_code(const ModeModelSet& model, double t, std::span<const double> mu) {
  if (!std::isfinite(t)) throw std::invalid_argument("eval_code: non-finite time");
  for (double m : mu)
    if (!std::isfinite(m)) throw std::invalid_argument("eval_code: non-finite parameter");

  CodeEval out;
  out.code.assign(model.n(), 0.0);
  if (!model.times.empty() && (t < model.times.front() || t > model.times.back()))
    out.extrapolated = true;
  for (std::size_t l = 0; l < model.n(); ++l) {
    const ModeModel& m = model.models[l];
    double v = 0.0;
    for (std::size_t k = 0; k < m.q; ++k) {
      if (k == 0 && m.param_modes[k].out_of_range(mu)) out.extrapolated = true;
      v += m.sigma[k] * m.time_modes[k](t) * m.param_modes[k](mu);
    }
    out.code[l] = v;
  }
  return out;
}

void write_mode_models(const ModeModelSet& set, const std::string& path) {
  BinWriter w(path);
  w.tag("ROMCSI01");
  w.u32(1);
  w.u32(static_cast<std::uint32_t>(set.n()));
  w.f64(set.delta);
  w.u32(static_cast<std::uint32_t>(set.times.size()));
  w.f64_block(set.times);
  w.u32(static_cast<std::uint32_t>(set.parameters.size()));
  w.u32(set.parameters.empty() ? 0
                               : static_cast<std::uint32_t>(set.parameters.front().size()));
  for (const auto& p : set.parameters) w.f64_block(p);
  for (const ModeModel& m : set.models) {
    w.u32(static_cast<std::uint32_t>(m.q));
    w.f64_block(m.sigma);
    for (std::size_t k = 0; k < m.q; ++k) {
      write_spline(w, m.time_modes[k]);
      const ParameterInterpolant& pi = m.param_modes[k];
      w.u32(pi.spline ? 0 : 1);
      if (pi.spline) {
        write_spline(w, pi.spline1d);
      } else {
        w.u32(static_cast<std::uint32_t>(pi.tensor.dims()));
        for (const auto& axis : pi.tensor.grid()) {
          w.u32(static_cast<std::uint32_t>(axis.size()));
          w.f64_block(axis);
        }
        w.f64_block(pi.tensor.values());
      }
    }
  }
  w.close();
}

ModeModelSet read_mode_models(const std::string& path) {
  BinReader r(path);
  r.expect_tag("ROMCSI01", "CSI container");
  if (r.u32() != 1) throw FormatError("unsupported CSI container version", r.offset() - 4);
  ModeModelSet set;
  const std::uint32_t n = r.u32();
  set.delta = r.f64();
  set.times.resize(r.u32());
  r.f64_block(set.times);
  const std::uint32_t n_p = r.u32();
  const std::uint32_t dim = r.u32();
  set.parameters.assign(n_p, std::vector<double>(dim));
  for (auto& p : set.parameters) r.f64_block(p);
  set.models.resize(n);
  for (ModeModel& m : set.models) {
    m.q = r.u32();
    m.sigma.resize(m.q);
    r.f64_block(m.sigma);
    for (std::size_t k = 0; k < m.q; ++k) {
      m.time_modes.push_back(read_spline(r));
      ParameterInterpolant pi;
      pi.spline = (r.u32() == 0);
      if (pi.spline) {
        pi.spline1d = read_spline(r);
      } else {
        const std::uint32_t nd = r.u32();
        std::vector<std::vector<double>> axes(nd);
        std::size_t total = 1;
        for (auto& axis : axes) {
          axis.resize(r.u32());
          r.f64_block(axis);
          total *= axis.size();
        }
        std::vector<double> values(total);
        r.f64_block(values);
        pi.tensor = TensorGridInterpolant(std::move(axes), std::move(values));
      }
      m.param_modes.push_back(std::move(pi));
    }
  }
  return set;
}

}  // namespace maxrom
