// SPDX-License-Identifier: Apache-2.0

#ifndef MAXROM_CSI_HPP
#define MAXROM_CSI_HPP

#include <string>
#include <vector>

#include "maxrom/matrix.hpp"
#include "maxrom/snapshots.hpp"
#include "maxrom/spline.hpp"

namespace maxrom {

/// The l-th code component arranged over the training grid:
/// P_l(i, j) = code_l(t_i, mu_j), one N_t x N_p matrix per component.
struct ReducedMatrixSet {
  std::vector<Matrix> p;               // n matrices
  std::vector<double> times;           // N_t
  std::vector<std::vector<double>> parameters;  // N_p
};

/// codes is n x N_s in grid order (parameter-major blocks of N_t columns).
/// NaN entries mark missing grid values and raise IncompleteDataError.
ReducedMatrixSet build_reduced_matrices(const Matrix& codes, const SamplingPlan& plan);

/// Parameter-side interpolant: a global not-a-knot spline for 1-D parameter
/// domains, the local tensor-product form otherwise.
struct ParameterInterpolant {
  bool spline = false;
  Spline1D spline1d;
  TensorGridInterpolant tensor;

  double operator()(std::span<const double> mu) const {
    return spline ? spline1d(mu[0]) : tensor(mu);
  }
  bool out_of_range(std::span<const double> mu) const;
};

/// SVD modes of one reduced-order matrix: q_l singular triplets with the
/// time modes fit by splines and the parameter modes by interpolants.
struct ModeModel {
  std::size_t q = 0;                // truncation rank for the energy tolerance
  std::vector<double> sigma;        // q values
  std::vector<Spline1D> time_modes; // q splines over the training times
  std::vector<ParameterInterpolant> param_modes;
};

struct ModeModelSet {
  std::vector<ModeModel> models;  // one per code component
  double delta = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> parameters;

  std::size_t n() const { return models.size(); }
};

/// Per component: thin SVD, smallest q with retained energy >= 1 - delta,
/// spline/interpolant fits of the discrete modes. A zero matrix yields q = 0.
ModeModelSet decompose_modes(const ReducedMatrixSet& set, double delta);

struct CodeEval {
  std::vector<double> code;
  bool extrapolated = false;  // query left the training time/parameter box
};

/// code_l = sum_k sigma_k^l psi_k^l(t) phi_k^l(mu).
CodeEval eval_code(const ModeModelSet& model, double t, std::span<const double> mu);

// ROMCSI01 container.
void write_mode_models(const ModeModelSet& set, const std::string& path);
ModeModelSet read_mode_models(const std::string& path);

}  // namespace maxrom

#endif
