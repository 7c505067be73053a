// SPDX-License-Identifier: Apache-2.0

#ifndef MAXROM_POD_HPP
#define MAXROM_POD_HPP

#include <array>
#include <string>
#include <vector>

#include "maxrom/matrix.hpp"
#include "maxrom/snapshots.hpp"

namespace maxrom {

/// Two-step POD basis per field component with the singular-value ledgers of
/// both steps. The basis size must be a perfect square so the coefficient
/// columns reshape into square channel planes downstream.
struct PodBasis {
  std::array<Matrix, 3> v;  // N_h x nbasis, orthonormal
  std::size_t k = 0;        // first-step truncation
  std::size_t nbasis = 0;
  // step 1: per component, per parameter, singular values of S_c^j
  std::array<std::vector<std::vector<double>>, 3> step1_singulars;
  // step 2: per component, singular values of the assembled T_c
  std::array<std::vector<double>, 3> step2_singulars;

  std::size_t n_h() const { return v[0].rows(); }
};

/// Projection coefficient matrices C_c = V_cᵀ S_c (nbasis x N_s), columns in
/// grid order: parameter-major blocks of N_t time columns.
struct IntrinsicCoordinates {
  std::array<Matrix, 3> c;
  SamplingPlan plan;
};

bool is_perfect_square(std::size_t n);

/// Step 1 compresses each trajectory to k modes, step 2 runs POD on the
/// assembled compressed bases. Throws RankDeficientError naming the step.
PodBasis two_step_pod(const SnapshotSet& set, std::size_t k, std::size_t nbasis);

std::vector<double> project(const PodBasis& basis, Component c,
                            std::span<const double> u_h);
std::vector<double> reconstruct(const PodBasis& basis, Component c,
                                std::span<const double> alpha);

IntrinsicCoordinates compute_intrinsic(const PodBasis& basis, const SnapshotSet& set);

struct PodErrorIndicator {
  std::array<double, 3> mean_relative_error{};  // per component
  std::size_t excluded_zero_norm = 0;
};

/// Mean over all N_s columns of the relative projection error per component;
/// zero-norm snapshot columns are excluded and counted.
PodErrorIndicator pod_error_indicator(const PodBasis& basis, const SnapshotSet& set);

// PODBASIS section inside a ROMSNAP1 container.
void write_pod_basis(const PodBasis& basis, const std::string& path);
PodBasis read_pod_basis(const std::string& path);

}  // namespace maxrom

#endif
