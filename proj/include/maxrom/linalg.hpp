// SPDX-License-Identifier: Apache-2.0

#ifndef MAXROM_LINALG_HPP
#define MAXROM_LINALG_HPP

#include <vector>

#include "maxrom/matrix.hpp"

namespace maxrom {

// Relative cutoff for the numerical rank: sigma_i > kRankCutoff * sigma_1.
inline constexpr double kRankCutoff = 1e-12;

struct EigResult {
  std::vector<double> values;  // descending
  Matrix vectors;              // orthonormal columns, sign-fixed
};

struct SvdResult {
  Matrix left_vectors;                 // m x min(m,n), orthonormal
  std::vector<double> singular_values; // descending, non-negative
  Matrix right_vectors;                // n x min(m,n), orthonormal
};

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
/// Requires A symmetric within 1e-12 relative; eigenvalues come out descending.
EigResult eig_sym(const Matrix& a);

/// Thin SVD by one-sided Jacobi on the columns (of A or Aᵀ, whichever is taller).
SvdResult svd_thin(const Matrix& a);

/// POD basis of A with k columns: v_i = A u_i / sqrt(lambda_i) from eig(AᵀA),
/// re-orthonormalized. Throws RankDeficientError when k exceeds the numerical rank.
Matrix pod_basis(const Matrix& a, std::size_t k);

std::size_t numerical_rank(const std::vector<double>& singular_values);

/// In-place modified Gram-Schmidt on the columns.
void orthonormalize_columns(Matrix& m);

/// Principal angles (radians, ascending) between the column spans of two
/// orthonormal blocks.
std::vector<double> principal_angles(const Matrix& v1, const Matrix& v2);

}  // namespace maxrom

#endif
