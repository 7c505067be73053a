// SPDX-License-Identifier: Apache-2.0

#include "maxrom/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "maxrom/errors.hpp"

namespace maxrom {

namespace {

// Flip each column so its largest-magnitude entry is positive. Returns the
// applied signs so a paired block can be flipped consistently.
std::vector<double> fix_column_signs(Matrix& m) {
  std::vector<double> signs(m.cols(), 1.0);
  for (std::size_t c = 0; c < m.cols(); ++c) {
    double best = 0.0;
    double val = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const double a = std::abs(m(r, c));
      if (a > best) {
        best = a;
        val = m(r, c);
      }
    }
    if (val < 0.0) {
      signs[c] = -1.0;
      for (std::size_t r = 0; r < m.rows(); ++r) m(r, c) = -m(r, c);
    }
  }
  return signs;
}

double max_abs(const Matrix& m) {
  double v = 0.0;
  for (std::size_t c = 0; c < m.cols(); ++c)
    for (std::size_t r = 0; r < m.rows(); ++r) v = std::max(v, std::abs(m(r, c)));
  return v;
}

constexpr int kMaxSweeps = 64;

}  // namespace

EigResult eig_sym(const Matrix& a) {
  const std::size_t n = a.rows();
  if (n == 0 || a.cols() != n) throw std::invalid_argument("eig_sym: matrix must be square");
  if (!a.all_finite()) throw std::invalid_argument("eig_sym: non-finite entries");
  const double scale = max_abs(a);
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < c; ++r)
      if (std::abs(a(r, c) - a(c, r)) > 1e-12 * std::max(scale, 1.0))
        throw std::invalid_argument("eig_sym: matrix not symmetric");

  Matrix d = a;  // gets diagonalized in place
  Matrix v = Matrix::identity(n);

  auto off_norm = [&]() {
    double s = 0.0;
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t r = 0; r < c; ++r) s += d(r, c) * d(r, c);
    return std::sqrt(2.0 * s);
  };

  const double tol = 1e-15 * std::max(d.frobenius_norm(), 1e-300);
  int sweep = 0;
  while (off_norm() > tol) {
    if (++sweep > kMaxSweeps)
      throw ConvergenceError("eig_sym: Jacobi sweeps exceeded " + std::to_string(kMaxSweeps));
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = d(p, q);
        if (apq == 0.0) continue;
        const double app = d(p, p);
        const double aqq = d(q, q);
        if (std::abs(apq) < 1e-18 * (std::abs(app) + std::abs(aqq) + 1e-300)) continue;
        const double zeta = (aqq - app) / (2.0 * apq);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        // rows/cols p,q of the symmetric matrix
        for (std::size_t i = 0; i < n; ++i) {
          const double dip = d(i, p);
          const double diq = d(i, q);
          d(i, p) = c * dip - s * diq;
          d(i, q) = s * dip + c * diq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double dpi = d(p, i);
          const double dqi = d(q, i);
          d(p, i) = c * dpi - s * dqi;
          d(q, i) = s * dpi + c * dqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v(i, p);
          const double viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return d(i, i) > d(j, j); });

  EigResult out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = d(order[c], order[c]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, c) = v(r, order[c]);
  }
  fix_column_signs(out.vectors);
  return out;
}

SvdResult svd_thin(const Matrix& a) {
  if (a.empty()) throw std::invalid_argument("svd_thin: empty matrix");
  if (!a.all_finite()) throw std::invalid_argument("svd_thin: non-finite entries");
  if (a.rows() < a.cols()) {
    SvdResult t = svd_thin(a.transposed());
    return {std::move(t.right_vectors), std::move(t.singular_values),
            std::move(t.left_vectors)};
  }

  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  Matrix b = a;  // columns get rotated into U * Sigma
  Matrix v = Matrix::identity(n);

  // one-sided Jacobi: orthogonalize column pairs until all inner products vanish
  const double tol = 1e-15;
  for (int sweep = 0;; ++sweep) {
    if (sweep > kMaxSweeps)
      throw ConvergenceError("svd_thin: Jacobi sweeps exceeded " + std::to_string(kMaxSweeps));
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double* bp = b.col(p).data();
        double* bq = b.col(q).data();
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t r = 0; r < m; ++r) {
          alpha += bp[r] * bp[r];
          beta += bq[r] * bq[r];
          gamma += bp[r] * bq[r];
        }
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta) || gamma == 0.0) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t r = 0; r < m; ++r) {
          const double x = bp[r];
          const double y = bq[r];
          bp[r] = c * x - s * y;
          bq[r] = s * x + c * y;
        }
        double* vp = v.col(p).data();
        double* vq = v.col(q).data();
        for (std::size_t r = 0; r < n; ++r) {
          const double x = vp[r];
          const double y = vq[r];
          vp[r] = c * x - s * y;
          vq[r] = s * x + c * y;
        }
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t c = 0; c < n; ++c) sigma[c] = norm2(b.col(c));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  SvdResult out;
  out.singular_values.resize(n);
  out.left_vectors = Matrix(m, n);
  out.right_vectors = Matrix(n, n);
  const double smax = sigma[order[0]];
  for (std::size_t c = 0; c < n; ++c) {
    const std::size_t k = order[c];
    out.singular_values[c] = sigma[k];
    for (std::size_t r = 0; r < n; ++r) out.right_vectors(r, c) = v(r, k);
    if (sigma[k] > kRankCutoff * smax && sigma[k] > 0.0) {
      const double inv = 1.0 / sigma[k];
      for (std::size_t r = 0; r < m; ++r) out.left_vectors(r, c) = b(r, k) * inv;
    }
  }
  // fill null-space columns of U so the block stays orthonormal
  for (std::size_t c = 0; c < n; ++c) {
    if (norm2(out.left_vectors.col(c)) > 0.5) continue;
    for (std::size_t e = 0; e < m; ++e) {
      std::vector<double> cand(m, 0.0);
      cand[e] = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == c) continue;
        const double proj = dot(out.left_vectors.col(j), cand);
        const double* uj = out.left_vectors.col(j).data();
        for (std::size_t r = 0; r < m; ++r) cand[r] -= proj * uj[r];
      }
      const double nrm = norm2(cand);
      if (nrm > 0.1) {
        for (std::size_t r = 0; r < m; ++r) out.left_vectors(r, c) = cand[r] / nrm;
        break;
      }
    }
  }

  const std::vector<double> signs = fix_column_signs(out.left_vectors);
  for (std::size_t c = 0; c < n; ++c)
    if (signs[c] < 0.0)
      for (std::size_t r = 0; r < n; ++r) out.right_vectors(r, c) = -out.right_vectors(r, c);
  return out;
}

std::size_t numerical_rank(const std::vector<double>& s) {
  if (s.empty() || s.front() <= 0.0) return 0;
  std::size_t r = 0;
  for (double v : s)
    if (v > kRankCutoff * s.front()) ++r;
  return r;
}

void orthonormalize_columns(Matrix& m) {
  for (std::size_t c = 0; c < m.cols(); ++c) {
    double* mc = m.col(c).data();
    for (std::size_t j = 0; j < c; ++j) {
      const double proj = dot(m.col(j), m.col(c));
      const double* mj = m.col(j).data();
      for (std::size_t r = 0; r < m.rows(); ++r) mc[r] -= proj * mj[r];
    }
    const double nrm = norm2(m.col(c));
    if (nrm == 0.0) throw RankDeficientError("orthonormalize: dependent column", c);
    for (std::size_t r = 0; r < m.rows(); ++r) mc[r] /= nrm;
  }
}

Matrix pod_basis(const Matrix& a, std::size_t k) {
  if (a.empty()) throw std::invalid_argument("pod_basis: empty matrix");
  if (k == 0) throw std::invalid_argument("pod_basis: k must be positive");

  const EigResult eig = eig_sym(gemm_tn(a, a));
  const std::size_t n = eig.values.size();

  // sigma_i as ||A u_i|| rather than sqrt(lambda_i): the Gram eigenvalues
  // bottom out at eps * lambda_1, which would hide exact rank deficiency
  Matrix av(a.rows(), n);
  std::vector<double> sigma(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::vector<double> col = matvec(a, eig.vectors.col(i));
    std::copy(col.begin(), col.end(), av.col(i).begin());
    sigma[i] = norm2(av.col(i));
  }
  const double smax = *std::max_element(sigma.begin(), sigma.end());
  std::size_t rank = 0;
  while (rank < n && sigma[rank] > kRankCutoff * smax) ++rank;
  if (k > rank)
    throw RankDeficientError("pod_basis: requested " + std::to_string(k) +
                                 " columns but numerical rank is " + std::to_string(rank),
                             rank);

  Matrix v(a.rows(), k);
  for (std::size_t i = 0; i < k; ++i) {
    const double inv = 1.0 / sigma[i];
    for (std::size_t r = 0; r < a.rows(); ++r) v(r, i) = av(r, i) * inv;
  }
  // the Gram route loses orthogonality for small lambda; restore it
  orthonormalize_columns(v);
  fix_column_signs(v);
  return v;
}

std::vector<double> principal_angles(const Matrix& v1, const Matrix& v2) {
  const SvdResult s = svd_thin(gemm_tn(v1, v2));
  std::vector<double> angles;
  angles.reserve(s.singular_values.size());
  for (double c : s.singular_values) angles.push_back(std::acos(std::clamp(c, -1.0, 1.0)));
  std::sort(angles.begin(), angles.end());
  return angles;
}

}  // namespace maxrom
