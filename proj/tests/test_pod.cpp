// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "maxrom/errors.hpp"
#include "maxrom/linalg.hpp"
#include "maxrom/pod.hpp"

using namespace maxrom;

namespace {

// Smooth (t, mu)-parameterized synthetic fields with a decaying spectrum and a
// small seeded noise floor that keeps every trajectory full rank.
SnapshotSet smooth_set(std::size_t n_h, std::size_t n_t, std::size_t n_p, unsigned seed,
                       double noise = 1e-8) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist;
  SnapshotSet set;
  set.n_h = n_h;
  for (std::size_t i = 0; i < n_t; ++i)
    set.plan.times.push_back(static_cast<double>(i) / n_t);
  for (std::size_t j = 0; j < n_p; ++j) set.plan.parameters.push_back({1.0 + 0.4 * j});
  for (int c = 0; c < 3; ++c) {
    for (std::size_t j = 0; j < n_p; ++j) {
      const double mu = set.plan.parameters[j][0];
      Matrix s(n_h, n_t);
      for (std::size_t i = 0; i < n_t; ++i) {
        const double t = set.plan.times[i];
        for (std::size_t r = 0; r < n_h; ++r) {
          const double x = static_cast<double>(r) / n_h;
          double v = 0.0;
          double amp = 1.0;
          for (int m = 1; m <= 6; ++m, amp *= 0.45)
            v += amp * std::sin(m * (6.28 * x + c) + mu) * std::cos(m * 6.28 * t + 0.3 * mu);
          s(r, i) = v + noise * dist(gen);
        }
      }
      set.components[c].push_back(std::move(s));
    }
  }
  return set;
}

double projection_error_norm_sum(const PodBasis& basis, const SnapshotSet& set,
                                 Component c) {
  double sum = 0.0;
  for (std::size_t j = 0; j < set.plan.n_p(); ++j) {
    const Matrix& s = set.components[c][j];
    for (std::size_t i = 0; i < s.cols(); ++i) {
      const std::vector<double> alpha = project(basis, c, s.col(i));
      const std::vector<double> rec = reconstruct(basis, c, alpha);
      double d2 = 0.0;
      for (std::size_t r = 0; r < set.n_h; ++r) {
        const double d = s(r, i) - rec[r];
        d2 += d * d;
      }
      sum += std::sqrt(d2);
    }
  }
  return sum;
}

// The two-step error bound L1 + L2, recomputed from scratch with svd_thin as
// the singular-value oracle (independent of the ledgers the basis records).
double two_step_bound(const PodBasis& basis, const SnapshotSet& set, Component c) {
  const std::size_t k = basis.k;
  std::vector<Matrix> compressed;
  double l1_sum = 0.0;
  double max_col_sum = 0.0;
  for (std::size_t j = 0; j < set.plan.n_p(); ++j) {
    const Matrix& s = set.components[c][j];
    const SvdResult svd = svd_thin(s);
    double tail = 0.0;
    for (std::size_t i = k; i < svd.singular_values.size(); ++i)
      tail += svd.singular_values[i] * svd.singular_values[i];
    l1_sum += std::sqrt(static_cast<double>(set.plan.n_t()) * tail);
    compressed.push_back(pod_basis(s, k));
    double col_sum = 0.0;
    for (std::size_t i = 0; i < s.cols(); ++i) col_sum += norm2(s.col(i));
    max_col_sum = std::max(max_col_sum, col_sum);
  }
  const Matrix assembled = hcat(compressed);
  const SvdResult svd_t = svd_thin(assembled);
  double tail2 = 0.0;
  for (std::size_t i = basis.nbasis; i < svd_t.singular_values.size(); ++i)
    tail2 += svd_t.singular_values[i] * svd_t.singular_values[i];

  double max_t_col = 0.0;
  for (std::size_t i = 0; i < assembled.cols(); ++i)
    max_t_col = std::max(max_t_col, norm2(assembled.col(i)));

  const double vvt_f = std::sqrt(static_cast<double>(basis.nbasis));  // ||V V^T||_F
  const double l1 = (1.0 + vvt_f) * l1_sum;
  const double l2 = max_col_sum * max_t_col *
                    std::sqrt(static_cast<double>(k * set.plan.n_p()) * tail2);
  return l1 + l2;
}

}  // namespace

TEST_CASE("two-step POD yields an orthonormal perfect-square basis") {
  const SnapshotSet set = smooth_set(60, 12, 4, 1);
  const PodBasis basis = two_step_pod(set, 6, 9);
  CHECK(basis.nbasis == 9);
  for (int c = 0; c < 3; ++c) {
    const Matrix g = gemm_tn(basis.v[c], basis.v[c]);
    for (std::size_t i = 0; i < 9; ++i)
      for (std::size_t j = 0; j < 9; ++j)
        CHECK(std::abs(g(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-10);
    CHECK(basis.step1_singulars[c].size() == 4);
    CHECK(basis.step2_singulars[c].size() >= 9);
  }
}

TEST_CASE("non-square basis sizes are rejected") {
  const SnapshotSet set = smooth_set(30, 8, 3, 2);
  CHECK_THROWS_AS(two_step_pod(set, 4, 10), std::invalid_argument);
}

TEST_CASE("lossless limit: full k and full nbasis reconstruct the snapshots") {
  const SnapshotSet set = smooth_set(50, 8, 2, 3, 1e-6);
  const PodBasis basis = two_step_pod(set, 8, 16);  // k = N_t, nbasis = k N_p
  for (int c = 0; c < 3; ++c) {
    double err2 = 0.0, ref2 = 0.0;
    for (std::size_t j = 0; j < set.plan.n_p(); ++j) {
      const Matrix& s = set.components[c][j];
      const Matrix rec =
          basis.v[c] * gemm_tn(basis.v[c], s);
      err2 += std::pow((s - rec).frobenius_norm(), 2);
      ref2 += std::pow(s.frobenius_norm(), 2);
    }
    CHECK(std::sqrt(err2) <= 1e-8 * std::sqrt(ref2));
  }
}

TEST_CASE("two-step subspace is close to the direct POD of the full snapshot matrix") {
  // data dominated by four shared spatial modes; weak mu-dependent rest
  const std::size_t n_h = 30, n_t = 8, n_p = 3;
  SnapshotSet set;
  set.n_h = n_h;
  for (std::size_t i = 0; i < n_t; ++i) set.plan.times.push_back(0.125 * i);
  for (std::size_t j = 0; j < n_p; ++j) set.plan.parameters.push_back({1.0 + 0.4 * j});
  std::mt19937 gen(4);
  std::normal_distribution<double> dist;
  for (int c = 0; c < 3; ++c) {
    for (std::size_t j = 0; j < n_p; ++j) {
      const double mu = set.plan.parameters[j][0];
      Matrix s(n_h, n_t);
      for (std::size_t i = 0; i < n_t; ++i) {
        const double t = set.plan.times[i];
        for (std::size_t r = 0; r < n_h; ++r) {
          const double x = static_cast<double>(r) / n_h;
          double v = 0.0;
          double amp = 1.0;
          for (int m = 1; m <= 4; ++m, amp *= 0.5)
            v += amp * (1.0 + 0.05 * std::sin(mu)) * std::sin(m * (6.28 * x + c)) *
                 std::cos(m * 6.28 * t + 0.3 * mu);
          v += 1e-4 * std::sin(9.0 * (6.28 * x + c) + mu) * std::cos(5.5 * t);
          s(r, i) = v + 1e-9 * dist(gen);
        }
      }
      set.components[c].push_back(std::move(s));
    }
  }

  const PodBasis basis = two_step_pod(set, 4, 4);
  for (int c = 0; c < 3; ++c) {
    const Matrix all = hcat(set.components[c]);
    const Matrix direct = pod_basis(all, 4);
    const std::vector<double> angles =
        principal_angles(basis.v[c], direct);
    CHECK(angles.back() <= 0.1);
  }
}

TEST_CASE("rank deficiency in step 1 fails loudly naming the step") {
  SnapshotSet set = smooth_set(20, 6, 2, 5, 0.0);
  // make one trajectory rank-1
  Matrix& s = set.components[kHy][1];
  for (std::size_t i = 1; i < s.cols(); ++i)
    for (std::size_t r = 0; r < s.rows(); ++r) s(r, i) = 2.0 * s(r, 0);
  try {
    two_step_pod(set, 4, 4);
    FAIL("expected RankDeficientError");
  } catch (const RankDeficientError& e) {
    CHECK(std::string(e.what()).find("step 1") != std::string::npos);
    CHECK(std::string(e.what()).find("Hy") != std::string::npos);
    CHECK(e.attainable_rank == 1);
  }
}

TEST_CASE("project/reconstruct: vectors in the span are reproduced") {
  const SnapshotSet set = smooth_set(40, 10, 3, 6);
  const PodBasis basis = two_step_pod(set, 5, 9);
  std::mt19937 gen(7);
  std::normal_distribution<double> dist;
  std::vector<double> coeffs(9);
  for (double& v : coeffs) v = dist(gen);
  const std::vector<double> u = reconstruct(basis, kEz, coeffs);
  const std::vector<double> back = reconstruct(basis, kEz, project(basis, kEz, u));
  for (std::size_t r = 0; r < u.size(); ++r)
    CHECK(back[r] == doctest::Approx(u[r]).epsilon(1e-10));
}

TEST_CASE("project of an orthogonal vector is zero and Pythagoras holds") {
  const SnapshotSet set = smooth_set(40, 10, 3, 8);
  const PodBasis basis = two_step_pod(set, 5, 4);
  std::mt19937 gen(9);
  std::normal_distribution<double> dist;
  std::vector<double> u(40);
  for (double& v : u) v = dist(gen);
  // strip the span component
  const std::vector<double> alpha = project(basis, kHx, u);
  const std::vector<double> in_span = reconstruct(basis, kHx, alpha);
  std::vector<double> perp(40);
  for (std::size_t r = 0; r < 40; ++r) perp[r] = u[r] - in_span[r];
  for (double a : project(basis, kHx, perp)) CHECK(std::abs(a) <= 1e-10);

  const double u2 = dot(u, u);
  const double perp2 = dot(perp, perp);
  const double span2 = dot(in_span, in_span);
  CHECK(perp2 + span2 == doctest::Approx(u2).epsilon(1e-9));
}

TEST_CASE("dimension mismatches are rejected") {
  const SnapshotSet set = smooth_set(20, 6, 2, 10);
  const PodBasis basis = two_step_pod(set, 3, 4);
  CHECK_THROWS_AS(project(basis, kEz, std::vector<double>(7)), std::invalid_argument);
  CHECK_THROWS_AS(reconstruct(basis, kEz, std::vector<double>(5)), std::invalid_argument);
}

TEST_CASE("error indicator vanishes on snapshots inside the span") {
  SnapshotSet set = smooth_set(30, 6, 2, 11);
  PodBasis basis = two_step_pod(set, 6, 9);
  // rebuild snapshots from their projections so they lie in the span
  for (int c = 0; c < 3; ++c)
    for (std::size_t j = 0; j < set.plan.n_p(); ++j)
      set.components[c][j] = basis.v[c] * gemm_tn(basis.v[c], set.components[c][j]);
  const PodErrorIndicator ind = pod_error_indicator(basis, set);
  for (int c = 0; c < 3; ++c) CHECK(ind.mean_relative_error[c] <= 1e-9);
}

TEST_CASE("error indicator matches a direct recomputation and flags zero columns") {
  SnapshotSet set = smooth_set(25, 5, 2, 12);
  for (std::size_t r = 0; r < 25; ++r) set.components[kHx][0](r, 2) = 0.0;
  const PodBasis basis = two_step_pod(set, 4, 4);
  const PodErrorIndicator ind = pod_error_indicator(basis, set);
  CHECK(ind.excluded_zero_norm == 1);

  // definition oracle for Ez
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t j = 0; j < 2; ++j) {
    const Matrix& s = set.components[kEz][j];
    for (std::size_t i = 0; i < 5; ++i) {
      const std::vector<double> rec =
          reconstruct(basis, kEz, project(basis, kEz, s.col(i)));
      double d2 = 0.0, n2 = 0.0;
      for (std::size_t r = 0; r < 25; ++r) {
        d2 += std::pow(s(r, i) - rec[r], 2);
        n2 += s(r, i) * s(r, i);
      }
      sum += std::sqrt(d2 / n2);
      ++used;
    }
  }
  CHECK(ind.mean_relative_error[kEz] == doctest::Approx(sum / used).epsilon(1e-12));
}

TEST_CASE("error indicator is non-increasing in the basis size") {
  const SnapshotSet set = smooth_set(40, 12, 3, 13);
  double previous = 1e9;
  for (std::size_t nb : {1u, 4u, 9u, 16u}) {
    const PodBasis basis = two_step_pod(set, 8, nb);
    const PodErrorIndicator ind = pod_error_indicator(basis, set);
    const double total = ind.mean_relative_error[0] + ind.mean_relative_error[1] +
                         ind.mean_relative_error[2];
    CHECK(total <= previous + 1e-12);
    previous = total;
  }
}

TEST_CASE("measured two-step projection error respects the L1 + L2 bound") {
  const SnapshotSet set = smooth_set(80, 16, 4, 14, 1e-7);
  const PodBasis basis = two_step_pod(set, 5, 9);
  for (int c = 0; c < 3; ++c) {
    const double measured =
        projection_error_norm_sum(basis, set, static_cast<Component>(c));
    const double bound = two_step_bound(basis, set, static_cast<Component>(c));
    CHECK(measured <= bound * (1.0 + 1e-10) + 1e-12);
  }
}

TEST_CASE("intrinsic coordinates are the basis projections in grid order") {
  const SnapshotSet set = smooth_set(30, 6, 3, 15);
  const PodBasis basis = two_step_pod(set, 4, 9);
  const IntrinsicCoordinates coords = compute_intrinsic(basis, set);
  CHECK(coords.c[0].rows() == 9);
  CHECK(coords.c[0].cols() == 18);
  // spot-check: column (i=2, j=1) equals V^T snapshot(2,1)
  const std::vector<double> alpha = project(basis, kHy, set.snapshot(kHy, 2, 1));
  for (std::size_t r = 0; r < 9; ++r)
    CHECK(coords.c[kHy](r, 1 * 6 + 2) == doctest::Approx(alpha[r]).epsilon(1e-12));
}

TEST_CASE("paper operating point k=4 N=196 runs on a synthetic set") {
  const SnapshotSet set = smooth_set(250, 8, 49, 16, 1e-6);
  const PodBasis basis = two_step_pod(set, 4, 196);
  CHECK(basis.v[0].cols() == 196);
  const Matrix g = gemm_tn(basis.v[2], basis.v[2]);
  for (std::size_t i = 0; i < 196; ++i) CHECK(g(i, i) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("pod basis file round-trip") {
  const SnapshotSet set = smooth_set(30, 6, 2, 17);
  const PodBasis basis = two_step_pod(set, 4, 4);
  write_pod_basis(basis, "basis.pod");
  const PodBasis back = read_pod_basis("basis.pod");
  CHECK(back.k == basis.k);
  CHECK(back.nbasis == basis.nbasis);
  for (int c = 0; c < 3; ++c) {
    CHECK(back.step1_singulars[c].size() == basis.step1_singulars[c].size());
    CHECK(back.step2_singulars[c] == basis.step2_singulars[c]);
    for (std::size_t j = 0; j < basis.v[c].cols(); ++j)
      for (std::size_t r = 0; r < basis.v[c].rows(); ++r)
        CHECK(back.v[c](r, j) == basis.v[c](r, j));
  }
  std::remove("basis.pod");
}
