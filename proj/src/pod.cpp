// SPDX-License-Identifier: Apache-2.0

#include "maxrom/pod.hpp"

#include <cmath>
#include <stdexcept>

#include "maxrom/binio.hpp"
#include "maxrom/errors.hpp"
#include "maxrom/linalg.hpp"

namespace maxrom {

bool is_perfect_square(std::size_t n) {
  const auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
  return r * r == n;
}

PodBasis two_step_pod(const SnapshotSet& set, std::size_t k, std::size_t nbasis) {
  if (k == 0 || nbasis == 0) throw std::invalid_argument("two_step_pod: k, nbasis > 0");
  if (!is_perfect_square(nbasis))
    throw std::invalid_argument("two_step_pod: basis size " + std::to_string(nbasis) +
                                " is not a perfect square");
  PodBasis basis;
  basis.k = k;
  basis.nbasis = nbasis;
  for (int c = 0; c < 3; ++c) {
    std::vector<Matrix> compressed;
    compressed.reserve(set.plan.n_p());
    for (std::size_t j = 0; j < set.plan.n_p(); ++j) {
      const Matrix& traj = set.trajectory(static_cast<Component>(c), j);
      try {
        compressed.push_back(pod_basis(traj, k));
      } catch (const RankDeficientError& e) {
        throw RankDeficientError("two_step_pod step 1, component " +
                                     std::string(kComponentNames[c]) + ", parameter " +
                                     std::to_string(j) + ": " + e.what(),
                                 e.attainable_rank);
      }
      // step-1 ledger: full singular spectrum of the trajectory
      const EigResult eig = eig_sym(gemm_tn(traj, traj));
      std::vector<double> sigma;
      sigma.reserve(eig.values.size());
      for (double l : eig.values) sigma.push_back(std::sqrt(std::max(l, 0.0)));
      basis.step1_singulars[c].push_back(std::move(sigma));
    }
    const Matrix assembled = hcat(compressed);
    try {
      basis.v[c] = pod_basis(assembled, nbasis);
    } catch (const RankDeficientError& e) {
      throw RankDeficientError("two_step_pod step 2, component " +
                                   std::string(kComponentNames[c]) + ": " + e.what(),
                               e.attainable_rank);
    }
    const EigResult eig = eig_sym(gemm_tn(assembled, assembled));
    std::vector<double> sigma;
    sigma.reserve(eig.values.size());
    for (double l : eig.values) sigma.push_back(std::sqrt(std::max(l, 0.0)));
    basis.step2_singulars[c] = std::move(sigma);
  }
  return basis;
}

std::vector<double> project(const PodBasis& basis, Component c,
                            std::span<const double> u_h) {
  if (u_h.size() != basis.n_h())
    throw std::invalid_argument("project: field length does not match basis");
  return matvec_t(basis.v[c], u_h);
}

std::vector<double> reconstruct(const PodBasis& basis, Component c,
                                std::span<const double> alpha) {
  if (alpha.size() != basis.nbasis)
    throw std::invalid_argument("reconstruct: coefficient length does not match basis");
  return matvec(basis.v[c], alpha);
}

IntrinsicCoordinates compute_intrinsic(const PodBasis& basis, const SnapshotSet& set) {
  if (set.n_h != basis.n_h())
    throw std::invalid_argument("compute_intrinsic: snapshot/basis N_h mismatch");
  IntrinsicCoordinates coords;
  coords.plan = set.plan;
  for (int c = 0; c < 3; ++c) {
    Matrix all(basis.nbasis, set.plan.n_s());
    std::size_t at = 0;
    for (std::size_t j = 0; j < set.plan.n_p(); ++j) {
      const Matrix block = gemm_tn(basis.v[c], set.components[c][j]);
      for (std::size_t i = 0; i < block.cols(); ++i, ++at)
        std::copy(block.col(i).begin(), block.col(i).end(), all.col(at).begin());
    }
    coords.c[c] = std::move(all);
  }
  return coords;
}

PodErrorIndicator pod_error_indicator(const PodBasis& basis, const SnapshotSet& set) {
  if (set.n_h != basis.n_h())
    throw std::invalid_argument("pod_error_indicator: snapshot/basis N_h mismatch");
  PodErrorIndicator out;
  for (int c = 0; c < 3; ++c) {
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t j = 0; j < set.plan.n_p(); ++j) {
      const Matrix& s = set.components[c][j];
      for (std::size_t i = 0; i < s.cols(); ++i) {
        const auto col = s.col(i);
        const double nrm = norm2(col);
        if (nrm == 0.0) {
          ++out.excluded_zero_norm;
          continue;
        }
        const std::vector<double> alpha = matvec_t(basis.v[c], col);
        const std::vector<double> rec = matvec(basis.v[c], alpha);
        double err2 = 0.0;
        for (std::size_t r = 0; r < col.size(); ++r) {
          const double d = col[r] - rec[r];
          err2 += d * d;
        }
        sum += std::sqrt(err2) / nrm;
        ++used;
      }
    }
    out.mean_relative_error[c] = (used > 0) ? sum / static_cast<double>(used) : 0.0;
  }
  return out;
}

void write_pod_basis(const PodBasis& basis, const std::string& path) {
  BinWriter w(path);
  w.tag("ROMSNAP1");
  w.u32(1);
  w.tag("PODBASIS");
  w.u32(3);
  w.u32(static_cast<std::uint32_t>(basis.n_h()));
  w.u32(static_cast<std::uint32_t>(basis.k));
  w.u32(static_cast<std::uint32_t>(basis.nbasis));
  for (int c = 0; c < 3; ++c) {
    const Matrix& v = basis.v[c];
    w.f64_block({v.data(), v.rows() * v.cols()});
    w.u32(static_cast<std::uint32_t>(basis.step1_singulars[c].size()));
    for (const auto& sig : basis.step1_singulars[c]) {
      w.u32(static_cast<std::uint32_t>(sig.size()));
      w.f64_block(sig);
    }
    w.u32(static_cast<std::uint32_t>(basis.step2_singulars[c].size()));
    w.f64_block(basis.step2_singulars[c]);
  }
  w.close();
}

PodBasis read_pod_basis(const std::string& path) {
  BinReader r(path);
  r.expect_tag("ROMSNAP1", "basis container");
  if (r.u32() != 1) throw FormatError("unsupported basis container version", r.offset() - 4);
  r.expect_tag("PODBASIS", "basis section");
  if (r.u32() != 3) throw FormatError("expected 3 components", r.offset() - 4);
  const std::uint32_t n_h = r.u32();
  PodBasis basis;
  basis.k = r.u32();
  basis.nbasis = r.u32();
  for (int c = 0; c < 3; ++c) {
    Matrix v(n_h, basis.nbasis);
    r.f64_block({v.data(), static_cast<std::size_t>(n_h) * basis.nbasis});
    basis.v[c] = std::move(v);
    const std::uint32_t np = r.u32();
    basis.step1_singulars[c].resize(np);
    for (auto& sig : basis.step1_singulars[c]) {
      sig.resize(r.u32());
      r.f64_block(sig);
    }
    basis.step2_singulars[c].resize(r.u32());
    r.f64_block(basis.step2_singulars[c]);
  }
  return basis;
}

}  // namespace maxrom
