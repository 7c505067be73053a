// SPDX-License-Identifier: Apache-2.0

#ifndef MAXROM_SNAPSHOTS_HPP
#define MAXROM_SNAPSHOTS_HPP

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "maxrom/dgtd.hpp"
#include "maxrom/matrix.hpp"

namespace maxrom {

enum Component : int { kHx = 0, kHy = 1, kEz = 2 };
constexpr std::array<const char*, 3> kComponentNames = {"Hx", "Hy", "Ez"};

struct ParamRange {
  double lo = 0.0, hi = 0.0;
  std::size_t count = 0;
};

/// Time and parameter samplings of the training database.
struct SamplingPlan {
  std::vector<std::vector<double>> parameters;  // N_p vectors, all of equal dim
  std::vector<double> times;                    // N_t, strictly increasing

  std::size_t n_p() const { return parameters.size(); }
  std::size_t n_t() const { return times.size(); }
  std::size_t n_s() const { return n_p() * n_t(); }
  std::size_t dim() const { return parameters.empty() ? 0 : parameters.front().size(); }
};

/// Full tensor-product grid, lexicographic (dimension 0 slowest), equidistant
/// points per dimension.
std::vector<std::vector<double>> sample_parameters(const std::vector<ParamRange>& spec);

/// Per-component time trajectory matrices S_c^j (N_h x N_t), one per parameter.
struct SnapshotSet {
  SamplingPlan plan;
  std::size_t n_h = 0;
  std::array<std::vector<Matrix>, 3> components;  // [Hx, Hy, Ez][j]

  const Matrix& trajectory(Component c, std::size_t j) const { return components[c][j]; }
  /// Column of the (t_i, mu_j) snapshot within component c.
  std::span<const double> snapshot(Component c, std::size_t i, std::size_t j) const {
    return components[c][j].col(i);
  }
};

/// Uniformly select `count` indices from [0, available); first and last kept
/// when count >= 2.
std::vector<std::size_t> uniform_subsample_indices(std::size_t available,
                                                   std::size_t count);

/// Subsample each trajectory down to n_t columns lying in [window_start,
/// window_end] and assemble the snapshot set. Trajectories must share times.
SnapshotSet collect_snapshots(const std::vector<Trajectory>& trajectories,
                              const std::vector<std::vector<double>>& parameters,
                              double window_start, double window_end, std::size_t n_t);

// Binary container, little-endian:
//   "ROMSNAP1" | u32 version=1 | u32 component count | u32 N_h | u32 N_t |
//   u32 N_p | u32 param dim | f64 time points (N_t) |
//   f64 parameter matrix (dim x N_p, parameter vectors contiguous) |
//   per component, per parameter: f64 column-major N_h x N_t block.
void write_snapshots(const SnapshotSet& set, const std::string& path);
SnapshotSet read_snapshots(const std::string& path);

}  // namespace maxrom

#endif
