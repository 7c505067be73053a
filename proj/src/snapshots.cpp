// SPDX-License-Identifier: Apache-2.0

#include "maxrom/snapshots.hpp"

#include <cmath>
#include <stdexcept>

#include "maxrom/binio.hpp"
#include "maxrom/errors.hpp"

namespace maxrom {

std::vector<std::vector<double>> sample_parameters(const std::vector<ParamRange>& spec) {
  if (spec.empty()) throw std::invalid_argument("sample_parameters: no dimensions");
  std::size_t total = 1;
  for (const auto& r : spec) {
    if (r.count == 0) throw std::invalid_argument("sample_parameters: zero count");
    if (!(r.lo <= r.hi)) throw std::invalid_argument("sample_parameters: lo > hi");
    total *= r.count;
  }
  std::vector<std::vector<double>> grid;
  grid.reserve(total);
  std::vector<std::size_t> idx(spec.size(), 0);
  for (std::size_t g = 0; g < total; ++g) {
    std::vector<double> p(spec.size());
    for (std::size_t d = 0; d < spec.size(); ++d) {
      const auto& r = spec[d];
      p[d] = (r.count == 1)
                 ? r.lo
                 : r.lo + (r.hi - r.lo) * static_cast<double>(idx[d]) /
                              static_cast<double>(r.count - 1);
    }
    grid.push_back(std::move(p));
    // lexicographic increment, last dimension fastest
    for (std::size_t d = spec.size(); d-- > 0;) {
      if (++idx[d] < spec[d].count) break;
      idx[d] = 0;
    }
  }
  return grid;
}

std::vector<std::size_t> uniform_subsample_indices(std::size_t available,
                                                   std::size_t count) {
  if (count == 0 || count > available)
    throw std::invalid_argument("uniform_subsample_indices: bad count");
  std::vector<std::size_t> idx(count);
  if (count == 1) {
    idx[0] = available - 1;  // a single snapshot: take the final state
    return idx;
  }
  for (std::size_t i = 0; i < count; ++i)
    idx[i] = (i * (available - 1) + (count - 1) / 2) / (count - 1);
  return idx;
}

SnapshotSet collect_snapshots(const std::vector<Trajectory>& trajectories,
                              const std::vector<std::vector<double>>& parameters,
                              double window_start, double window_end, std::size_t n_t) {
  if (trajectories.empty() || trajectories.size() != parameters.size())
    throw std::invalid_argument("collect_snapshots: trajectory/parameter count mismatch");

  const auto& times = trajectories.front().times;
  std::size_t first = times.size(), last = times.size();
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= window_start - 1e-12 && first == times.size()) first = i;
    if (times[i] <= window_end + 1e-12) last = i;
  }
  if (first >= times.size() || last == times.size() || last < first)
    throw std::range_error("collect_snapshots: window outside simulated time range");
  const std::size_t avail = last - first + 1;
  if (n_t > avail)
    throw std::range_error("collect_snapshots: window holds only " +
                           std::to_string(avail) + " states, need " + std::to_string(n_t));

  const std::vector<std::size_t> pick = uniform_subsample_indices(avail, n_t);

  SnapshotSet set;
  set.n_h = trajectories.front().ez.front().size();
  set.plan.parameters = parameters;
  set.plan.times.reserve(n_t);
  for (std::size_t i : pick) set.plan.times.push_back(times[first + i]);

  for (int c = 0; c < 3; ++c) set.components[c].reserve(trajectories.size());
  for (const Trajectory& tr : trajectories) {
    if (tr.times.size() != times.size() || tr.ez.front().size() != set.n_h)
      throw std::invalid_argument("collect_snapshots: trajectories not aligned");
    for (int c = 0; c < 3; ++c) {
      const auto& field = (c == kHx) ? tr.hx : (c == kHy) ? tr.hy : tr.ez;
      Matrix s(set.n_h, n_t);
      for (std::size_t i = 0; i < n_t; ++i) {
        const std::vector<double>& col = field[first + pick[i]];
        std::copy(col.begin(), col.end(), s.col(i).data());
      }
      set.components[c].push_back(std::move(s));
    }
  }
  return set;
}

void write_snapshots(const SnapshotSet& set, const std::string& path) {
  BinWriter w(path);
  w.tag("ROMSNAP1");
  w.u32(1);
  w.u32(3);
  w.u32(static_cast<std::uint32_t>(set.n_h));
  w.u32(static_cast<std::uint32_t>(set.plan.n_t()));
  w.u32(static_cast<std::uint32_t>(set.plan.n_p()));
  w.u32(static_cast<std::uint32_t>(set.plan.dim()));
  w.f64_block(set.plan.times);
  for (const auto& p : set.plan.parameters) w.f64_block(p);
  for (int c = 0; c < 3; ++c)
    for (const Matrix& s : set.components[c])
      w.f64_block({s.data(), s.rows() * s.cols()});
  w.close();
}

SnapshotSet read_snapshots(const std::string& path) {
  BinReader r(path);
  r.expect_tag("ROMSNAP1", "snapshot file");
  const std::uint32_t version = r.u32();
  if (version != 1)
    throw FormatError("unsupported snapshot version " + std::to_string(version),
                      r.offset() - 4);
  const std::uint32_t ncomp = r.u32();
  if (ncomp != 3)
    throw FormatError("expected 3 components, got " + std::to_string(ncomp),
                      r.offset() - 4);
  const std::uint32_t n_h = r.u32();
  const std::uint32_t n_t = r.u32();
  const std::uint32_t n_p = r.u32();
  const std::uint32_t dim = r.u32();
  if (n_h == 0 || n_t == 0 || n_p == 0 || dim == 0)
    throw FormatError("zero dimension in snapshot header", r.offset());

  SnapshotSet set;
  set.n_h = n_h;
  set.plan.times.resize(n_t);
  r.f64_block(set.plan.times);
  for (std::size_t i = 1; i < set.plan.times.size(); ++i)
    if (!(set.plan.times[i - 1] < set.plan.times[i]))
      throw FormatError("time points not strictly increasing", r.offset());
  set.plan.parameters.assign(n_p, std::vector<double>(dim));
  for (auto& p : set.plan.parameters) r.f64_block(p);
  for (int c = 0; c < 3; ++c) {
    set.components[c].reserve(n_p);
    for (std::uint32_t j = 0; j < n_p; ++j) {
      Matrix s(n_h, n_t);
      r.f64_block({s.data(), static_cast<std::size_t>(n_h) * n_t});
      set.components[c].push_back(std::move(s));
    }
  }
  return set;
}

}  // namespace maxrom
