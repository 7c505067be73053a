// SPDX-License-Identifier: Apache-2.0

#ifndef MAXROM_ERRORS_HPP
#define MAXROM_ERRORS_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace maxrom {

/// Requested rank exceeds the numerical rank; carries the rank that was attainable.
class RankDeficientError : public std::runtime_error {
 public:
  RankDeficientError(const std::string& what, std::size_t attainable)
      : std::runtime_error(what), attainable_rank(attainable) {}
  std::size_t attainable_rank;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Binary container parse failure; reports the byte offset of the problem.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& what, std::uint64_t at)
      : std::runtime_error(what + " (at byte offset " + std::to_string(at) + ")"),
        offset(at) {}
  std::uint64_t offset;
};

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite field values during time stepping; carries the simulation time.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double at)
      : std::runtime_error(what + " (t = " + std::to_string(at) + ")"), time(at) {}
  double time;
};

/// Training produced a non-finite loss or gradient; carries the epoch index.
class DivergedError : public std::runtime_error {
 public:
  DivergedError(const std::string& what, long at)
      : std::runtime_error(what + " (epoch " + std::to_string(at) + ")"), epoch(at) {}
  long epoch;
};

class IncompleteDataError : public std::runtime_error {
 public:
  IncompleteDataError(const std::string& what, std::size_t ti, std::size_t pj)
      : std::runtime_error(what + " (time index " + std::to_string(ti) +
                           ", parameter index " + std::to_string(pj) + ")"),
        time_index(ti), param_index(pj) {}
  std::size_t time_index;
  std::size_t param_index;
};

/// min == max while normalizing: the affine map to [0,1] is undefined.
class DegenerateNormalizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace maxrom

#endif
