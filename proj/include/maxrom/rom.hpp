// SPDX-License-Identifier: Apache-2.0

#ifndef MAXROM_ROM_HPP
#define MAXROM_ROM_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "maxrom/cae.hpp"
#include "maxrom/config.hpp"
#include "maxrom/csi.hpp"
#include "maxrom/pod.hpp"

namespace maxrom {

/// Workdir layout of the persisted pipeline artifacts.
struct RomPaths {
  std::string workdir;
  std::string trajectories;  // last-period window states per parameter
  std::string snapshots;
  std::string basis;
  std::string cae;
  std::string cae_log;
  std::string csi;
  std::string baseline_csi;
  std::string meta;
  std::string stamps;
  std::string timings;
  std::string test_refs;
};
RomPaths rom_paths(const ExperimentConfig& cfg);

/// The complete online artifact: basis, decoder, code interpolants, plus the
/// interpolants of the raw intrinsic coordinates for the no-autoencoder
/// baseline. Everything the online stage touches lives here.
struct RomModel {
  PodBasis basis;
  CaeModel cae;
  ModeModelSet csi;           // cae_n code components
  ModeModelSet baseline_csi;  // 3 * nbasis intrinsic coordinates
  std::string config_hash;
};

struct StageTimings {
  std::map<std::string, double> seconds;  // per stage
  double fom_run_average = 0.0;           // one DGTD solve, averaged over the sweep
};
void write_timings(const StageTimings& t, const std::string& path);
StageTimings read_timings(const std::string& path);

// Offline stages (Algorithm-level: FOM sweep, snapshot assembly, two-step
// POD, CAE training, reduced matrices + mode decomposition). Each stage
// persists its artifact and is skipped on resume when its stamp matches the
// config hash. Stage errors are rethrown with the stage name attached.
void stage_fom_run(const ExperimentConfig& cfg, StageTimings& timings);
void stage_snapshots(const ExperimentConfig& cfg, StageTimings& timings);
void stage_pod(const ExperimentConfig& cfg, StageTimings& timings);
void stage_train_cae(const ExperimentConfig& cfg, StageTimings& timings);
void stage_fit_csi(const ExperimentConfig& cfg, StageTimings& timings);

RomModel offline(const ExperimentConfig& cfg, bool resume = false);
RomModel load_model(const ExperimentConfig& cfg);

struct OnlineResult {
  std::array<std::vector<double>, 3> fields;  // Hx, Hy, Ez of length N_h
  bool extrapolated = false;
};

/// Pure function of (model, t, mu): codes from the CSI model, coefficients
/// from the decoder, fields from the basis.
OnlineResult online(const RomModel& model, double t, std::span<const double> mu);

/// Baseline without the autoencoder: interpolated intrinsic coordinates
/// straight into the basis.
OnlineResult online_pod_csi(const RomModel& model, double t, std::span<const double> mu);

/// FOM reference solutions on the held-out test sampling (cached on disk).
SnapshotSet compute_test_references(const ExperimentConfig& cfg, bool use_cache = true);

// error indices: per component plus the H = (Hx, Hy) pair and E = Ez views
enum ErrorField : int { eHx = 0, eHy = 1, eEz = 2, eH = 3, eE = 4 };

struct ErrorSample {
  double t = 0.0;
  std::vector<double> mu;
  std::array<double, 5> pro{};  // relative projection error
  std::array<double, 5> rom{};  // relative CAE-CSI error
};

struct ErrorReport {
  std::vector<ErrorSample> samples;
  std::array<double, 5> mean_pro{};
  std::array<double, 5> mean_rom{};
  std::size_t excluded_zero_norm = 0;
};

ErrorReport evaluate_errors(const RomModel& model, const SnapshotSet& references);
void write_error_report(const ErrorReport& report, const std::string& path);

/// reference_seconds / online_seconds; infinity when online_seconds == 0.
double speedup_ratio(double reference_seconds, double online_seconds);

struct OnlineBenchmark {
  double cae_csi_seconds = 0.0;  // median per query
  double pod_csi_seconds = 0.0;
  std::size_t queries = 0;
};
OnlineBenchmark benchmark_online(const RomModel& model,
                                 const std::vector<std::vector<double>>& mus,
                                 const std::vector<double>& times, std::size_t repeats = 3);

std::string render_report(const ExperimentConfig& cfg, const StageTimings& timings,
                          const ErrorReport& errors, const OnlineBenchmark& bench);

/// Discrete Fourier coefficient of the ROM fields at the drive frequency over
/// the final-period time samples; returns Re/Im parts per component.
struct FourierField {
  std::array<std::vector<double>, 3> re, im;
};
FourierField fourier_field(const RomModel& model, std::span<const double> mu,
                           const std::vector<double>& times, double omega);

}  // namespace maxrom

#endif
