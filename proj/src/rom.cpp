// SPDX-License-Identifier: Apache-2.0

#include "maxrom/rom.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "maxrom/dgtd.hpp"
#include "maxrom/errors.hpp"

namespace maxrom {

namespace fs = std::filesystem;

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

struct StageGuard {
  // tags stage failures and records wall time
  StageGuard(const char* stage, StageTimings& timings)
      : name(stage), timings_(timings), start_(now_seconds()) {}
  void done() { timings_.seconds[name] = now_seconds() - start_; }
  std::string name;
  StageTimings& timings_;
  double start_;
};

template <typename F>
void run_stage(const char* name, StageTimings& timings, F&& body) {
  StageGuard guard(name, timings);
  try {
    body();
  } catch (const std::exception& e) {
    throw std::runtime_error("offline stage '" + std::string(name) + "': " + e.what());
  }
  guard.done();
}

std::map<std::string, std::string> read_stamps(const std::string& path) {
  std::map<std::string, std::string> stamps;
  std::ifstream in(path);
  std::string stage, hash;
  while (in >> stage >> hash) stamps[stage] = hash;
  return stamps;
}

void write_stamp(const std::string& path, const std::string& stage,
                 const std::string& hash) {
  auto stamps = read_stamps(path);
  stamps[stage] = hash;
  std::ofstream out(path, std::ios::trunc);
  for (const auto& [s, h] : stamps) out << s << " " << h << "\n";
}

bool stage_fresh(const RomPaths& paths, const std::string& stage, const std::string& hash,
                 const std::vector<std::string>& artifacts) {
  const auto stamps = read_stamps(paths.stamps);
  const auto it = stamps.find(stage);
  if (it == stamps.end() || it->second != hash) return false;
  for (const auto& a : artifacts)
    if (!fs::exists(a)) return false;
  return true;
}

int worker_count(const ExperimentConfig& cfg, std::size_t jobs) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t cap = (cfg.threads > 0) ? static_cast<std::size_t>(cfg.threads) : hw;
  return static_cast<int>(std::min(jobs, cap));
}

}  // namespace

RomPaths rom_paths(const ExperimentConfig& cfg) {
  RomPaths p;
  p.workdir = cfg.workdir;
  p.trajectories = cfg.workdir + "/trajectories.rsnp";
  p.snapshots = cfg.workdir + "/snapshots.rsnp";
  p.basis = cfg.workdir + "/basis.pod";
  p.cae = cfg.workdir + "/cae.bin";
  p.cae_log = cfg.workdir + "/training_log.csv";
  p.csi = cfg.workdir + "/csi.bin";
  p.baseline_csi = cfg.workdir + "/csi_baseline.bin";
  p.meta = cfg.workdir + "/model.meta";
  p.stamps = cfg.workdir + "/stage_stamps.txt";
  p.timings = cfg.workdir + "/timings.csv";
  p.test_refs = cfg.workdir + "/test_refs.rsnp";
  return p;
}

void write_timings(const StageTimings& t, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::fprintf(f, "stage,seconds\n");
  for (const auto& [stage, s] : t.seconds) std::fprintf(f, "%s,%.17g\n", stage.c_str(), s);
  std::fprintf(f, "fom_run_average,%.17g\n", t.fom_run_average);
  std::fclose(f);
}

StageTimings read_timings(const std::string& path) {
  StageTimings t;
  std::ifstream in(path);
  if (!in) return t;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) continue;
    const std::string stage = line.substr(0, comma);
    const double s = std::strtod(line.c_str() + comma + 1, nullptr);
    if (stage == "fom_run_average")
      t.fom_run_average = s;
    else
      t.seconds[stage] = s;
  }
  return t;
}

namespace {

// One FOM solve for a parameter vector, returning only the last-period window.
Trajectory solve_one(const ExperimentConfig& cfg, const Mesh& mesh,
                     std::span<const double> mu, double dt) {
  FomOptions opt;
  opt.omega = cfg.omega;
  opt.amplitude = cfg.amplitude;
  opt.dt = dt;
  opt.t_final = cfg.t_final();
  opt.store_from = cfg.t_final() - cfg.period();
  return run_fom(mesh, cfg.materials_for(mu), cfg.order, opt);
}

double sweep_dt(const ExperimentConfig& cfg, const Mesh& mesh) {
  // CFL over the parameter box: the bound is material-independent here
  // (normalized c = 1), so any admissible material map works.
  std::vector<double> lo(cfg.param_ranges.size());
  for (std::size_t d = 0; d < lo.size(); ++d) lo[d] = cfg.param_ranges[d].lo;
  const DgOperators ops = assemble_operators(mesh, cfg.materials_for(lo), cfg.order);
  return cfg.resolve_dt(ops.cfl_dt);
}

}  // namespace

void stage_fom_run(const ExperimentConfig& cfg, StageTimings& timings) {
  run_stage("snapshots", timings, [&] {
    const RomPaths paths = rom_paths(cfg);
    fs::create_directories(paths.workdir);
    const Mesh mesh = generate_mesh(cfg.half_width, cfg.resolution, cfg.inclusions);
    const std::vector<std::vector<double>> grid = sample_parameters(cfg.param_ranges);
    const double dt = sweep_dt(cfg, mesh);

    std::vector<Trajectory> trajectories(grid.size());
    const int workers = worker_count(cfg, grid.size());
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> futs;
    futs.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      futs.push_back(std::async(std::launch::async, [&] {
        for (;;) {
          const std::size_t j = next.fetch_add(1);
          if (j >= grid.size()) return;
          trajectories[j] = solve_one(cfg, mesh, grid[j], dt);
        }
      }));
    }
    for (auto& f : futs) f.get();

    double fom_total = 0.0;
    for (const auto& tr : trajectories) fom_total += tr.wall_seconds;
    timings.fom_run_average = fom_total / static_cast<double>(grid.size());

    // persist the full window; the snapshot stage subsamples it
    const std::size_t window_cols = trajectories.front().times.size();
    SnapshotSet window = collect_snapshots(trajectories, grid,
                                           trajectories.front().times.front(),
                                           trajectories.front().times.back(), window_cols);
    write_snapshots(window, rom_paths(cfg).trajectories);
    write_stamp(rom_paths(cfg).stamps, "snapshots_raw", cfg.hash());
  });
}

void stage_snapshots(const ExperimentConfig& cfg, StageTimings& timings) {
  run_stage("snapshot_select", timings, [&] {
    const RomPaths paths = rom_paths(cfg);
    const SnapshotSet window = read_snapshots(paths.trajectories);
    // re-window: uniform subsample of the stored last-period states
    const std::vector<std::size_t> pick =
        uniform_subsample_indices(window.plan.n_t(), cfg.nt);
    SnapshotSet set;
    set.n_h = window.n_h;
    set.plan.parameters = window.plan.parameters;
    for (std::size_t i : pick) set.plan.times.push_back(window.plan.times[i]);
    for (int c = 0; c < 3; ++c) {
      set.components[c].reserve(window.plan.n_p());
      for (std::size_t j = 0; j < window.plan.n_p(); ++j) {
        Matrix s(window.n_h, cfg.nt);
        for (std::size_t i = 0; i < cfg.nt; ++i)
          std::copy(window.components[c][j].col(pick[i]).begin(),
                    window.components[c][j].col(pick[i]).end(), s.col(i).begin());
        set.components[c].push_back(std::move(s));
      }
    }
    write_snapshots(set, paths.snapshots);
    write_stamp(paths.stamps, "snapshots", cfg.hash());
  });
}

void stage_pod(const ExperimentConfig& cfg, StageTimings& timings) {
  run_stage("two_step_pod", timings, [&] {
    const RomPaths paths = rom_paths(cfg);
    const SnapshotSet set = read_snapshots(paths.snapshots);
    const PodBasis basis = two_step_pod(set, cfg.pod_k, cfg.pod_nbasis);
    write_pod_basis(basis, paths.basis);
    write_stamp(paths.stamps, "pod", cfg.hash());
  });
}

void stage_train_cae(const ExperimentConfig& cfg, StageTimings& timings) {
  run_stage("cae_training", timings, [&] {
    const RomPaths paths = rom_paths(cfg);
    const SnapshotSet set = read_snapshots(paths.snapshots);
    const PodBasis basis = read_pod_basis(paths.basis);
    const IntrinsicCoordinates coords = compute_intrinsic(basis, set);
    const CaeDataset dataset = prepare_dataset(coords, cfg.cae_lambda, cfg.cae_seed);
    const auto side = static_cast<std::size_t>(
        std::llround(std::sqrt(static_cast<double>(cfg.pod_nbasis))));
    const CaeArchitecture arch = select_architecture(side, cfg.cae_n, cfg.cae_width);
    TrainHyper hyper;
    hyper.eta0 = cfg.cae_eta0;
    hyper.alpha = cfg.cae_alpha;
    hyper.batch = cfg.cae_batch;
    hyper.max_epochs = cfg.cae_max_epochs;
    hyper.patience = cfg.cae_patience;
    const CaeModel model = train(dataset, arch, hyper, cfg.cae_seed);
    write_cae(model, paths.cae);
    write_training_log(model, paths.cae_log);
    write_stamp(paths.stamps, "cae", cfg.hash());
  });
}

void stage_fit_csi(const ExperimentConfig& cfg, StageTimings& timings) {
  run_stage("csi_fit", timings, [&] {
    const RomPaths paths = rom_paths(cfg);
    const SnapshotSet set = read_snapshots(paths.snapshots);
    const PodBasis basis = read_pod_basis(paths.basis);
    const CaeModel cae = read_cae(paths.cae);
    const IntrinsicCoordinates coords = compute_intrinsic(basis, set);

    const Matrix codes = encode_grid(cae, coords);
    const ReducedMatrixSet reduced = build_reduced_matrices(codes, set.plan);
    const ModeModelSet modes = decompose_modes(reduced, cfg.csi_delta);
    write_mode_models(modes, paths.csi);

    // baseline: interpolate the intrinsic coordinates themselves
    Matrix stacked(3 * cfg.pod_nbasis, set.plan.n_s());
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < cfg.pod_nbasis; ++i)
        for (std::size_t s = 0; s < set.plan.n_s(); ++s)
          stacked(c * cfg.pod_nbasis + i, s) = coords.c[c](i, s);
    const ReducedMatrixSet base_reduced = build_reduced_matrices(stacked, set.plan);
    const ModeModelSet base_modes = decompose_modes(base_reduced, cfg.csi_delta);
    write_mode_models(base_modes, paths.baseline_csi);

    std::ofstream meta(paths.meta, std::ios::trunc);
    meta << "config_hash " << cfg.hash() << "\n";
    meta << "n_h " << basis.n_h() << "\n";
    meta << "nbasis " << basis.nbasis << "\n";
    meta << "k " << basis.k << "\n";
    meta << "code " << cae.code() << "\n";
    meta << "seed " << cfg.cae_seed << "\n";
    write_stamp(paths.stamps, "csi", cfg.hash());
  });
}

RomModel offline(const ExperimentConfig& cfg, bool resume) {
  const RomPaths paths = rom_paths(cfg);
  fs::create_directories(paths.workdir);
  const std::string hash = cfg.hash();
  StageTimings timings = resume ? read_timings(paths.timings) : StageTimings{};

  if (!(resume && stage_fresh(paths, "snapshots_raw", hash, {paths.trajectories})))
    stage_fom_run(cfg, timings);
  if (!(resume && stage_fresh(paths, "snapshots", hash, {paths.snapshots})))
    stage_snapshots(cfg, timings);
  if (!(resume && stage_fresh(paths, "pod", hash, {paths.basis})))
    stage_pod(cfg, timings);
  if (!(resume && stage_fresh(paths, "cae", hash, {paths.cae})))
    stage_train_cae(cfg, timings);
  if (!(resume && stage_fresh(paths, "csi", hash,
                              {paths.csi, paths.baseline_csi, paths.meta})))
    stage_fit_csi(cfg, timings);

  write_timings(timings, paths.timings);
  return load_model(cfg);
}

RomModel load_model(const ExperimentConfig& cfg) {
  const RomPaths paths = rom_paths(cfg);
  RomModel model;
  model.basis = read_pod_basis(paths.basis);
  model.cae = read_cae(paths.cae);
  model.csi = read_mode_models(paths.csi);
  model.baseline_csi = read_mode_models(paths.baseline_csi);
  std::ifstream meta(paths.meta);
  std::string key, value;
  while (meta >> key >> value)
    if (key == "config_hash") model.config_hash = value;
  if (model.cae.side() * model.cae.side() != model.basis.nbasis ||
      model.csi.n() != model.cae.code() ||
      model.baseline_csi.n() != 3 * model.basis.nbasis)
    throw std::runtime_error("corrupt model: dimension chain mismatch");
  return model;
}

OnlineResult online(const RomModel& model, double t, std::span<const double> mu) {
  const CodeEval code = eval_code(model.csi, t, mu);
  const Decoded dec = decode(model.cae, code.code);
  OnlineResult out;
  out.extrapolated = code.extrapolated;
  for (int c = 0; c < 3; ++c)
    out.fields[c] = reconstruct(model.basis, static_cast<Component>(c), dec.alpha[c]);
  return out;
}

OnlineResult online_pod_csi(const RomModel& model, double t, std::span<const double> mu) {
  const CodeEval alpha = eval_code(model.baseline_csi, t, mu);
  const std::size_t nb = model.basis.nbasis;
  OnlineResult out;
  out.extrapolated = alpha.extrapolated;
  for (int c = 0; c < 3; ++c) {
    const std::span<const double> a(alpha.code.data() + c * nb, nb);
    out.fields[c] = reconstruct(model.basis, static_cast<Component>(c), a);
  }
  return out;
}

SnapshotSet compute_test_references(const ExperimentConfig& cfg, bool use_cache) {
  const RomPaths paths = rom_paths(cfg);
  if (use_cache && stage_fresh(paths, "test_refs", cfg.hash(), {paths.test_refs}))
    return read_snapshots(paths.test_refs);
  if (cfg.test_parameters.empty())
    throw std::invalid_argument("no test parameters configured");

  const Mesh mesh = generate_mesh(cfg.half_width, cfg.resolution, cfg.inclusions);
  const double dt = sweep_dt(cfg, mesh);
  std::vector<Trajectory> trajectories(cfg.test_parameters.size());
  const int workers = worker_count(cfg, trajectories.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::future<void>> futs;
  for (int w = 0; w < workers; ++w) {
    futs.push_back(std::async(std::launch::async, [&] {
      for (;;) {
        const std::size_t j = next.fetch_add(1);
        if (j >= trajectories.size()) return;
        trajectories[j] = solve_one(cfg, mesh, cfg.test_parameters[j], dt);
      }
    }));
  }
  for (auto& f : futs) f.get();

  SnapshotSet refs;
  if (cfg.test_times_train) {
    const std::vector<std::size_t> pick =
        uniform_subsample_indices(trajectories.front().times.size(), cfg.nt);
    std::vector<std::size_t> indices(pick.begin(), pick.end());
    refs = collect_snapshots(trajectories, cfg.test_parameters,
                             trajectories.front().times.front(),
                             trajectories.front().times.back(),
                             trajectories.front().times.size());
    // subsample to the training time stencil
    SnapshotSet sel;
    sel.n_h = refs.n_h;
    sel.plan.parameters = refs.plan.parameters;
    for (std::size_t i : indices) sel.plan.times.push_back(refs.plan.times[i]);
    for (int c = 0; c < 3; ++c) {
      for (std::size_t j = 0; j < refs.plan.n_p(); ++j) {
        Matrix s(refs.n_h, indices.size());
        for (std::size_t i = 0; i < indices.size(); ++i)
          std::copy(refs.components[c][j].col(indices[i]).begin(),
                    refs.components[c][j].col(indices[i]).end(), s.col(i).begin());
        sel.components[c].push_back(std::move(s));
      }
    }
    refs = std::move(sel);
  } else {
    // nearest stored state per requested time
    const auto& times = trajectories.front().times;
    std::vector<std::size_t> indices;
    for (double want : cfg.test_times) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < times.size(); ++i)
        if (std::abs(times[i] - want) < std::abs(times[best] - want)) best = i;
      indices.push_back(best);
    }
    refs.n_h = trajectories.front().ez.front().size();
    refs.plan.parameters = cfg.test_parameters;
    for (std::size_t i : indices) refs.plan.times.push_back(times[i]);
    for (int c = 0; c < 3; ++c) {
      for (const auto& tr : trajectories) {
        const auto& field = (c == kHx) ? tr.hx : (c == kHy) ? tr.hy : tr.ez;
        Matrix s(refs.n_h, indices.size());
        for (std::size_t i = 0; i < indices.size(); ++i)
          std::copy(field[indices[i]].begin(), field[indices[i]].end(), s.col(i).begin());
        refs.components[c].push_back(std::move(s));
      }
    }
  }
  write_snapshots(refs, paths.test_refs);
  write_stamp(paths.stamps, "test_refs", cfg.hash());
  return refs;
}

namespace {

double norm2sq(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

ErrorReport evaluate_errors(const RomModel& model, const SnapshotSet& references) {
  ErrorReport report;
  const std::size_t n_t = references.plan.n_t();
  const std::size_t n_p = references.plan.n_p();
  for (std::size_t j = 0; j < n_p; ++j) {
    for (std::size_t i = 0; i < n_t; ++i) {
      ErrorSample sample;
      sample.t = references.plan.times[i];
      sample.mu = references.plan.parameters[j];

      const OnlineResult rom = online(model, sample.t, sample.mu);
      std::array<std::span<const double>, 3> ref = {references.snapshot(kHx, i, j),
                                                    references.snapshot(kHy, i, j),
                                                    references.snapshot(kEz, i, j)};
      std::array<double, 3> dpro2{}, drom2{}, nrm2{};
      bool skip = false;
      for (int c = 0; c < 3; ++c) {
        nrm2[c] = norm2sq(ref[c]);
        const std::vector<double> alpha =
            project(model.basis, static_cast<Component>(c), ref[c]);
        const std::vector<double> proj =
            reconstruct(model.basis, static_cast<Component>(c), alpha);
        double dp = 0.0, dr = 0.0;
        for (std::size_t r = 0; r < ref[c].size(); ++r) {
          const double ep = ref[c][r] - proj[r];
          const double er = ref[c][r] - rom.fields[c][r];
          dp += ep * ep;
          dr += er * er;
        }
        dpro2[c] = dp;
        drom2[c] = dr;
      }
      const double nrm_h = nrm2[kHx] + nrm2[kHy];
      if (nrm2[kEz] == 0.0 || nrm_h == 0.0) {
        ++report.excluded_zero_norm;
        skip = true;
      }
      if (skip) continue;
      for (int c = 0; c < 3; ++c) {
        sample.pro[c] = std::sqrt(dpro2[c] / nrm2[c]);
        sample.rom[c] = std::sqrt(drom2[c] / nrm2[c]);
      }
      sample.pro[eH] = std::sqrt((dpro2[kHx] + dpro2[kHy]) / nrm_h);
      sample.rom[eH] = std::sqrt((drom2[kHx] + drom2[kHy]) / nrm_h);
      sample.pro[eE] = sample.pro[kEz];
      sample.rom[eE] = sample.rom[kEz];
      report.samples.push_back(std::move(sample));
    }
  }
  if (!report.samples.empty()) {
    for (const auto& s : report.samples)
      for (int f = 0; f < 5; ++f) {
        report.mean_pro[f] += s.pro[f];
        report.mean_rom[f] += s.rom[f];
      }
    for (int f = 0; f < 5; ++f) {
      report.mean_pro[f] /= static_cast<double>(report.samples.size());
      report.mean_rom[f] /= static_cast<double>(report.samples.size());
    }
  }
  return report;
}

void write_error_report(const ErrorReport& report, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::fprintf(f, "t,mu,e_pro_Hx,e_pro_Hy,e_pro_Ez,e_pro_H,e_pro_E,"
                  "e_rom_Hx,e_rom_Hy,e_rom_Ez,e_rom_H,e_rom_E\n");
  for (const auto& s : report.samples) {
    std::fprintf(f, "%.17g,", s.t);
    for (std::size_t d = 0; d < s.mu.size(); ++d)
      std::fprintf(f, "%s%.17g", d ? " " : "", s.mu[d]);
    for (int i = 0; i < 5; ++i) std::fprintf(f, ",%.17g", s.pro[i]);
    for (int i = 0; i < 5; ++i) std::fprintf(f, ",%.17g", s.rom[i]);
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

double speedup_ratio(double reference_seconds, double online_seconds) {
  if (online_seconds == 0.0) return std::numeric_limits<double>::infinity();
  return reference_seconds / online_seconds;
}

OnlineBenchmark benchmark_online(const RomModel& model,
                                 const std::vector<std::vector<double>>& mus,
                                 const std::vector<double>& times, std::size_t repeats) {
  OnlineBenchmark bench;
  std::vector<double> cae_samples, pod_samples;
  double sink = 0.0;  // keeps the evaluations alive
  for (std::size_t r = 0; r < repeats; ++r) {
    for (const auto& mu : mus) {
      for (double t : times) {
        double t0 = now_seconds();
        const OnlineResult a = online(model, t, mu);
        cae_samples.push_back(now_seconds() - t0);
        sink += a.fields[0][0];
        t0 = now_seconds();
        const OnlineResult b = online_pod_csi(model, t, mu);
        pod_samples.push_back(now_seconds() - t0);
        sink += b.fields[0][0];
        ++bench.queries;
      }
    }
  }
  if (!std::isfinite(sink)) bench.queries = 0;
  auto median = [](std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    return v.empty() ? 0.0 : v[v.size() / 2];
  };
  bench.cae_csi_seconds = median(cae_samples);
  bench.pod_csi_seconds = median(pod_samples);
  return bench;
}

std::string render_report(const ExperimentConfig& cfg, const StageTimings& timings,
                          const ErrorReport& errors, const OnlineBenchmark& bench) {
  std::ostringstream out;
  out.precision(4);
  out << "=== offline (seconds) ===\n";
  for (const auto& [stage, s] : timings.seconds) out << "  " << stage << ": " << s << "\n";
  out << "=== online per query (seconds) ===\n";
  out << "  CAE-CSI: " << bench.cae_csi_seconds << "\n";
  out << "  POD-CSI: " << bench.pod_csi_seconds << "\n";
  out << "  DGTD (one solve): " << timings.fom_run_average << "\n";
  out << "  speed-up vs DGTD: "
      << speedup_ratio(timings.fom_run_average, bench.cae_csi_seconds) << "\n";
  out << "  speed-up vs POD-CSI: "
      << speedup_ratio(bench.pod_csi_seconds, bench.cae_csi_seconds) << "\n";
  out << "=== average relative errors over the test set ===\n";
  const char* names[5] = {"Hx", "Hy", "Ez", "H", "E"};
  for (int f = 0; f < 5; ++f)
    out << "  " << names[f] << ": projection " << 100.0 * errors.mean_pro[f]
        << "%, CAE-CSI " << 100.0 * errors.mean_rom[f] << "%\n";
  if (errors.excluded_zero_norm > 0)
    out << "  (excluded zero-norm references: " << errors.excluded_zero_norm << ")\n";
  (void)cfg;
  return out.str();
}

FourierField fourier_field(const RomModel& model, std::span<const double> mu,
                           const std::vector<double>& times, double omega) {
  FourierField ff;
  const std::size_t n_h = model.basis.n_h();
  for (int c = 0; c < 3; ++c) {
    ff.re[c].assign(n_h, 0.0);
    ff.im[c].assign(n_h, 0.0);
  }
  for (double t : times) {
    const OnlineResult r = online(model, t, mu);
    const double cw = std::cos(omega * t);
    const double sw = std::sin(omega * t);
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < n_h; ++i) {
        ff.re[c][i] += r.fields[c][i] * cw;
        ff.im[c][i] -= r.fields[c][i] * sw;
      }
  }
  const double scale = 2.0 / static_cast<double>(times.size());
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < n_h; ++i) {
      ff.re[c][i] *= scale;
      ff.im[c][i] *= scale;
    }
  return ff;
}

}  // namespace maxrom
