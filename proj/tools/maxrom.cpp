// SPDX-License-Identifier: Apache-2.0
//
// maxrom: offline training and online evaluation of the POD + autoencoder +
// spline surrogate for 2-D TM Maxwell scattering.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "maxrom/dgtd.hpp"
#include "maxrom/errors.hpp"
#include "maxrom/rom.hpp"

namespace {

using namespace maxrom;

std::vector<double> parse_mu(const std::string& text) {
  std::vector<double> mu;
  std::size_t at = 0;
  while (at < text.size()) {
    std::size_t used = 0;
    mu.push_back(std::stod(text.substr(at), &used));
    at += used;
    if (at < text.size() && text[at] == ',') ++at;
  }
  return mu;
}

void export_fields(const ExperimentConfig& cfg, const OnlineResult& result,
                   const std::string& prefix) {
  const Mesh mesh = generate_mesh(cfg.half_width, cfg.resolution, cfg.inclusions);
  std::vector<double> lo(cfg.param_ranges.size());
  for (std::size_t d = 0; d < lo.size(); ++d) lo[d] = cfg.param_ranges[d].lo;
  const DgOperators ops = assemble_operators(mesh, cfg.materials_for(lo), cfg.order);

  {  // x-wise slice along y = 0
    const std::string path = prefix + "_slice.csv";
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::fprintf(f, "x,hx,hy,ez\n");
    const int n = 400;
    for (int i = 0; i <= n; ++i) {
      const double x = -cfg.half_width + 2.0 * cfg.half_width * i / n;
      const double y = 1e-9;  // just off the grid line shared by elements
      std::fprintf(f, "%.17g,%.17g,%.17g,%.17g\n", x,
                   eval_field(mesh, ops, result.fields[kHx], x, y),
                   eval_field(mesh, ops, result.fields[kHy], x, y),
                   eval_field(mesh, ops, result.fields[kEz], x, y));
    }
    std::fclose(f);
    std::printf("wrote %s\n", path.c_str());
  }
  {  // 2-D distribution on cell centres
    const std::string path = prefix + "_grid.csv";
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path);
    std::fprintf(f, "x,y,hx,hy,ez\n");
    const int n = cfg.resolution;
    const double h = 2.0 * cfg.half_width / n;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const double x = -cfg.half_width + (i + 0.5) * h;
        const double y = -cfg.half_width + (j + 0.5) * h;
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g\n", x, y,
                     eval_field(mesh, ops, result.fields[kHx], x, y),
                     eval_field(mesh, ops, result.fields[kHy], x, y),
                     eval_field(mesh, ops, result.fields[kEz], x, y));
      }
    }
    std::fclose(f);
    std::printf("wrote %s\n", path.c_str());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"non-intrusive reduced-order modeling for 2-D TM Maxwell scattering"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config,-c", config_path, "experiment configuration file")
      ->required();

  auto* cmd_fom = app.add_subcommand("fom-run", "run the DGTD sweep over the sampling");
  auto* cmd_snap = app.add_subcommand("snapshots", "assemble the snapshot matrices");
  auto* cmd_pod = app.add_subcommand("pod", "two-step POD basis");
  std::size_t opt_k = 0, opt_nbasis = 0;
  cmd_pod->add_option("--k", opt_k, "first-step truncation override");
  cmd_pod->add_option("--nbasis", opt_nbasis, "basis size override");
  auto* cmd_cae = app.add_subcommand("train-cae", "train the convolutional autoencoder");
  std::size_t opt_n = 0;
  std::uint64_t opt_seed = 0;
  bool seed_set = false;
  cmd_cae->add_option("--n", opt_n, "code dimension override");
  cmd_cae->add_option("--seed", opt_seed, "training seed override")
      ->each([&](const std::string&) { seed_set = true; });
  auto* cmd_csi = app.add_subcommand("fit-csi", "SVD modes + spline interpolants");
  double opt_delta = 0.0;
  cmd_csi->add_option("--delta", opt_delta, "truncation tolerance override");
  auto* cmd_off = app.add_subcommand("offline", "all offline stages in order");
  bool resume = false;
  cmd_off->add_flag("--resume", resume, "reuse artifacts whose stamps match");

  auto* cmd_online = app.add_subcommand("online-eval", "evaluate the surrogate at (t, mu)");
  double query_t = 0.0;
  std::string query_mu, out_prefix;
  bool fourier = false;
  cmd_online->add_option("--t", query_t, "query time")->required();
  cmd_online->add_option("--mu", query_mu, "query parameters, comma separated")->required();
  cmd_online->add_option("--out", out_prefix, "CSV prefix for field exports");
  cmd_online->add_flag("--fourier", fourier,
                       "export the drive-frequency Fourier coefficient instead");

  auto* cmd_base = app.add_subcommand("baseline-eval", "POD-CSI baseline at (t, mu)");
  cmd_base->add_option("--t", query_t, "query time")->required();
  cmd_base->add_option("--mu", query_mu, "query parameters, comma separated")->required();
  cmd_base->add_option("--out", out_prefix, "CSV prefix for field exports");

  auto* cmd_report = app.add_subcommand("report", "test-set errors, timings, speed-ups");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg = load_config(config_path);
    StageTimings timings = read_timings(rom_paths(cfg).timings);

    if (cmd_fom->parsed()) {
      stage_fom_run(cfg, timings);
    } else if (cmd_snap->parsed()) {
      stage_snapshots(cfg, timings);
    } else if (cmd_pod->parsed()) {
      if (opt_k) cfg.pod_k = opt_k;
      if (opt_nbasis) cfg.pod_nbasis = opt_nbasis;
      stage_pod(cfg, timings);
    } else if (cmd_cae->parsed()) {
      if (opt_n) cfg.cae_n = opt_n;
      if (seed_set) cfg.cae_seed = opt_seed;
      stage_train_cae(cfg, timings);
    } else if (cmd_csi->parsed()) {
      if (opt_delta > 0.0) cfg.csi_delta = opt_delta;
      stage_fit_csi(cfg, timings);
    } else if (cmd_off->parsed()) {
      offline(cfg, resume);
      std::printf("offline complete; artifacts in %s\n", cfg.workdir.c_str());
      return 0;
    } else if (cmd_online->parsed() || cmd_base->parsed()) {
      const RomModel model = load_model(cfg);
      const std::vector<double> mu = parse_mu(query_mu);
      const bool baseline = cmd_base->parsed();

      if (fourier && !baseline) {
        const FourierField ff = fourier_field(model, mu, model.csi.times, cfg.omega);
        OnlineResult re;
        re.fields = ff.re;
        if (out_prefix.empty()) out_prefix = cfg.workdir + "/fourier";
        export_fields(cfg, re, out_prefix);
        return 0;
      }

      const auto t0 = std::chrono::steady_clock::now();
      const OnlineResult result = baseline ? online_pod_csi(model, query_t, mu)
                                           : online(model, query_t, mu);
      const double secs =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::printf("%s query answered in %.3g ms%s\n", baseline ? "POD-CSI" : "CAE-CSI",
                  1e3 * secs, result.extrapolated ? " (extrapolated)" : "");
      for (int c = 0; c < 3; ++c) {
        double nrm = 0.0;
        for (double v : result.fields[c]) nrm += v * v;
        std::printf("  |%s| = %.17g\n", kComponentNames[c], std::sqrt(nrm));
      }
      if (!out_prefix.empty()) export_fields(cfg, result, out_prefix);
    } else if (cmd_report->parsed()) {
      const RomModel model = load_model(cfg);
      const SnapshotSet refs = compute_test_references(cfg);
      const ErrorReport errors = evaluate_errors(model, refs);
      write_error_report(errors, cfg.workdir + "/errors.csv");

      std::vector<double> bench_times;
      for (std::size_t i = 0; i < model.csi.times.size(); i += 8)
        bench_times.push_back(model.csi.times[i]);
      const OnlineBenchmark bench = benchmark_online(model, cfg.test_parameters,
                                                     bench_times);
      timings = read_timings(rom_paths(cfg).timings);
      std::cout << render_report(cfg, timings, errors, bench);

      std::FILE* f = std::fopen((cfg.workdir + "/report.csv").c_str(), "w");
      if (f) {
        std::fprintf(f, "metric,value\n");
        for (const auto& [stage, s] : timings.seconds)
          std::fprintf(f, "offline_%s_s,%.17g\n", stage.c_str(), s);
        std::fprintf(f, "online_cae_csi_s,%.17g\n", bench.cae_csi_seconds);
        std::fprintf(f, "online_pod_csi_s,%.17g\n", bench.pod_csi_seconds);
        std::fprintf(f, "dgtd_solve_s,%.17g\n", timings.fom_run_average);
        std::fprintf(f, "speedup_vs_dgtd,%.17g\n",
                     speedup_ratio(timings.fom_run_average, bench.cae_csi_seconds));
        std::fprintf(f, "speedup_vs_pod_csi,%.17g\n",
                     speedup_ratio(bench.pod_csi_seconds, bench.cae_csi_seconds));
        const char* names[5] = {"Hx", "Hy", "Ez", "H", "E"};
        for (int i = 0; i < 5; ++i) {
          std::fprintf(f, "mean_e_pro_%s,%.17g\n", names[i], errors.mean_pro[i]);
          std::fprintf(f, "mean_e_cae_csi_%s,%.17g\n", names[i], errors.mean_rom[i]);
        }
        std::fclose(f);
      }
    }
    write_timings(timings, rom_paths(cfg).timings);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
