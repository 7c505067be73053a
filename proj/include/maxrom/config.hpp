// SPDX-License-Identifier: Apache-2.0

#ifndef MAXROM_CONFIG_HPP
#define MAXROM_CONFIG_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "maxrom/mesh.hpp"
#include "maxrom/snapshots.hpp"

namespace maxrom {

/// Everything one experiment needs, parsed from the nested key-value config
/// text (dotted keys, '#' comments, unknown keys rejected).
struct ExperimentConfig {
  // mesh
  double half_width = 0.0;
  int resolution = 0;
  int order = 1;
  std::vector<Inclusion> inclusions;

  // materials; epsilon may be bound to a parameter dimension
  struct MaterialSpec {
    double eps = 1.0;
    int eps_param = -1;  // >= 0: take epsilon from that parameter component
    double nu = 1.0;
  };
  std::map<int, MaterialSpec> materials;

  // drive and time stepping
  double omega = 0.0;
  double amplitude = 1.0;
  double dt = 0.0;
  bool dt_auto = true;
  double periods = 0.0;

  // samplings
  std::vector<ParamRange> param_ranges;
  std::size_t nt = 0;

  // reduction
  std::size_t pod_k = 0;
  std::size_t pod_nbasis = 0;

  // autoencoder
  std::size_t cae_n = 0;
  std::uint64_t cae_seed = 0;
  double cae_lambda = 0.8;
  double cae_eta0 = 1e-4;
  double cae_alpha = 0.05;
  std::size_t cae_batch = 50;
  std::size_t cae_max_epochs = 5000;
  std::size_t cae_patience = 500;
  std::size_t cae_width = 8;

  double csi_delta = 1e-4;

  // held-out evaluation
  std::vector<std::vector<double>> test_parameters;
  std::vector<double> test_times;  // empty: reuse the training time sampling
  bool test_times_train = true;

  std::string workdir;
  int threads = 0;  // 0: hardware concurrency

  double period() const;
  double t_final() const { return periods * period(); }
  /// dt that divides the period exactly, honouring nt and the CFL bound.
  double resolve_dt(double cfl_dt) const;
  MaterialMap materials_for(std::span<const double> mu) const;
  std::string hash() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace maxrom

#endif
