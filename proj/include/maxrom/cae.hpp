// SPDX-License-Identifier: Apache-2.0

#ifndef MAXROM_CAE_HPP
#define MAXROM_CAE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "maxrom/nn.hpp"
#include "maxrom/pod.hpp"

namespace maxrom {

/// Layer stacks of encoder and decoder. side^2 equals the POD basis size;
/// channels is the number of stacked field components.
struct CaeArchitecture {
  std::size_t side = 0;
  std::size_t channels = 3;
  std::size_t code = 0;
  std::vector<LayerInfo> encoder, decoder;
};

/// The layer chain used in the reference experiments: four 5x5 convolutions
/// (8, 16, 32, 64 kernels, strides 1,2,2,2) down to 2x2x64, three dense
/// layers through 256 to the code, mirrored by the transposed-convolution
/// decoder. Requires side 14.
CaeArchitecture reference_architecture(std::size_t code);

/// Smaller analogue for side != 14: the same kinds and counts of layers
/// (4 convolutions, 3 dense) with 3x3 kernels and `width`-based channel
/// growth; the decoder inverts the chain shape-exactly.
CaeArchitecture desk_architecture(std::size_t side, std::size_t code, std::size_t width = 8);

CaeArchitecture select_architecture(std::size_t side, std::size_t code, std::size_t width);

/// Normalized coefficient tensors in shuffled order. Values lie in [0,1];
/// the affine constants come from the training split only.
struct CaeDataset {
  Tensor4 items;                    // (N_s, d, side, side)
  std::size_t train_count = 0;      // floor(lambda * N_s)
  std::vector<std::size_t> order;   // shuffled position -> grid column index
  double norm_min = 0.0, norm_max = 1.0;
  std::uint64_t seed = 0;

  std::size_t count() const { return items.dims[0]; }
  std::size_t side() const { return items.dims[2]; }
  std::size_t channels() const { return items.dims[1]; }
};

/// Channel plane layout: plane(h, w) = coefficient[h + w * side] of the
/// component's column (column-major square reshape).
Tensor4 coords_to_tensor(const IntrinsicCoordinates& coords, std::size_t column,
                         std::size_t side);

/// Shuffle columns by seed, split at floor(lambda N_s), normalize to [0,1]
/// with min/max taken over the training split only.
CaeDataset prepare_dataset(const IntrinsicCoordinates& coords, double lambda,
                           std::uint64_t seed);

struct TrainHyper {
  double eta0 = 1e-4;
  double alpha = 0.05;       // eta = eta0 / (1 + alpha * epoch)
  std::size_t batch = 50;
  std::size_t max_epochs = 5000;
  std::size_t patience = 500;  // epochs without validation improvement
};

struct TrainLogRow {
  std::size_t epoch;
  double train_loss, val_loss, eta;
};

struct CaeModel {
  CaeArchitecture arch;
  Network encoder, decoder;
  double norm_min = 0.0, norm_max = 1.0;
  std::vector<TrainLogRow> log;
  double best_val_loss = 0.0;
  double final_train_loss = 0.0;
  std::size_t best_epoch = 0;

  std::size_t code() const { return arch.code; }
  std::size_t side() const { return arch.side; }
};

/// Adam on the mean per-item squared reconstruction error, learning-rate
/// decay per epoch, early stopping on stalled validation loss; returns the
/// best-validation weights. Bit-reproducible for a fixed (dataset, seed).
CaeModel train(const CaeDataset& dataset, const CaeArchitecture& arch,
               const TrainHyper& hyper, std::uint64_t seed);

/// Code vector of one normalized (d, side, side) input.
std::vector<double> encode(const CaeModel& model, const Tensor4& input);

/// Decoded tensor plus the de-normalized coefficient columns per component
/// (inverse affine with the training constants).
struct Decoded {
  Tensor4 tensor;                          // (1, d, side, side), normalized scale
  std::vector<std::vector<double>> alpha;  // per component, length side^2
};
Decoded decode(const CaeModel& model, std::span<const double> code);

/// Codes of every grid column of the coefficient matrix, in grid order.
Matrix encode_grid(const CaeModel& model, const IntrinsicCoordinates& coords);

// ROMCAE01 container: per layer a u32 kind, u32 dim count, u32 dims and the
// f64 kernel/bias payload.
void write_cae(const CaeModel& model, const std::string& path);
CaeModel read_cae(const std::string& path);

void write_training_log(const CaeModel& model, const std::string& path);

}  // namespace maxrom

#endif
