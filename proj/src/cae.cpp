// SPDX-License-Identifier: Apache-2.0

#include "maxrom/cae.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "maxrom/binio.hpp"
#include "maxrom/errors.hpp"

namespace maxrom {

namespace {

LayerInfo conv(std::size_t in, std::size_t out, std::size_t k, std::size_t s,
               std::size_t p) {
  return {LayerKind::Conv, {in, out, k, s, p, 0}};
}
LayerInfo tconv(std::size_t in, std::size_t out, std::size_t k, std::size_t s,
                std::size_t p) {
  return {LayerKind::ConvTranspose, {in, out, k, s, p, 0}};
}
LayerInfo dense_info(std::size_t in, std::size_t out) {
  return {LayerKind::Dense, {in, out, 0, 0, 0, 0}};
}
LayerInfo elu_info() { return {LayerKind::Elu, {}}; }
LayerInfo flatten_info() { return {LayerKind::Flatten, {}}; }
LayerInfo reshape_info(std::size_t c, std::size_t h, std::size_t w) {
  return {LayerKind::Reshape, {c, h, w, 0, 0, 0}};
}

Network build(const std::vector<LayerInfo>& defs) {
  Network net;
  for (const auto& d : defs) net.layers.push_back(make_layer(d));
  return net;
}

std::size_t down2(std::size_t n) { return (n - 1) / 2 + 1; }  // k3 s2 p1 output size

}  // namespace

CaeArchitecture reference_architecture(std::size_t code) {
  CaeArchitecture a;
  a.side = 14;
  a.channels = 3;
  a.code = code;
  a.encoder = {conv(3, 8, 5, 1, 2),   elu_info(),  //
               conv(8, 16, 5, 2, 3),  elu_info(),  //
               conv(16, 32, 5, 2, 2), elu_info(),  //
               conv(32, 64, 5, 2, 2), elu_info(),  //
               flatten_info(),
               dense_info(256, 256),  elu_info(),  //
               dense_info(256, 256),  elu_info(),  //
               dense_info(256, code)};
  a.decoder = {dense_info(code, 256),  elu_info(),  //
               dense_info(256, 256),   elu_info(),  //
               dense_info(256, 256),   elu_info(),  //
               reshape_info(64, 2, 2),
               tconv(64, 64, 5, 1, 1), elu_info(),  //
               tconv(64, 32, 5, 1, 0), elu_info(),  //
               tconv(32, 16, 5, 3, 6), elu_info(),  //
               tconv(16, 3, 5, 1, 2)};  // last layer carries no activation
  return a;
}

CaeArchitecture desk_architecture(std::size_t side, std::size_t code, std::size_t width) {
  if (side < 2) throw std::invalid_argument("desk_architecture: side must be >= 2");
  const std::size_t w = std::max<std::size_t>(width, 2);
  const std::size_t s1 = down2(side);
  const std::size_t s2 = down2(s1);
  const std::size_t feat = 8 * w * s2 * s2;

  // transposed conv undoing a k3 s2 p1 downsample a -> b: need k - 2p = a - 2(b-1)
  auto up2 = [](std::size_t from, std::size_t to, std::size_t in_ch, std::size_t out_ch) {
    const std::size_t r = to - 2 * (from - 1);
    return tconv(in_ch, out_ch, r + 2, 2, 1);
  };

  CaeArchitecture a;
  a.side = side;
  a.channels = 3;
  a.code = code;
  a.encoder = {conv(3, w, 3, 1, 1),          elu_info(),
               conv(w, 2 * w, 3, 2, 1),      elu_info(),
               conv(2 * w, 4 * w, 3, 1, 1),  elu_info(),
               conv(4 * w, 8 * w, 3, 2, 1),  elu_info(),
               flatten_info(),
               dense_info(feat, feat),       elu_info(),
               dense_info(feat, feat),       elu_info(),
               dense_info(feat, code)};
  a.decoder = {dense_info(code, feat),       elu_info(),
               dense_info(feat, feat),       elu_info(),
               dense_info(feat, feat),       elu_info(),
               reshape_info(8 * w, s2, s2),
               up2(s2, s1, 8 * w, 4 * w),    elu_info(),
               tconv(4 * w, 2 * w, 3, 1, 1), elu_info(),
               up2(s1, side, 2 * w, w),      elu_info(),
               tconv(w, 3, 3, 1, 1)};
  return a;
}

CaeArchitecture select_architecture(std::size_t side, std::size_t code,
                                    std::size_t width) {
  return (side == 14) ? reference_architecture(code)
                      : desk_architecture(side, code, width);
}

Tensor4 coords_to_tensor(const IntrinsicCoordinates& coords, std::size_t column,
                         std::size_t side) {
  Tensor4 t(1, 3, side, side);
  for (int c = 0; c < 3; ++c) {
    const auto col = coords.c[c].col(column);
    for (std::size_t w = 0; w < side; ++w)
      for (std::size_t h = 0; h < side; ++h) t.at(0, c, h, w) = col[h + w * side];
  }
  return t;
}

CaeDataset prepare_dataset(const IntrinsicCoordinates& coords, double lambda,
                           std::uint64_t seed) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::invalid_argument("prepare_dataset: lambda must lie in (0,1)");
  const std::size_t nbasis = coords.c[0].rows();
  const std::size_t n_s = coords.c[0].cols();
  if (n_s == 0) throw std::invalid_argument("prepare_dataset: no samples");
  if (!is_perfect_square(nbasis))
    throw std::invalid_argument("prepare_dataset: basis size is not a perfect square");
  const auto side =
      static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(nbasis))));

  CaeDataset ds;
  ds.seed = seed;
  ds.order.resize(n_s);
  std::iota(ds.order.begin(), ds.order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(ds.order);

  ds.train_count = static_cast<std::size_t>(lambda * static_cast<double>(n_s));
  if (ds.train_count == 0 || ds.train_count >= n_s)
    throw std::invalid_argument("prepare_dataset: split leaves an empty train or val set");

  ds.items = Tensor4(n_s, 3, side, side);
  for (std::size_t i = 0; i < n_s; ++i) {
    const Tensor4 t = coords_to_tensor(coords, ds.order[i], side);
    std::copy(t.data.begin(), t.data.end(),
              ds.items.data.begin() + static_cast<std::ptrdiff_t>(i * t.data.size()));
  }

  const std::size_t item = 3 * side * side;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < ds.train_count * item; ++i) {
    lo = std::min(lo, ds.items.data[i]);
    hi = std::max(hi, ds.items.data[i]);
  }
  if (!(hi > lo))
    throw DegenerateNormalizationError(
        "prepare_dataset: constant training data, min == max");
  ds.norm_min = lo;
  ds.norm_max = hi;
  const double inv = 1.0 / (hi - lo);
  for (double& v : ds.items.data) v = (v - lo) * inv;
  return ds;
}

namespace {

Tensor4 slice_items(const Tensor4& items, std::size_t first, std::size_t count) {
  const std::size_t item = items.dims[1] * items.dims[2] * items.dims[3];
  Tensor4 out(count, items.dims[1], items.dims[2], items.dims[3]);
  std::copy(items.data.begin() + static_cast<std::ptrdiff_t>(first * item),
            items.data.begin() + static_cast<std::ptrdiff_t>((first + count) * item),
            out.data.begin());
  return out;
}

// mean over items of the summed squared reconstruction error
double dataset_loss(const Network& enc, const Network& dec, const Tensor4& items,
                    std::size_t first, std::size_t count) {
  if (count == 0) return 0.0;
  const Tensor4 x = slice_items(items, first, count);
  const Tensor4 xhat = dec.apply(enc.apply(x));
  double s = 0.0;
  for (std::size_t i = 0; i < x.data.size(); ++i) {
    const double d = xhat.data[i] - x.data[i];
    s += d * d;
  }
  return s / static_cast<double>(count);
}

std::vector<std::span<double>> joined(std::vector<std::span<double>> a,
                                      std::vector<std::span<double>> b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

CaeModel train(const CaeDataset& dataset, const CaeArchitecture& arch,
               const TrainHyper& hyper, std::uint64_t seed) {
  if (dataset.count() == 0) throw std::invalid_argument("train: empty dataset");
  if (dataset.side() != arch.side || dataset.channels() != arch.channels)
    throw std::invalid_argument("train: dataset shape does not match architecture");
  if (hyper.batch == 0 || hyper.batch > dataset.train_count)
    throw std::invalid_argument("train: batch size must be in [1, train_count]");
  if (hyper.max_epochs == 0) throw std::invalid_argument("train: max_epochs must be >= 1");

  CaeModel model;
  model.arch = arch;
  model.norm_min = dataset.norm_min;
  model.norm_max = dataset.norm_max;
  model.encoder = build(arch.encoder);
  model.decoder = build(arch.decoder);
  Rng rng(seed);
  initialize_network(model.encoder, rng);
  initialize_network(model.decoder, rng);

  AdamState adam;
  const std::size_t n_train = dataset.train_count;
  const std::size_t n_val = dataset.count() - n_train;
  const std::size_t n_batches = (n_train + hyper.batch - 1) / hyper.batch;

  double best_val = std::numeric_limits<double>::infinity();
  std::size_t best_epoch = 0;
  std::vector<double> best_enc, best_dec;

  for (std::size_t epoch = 0; epoch < hyper.max_epochs; ++epoch) {
    const double eta = hyper.eta0 / (1.0 + hyper.alpha * static_cast<double>(epoch));
    double epoch_sum = 0.0;
    for (std::size_t b = 0; b < n_batches; ++b) {
      const std::size_t first = b * hyper.batch;
      const std::size_t count = std::min(hyper.batch, n_train - first);
      const Tensor4 x = slice_items(dataset.items, first, count);

      model.encoder.zero_grad();
      model.decoder.zero_grad();
      const Tensor4 z = model.encoder.forward(x);
      const Tensor4 xhat = model.decoder.forward(z);

      double batch_sum = 0.0;
      Tensor4 gy(xhat.dims[0], xhat.dims[1], xhat.dims[2], xhat.dims[3]);
      const double gscale = 2.0 / static_cast<double>(count);
      for (std::size_t i = 0; i < xhat.data.size(); ++i) {
        const double d = xhat.data[i] - x.data[i];
        batch_sum += d * d;
        gy.data[i] = gscale * d;
      }
      if (!std::isfinite(batch_sum))
        throw DivergedError("training loss is not finite", static_cast<long>(epoch));
      epoch_sum += batch_sum;

      const Tensor4 gz = model.decoder.backward(gy);
      model.encoder.backward(gz);
      adam_step(joined(model.encoder.params(), model.decoder.params()),
                joined(model.encoder.grads(), model.decoder.grads()), adam, eta);
    }

    const double train_loss = epoch_sum / static_cast<double>(n_train);
    const double val_loss =
        dataset_loss(model.encoder, model.decoder, dataset.items, n_train, n_val);
    if (!std::isfinite(val_loss))
      throw DivergedError("validation loss is not finite", static_cast<long>(epoch));
    model.log.push_back({epoch, train_loss, val_loss, eta});

    if (val_loss < best_val) {
      best_val = val_loss;
      best_epoch = epoch;
      best_enc = model.encoder.snapshot();
      best_dec = model.decoder.snapshot();
    } else if (epoch - best_epoch >= hyper.patience) {
      break;
    }
  }

  model.encoder.restore(best_enc);
  model.decoder.restore(best_dec);
  model.best_val_loss = best_val;
  model.best_epoch = best_epoch;
  model.final_train_loss =
      dataset_loss(model.encoder, model.decoder, dataset.items, 0, n_train);
  return model;
}

std::vector<double> encode(const CaeModel& model, const Tensor4& input) {
  if (input.dims[0] != 1 || input.dims[1] != model.arch.channels ||
      input.dims[2] != model.side() || input.dims[3] != model.side())
    throw std::invalid_argument("encode: input tensor shape mismatch");
  const Tensor4 z = model.encoder.apply(input);
  return {z.data.begin(), z.data.end()};
}

Decoded decode(const CaeModel& model, std::span<const double> code) {
  if (code.size() != model.code())
    throw std::invalid_argument("decode: code length mismatch");
  Tensor4 z(1, model.code(), 1, 1);
  std::copy(code.begin(), code.end(), z.data.begin());
  Decoded out;
  out.tensor = model.decoder.apply(z);
  const std::size_t side = model.side();
  const double span = model.norm_max - model.norm_min;
  out.alpha.assign(model.arch.channels, std::vector<double>(side * side));
  for (std::size_t c = 0; c < model.arch.channels; ++c)
    for (std::size_t w = 0; w < side; ++w)
      for (std::size_t h = 0; h < side; ++h)
        out.alpha[c][h + w * side] = out.tensor.at(0, c, h, w) * span + model.norm_min;
  return out;
}

Matrix encode_grid(const CaeModel& model, const IntrinsicCoordinates& coords) {
  const std::size_t n_s = coords.c[0].cols();
  Matrix codes(model.code(), n_s);
  const double inv = 1.0 / (model.norm_max - model.norm_min);
  for (std::size_t s = 0; s < n_s; ++s) {
    Tensor4 t = coords_to_tensor(coords, s, model.side());
    for (double& v : t.data) v = (v - model.norm_min) * inv;
    const std::vector<double> code = encode(model, t);
    std::copy(code.begin(), code.end(), codes.col(s).begin());
  }
  return codes;
}

void write_cae(const CaeModel& model, const std::string& path) {
  CaeModel& m = const_cast<CaeModel&>(model);  // params() spans are non-const views
  BinWriter w(path);
  w.tag("ROMCAE01");
  w.u32(1);
  w.u32(static_cast<std::uint32_t>(model.arch.side));
  w.u32(static_cast<std::uint32_t>(model.arch.channels));
  w.u32(static_cast<std::uint32_t>(model.arch.code));
  w.f64(model.norm_min);
  w.f64(model.norm_max);
  w.u32(static_cast<std::uint32_t>(model.encoder.layers.size()));
  w.u32(static_cast<std::uint32_t>(model.decoder.layers.size()));
  for (Network* net : {&m.encoder, &m.decoder}) {
    for (const auto& layer : net->layers) {
      const LayerInfo info = layer->info();
      w.u32(static_cast<std::uint32_t>(info.kind));
      w.u32(6);
      for (std::size_t d : info.dims) w.u32(static_cast<std::uint32_t>(d));
      for (auto p : layer->params()) w.f64_block({p.data(), p.size()});
    }
  }
  w.close();
}

CaeModel read_cae(const std::string& path) {
  BinReader r(path);
  r.expect_tag("ROMCAE01", "CAE container");
  if (r.u32() != 1) throw FormatError("unsupported CAE container version", r.offset() - 4);
  CaeModel model;
  model.arch.side = r.u32();
  model.arch.channels = r.u32();
  model.arch.code = r.u32();
  model.norm_min = r.f64();
  model.norm_max = r.f64();
  const std::uint32_t n_enc = r.u32();
  const std::uint32_t n_dec = r.u32();
  auto read_net = [&](std::size_t count, Network& net, std::vector<LayerInfo>& defs) {
    for (std::size_t i = 0; i < count; ++i) {
      LayerInfo info;
      info.kind = static_cast<LayerKind>(r.u32());
      const std::uint32_t nd = r.u32();
      if (nd != 6) throw FormatError("expected 6 layer dims", r.offset() - 4);
      for (auto& d : info.dims) d = r.u32();
      defs.push_back(info);
      auto layer = make_layer(info);
      for (auto p : layer->params()) r.f64_block({p.data(), p.size()});
      net.layers.push_back(std::move(layer));
    }
  };
  read_net(n_enc, model.encoder, model.arch.encoder);
  read_net(n_dec, model.decoder, model.arch.decoder);
  return model;
}

void write_training_log(const CaeModel& model, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::fprintf(f, "epoch,train_loss,val_loss,eta\n");
  for (const auto& row : model.log)
    std::fprintf(f, "%zu,%.17g,%.17g,%.17g\n", row.epoch, row.train_loss, row.val_loss,
                 row.eta);
  std::fclose(f);
}

}  // namespace maxrom
