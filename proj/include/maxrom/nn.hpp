// SPDX-License-Identifier: Apache-2.0

#ifndef MAXROM_NN_HPP
#define MAXROM_NN_HPP

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "maxrom/tensor.hpp"

namespace maxrom {

/// Convolution parameter bundle. conv2d maps in_channels -> out_channels;
/// conv2d_transpose with the same spec is its exact adjoint and maps
/// out_channels -> in_channels.
struct ConvSpec {
  std::size_t out_channels = 0, in_channels = 0;
  std::size_t kh = 0, kw = 0;
  std::size_t stride = 1;
  std::size_t pad = 0;
  bool transposed = false;
  std::vector<double> kernel;  // (out, in, kh, kw) row-major
  std::vector<double> bias;    // out_channels (conv) or in_channels (transposed)
};

/// out spatial dim = floor((in + 2 pad - k) / stride) + 1
Tensor4 conv2d(const Tensor4& x, const ConvSpec& s);
/// out spatial dim = (in - 1) stride - 2 pad + k
Tensor4 conv2d_transpose(const Tensor4& x, const ConvSpec& s);

std::vector<double> dense(std::span<const double> x, const std::vector<double>& w,
                          std::span<const double> b, std::size_t out, std::size_t in);

double elu(double x);
double elu_derivative(double x);

enum class LayerKind : std::uint32_t {
  Conv = 0,
  ConvTranspose = 1,
  Dense = 2,
  Elu = 3,
  Flatten = 4,
  Reshape = 5,
};

/// Serialized identity of a layer: kind plus its integer dimensions.
/// conv / conv-transpose: (layer in, layer out, k, stride, pad, 0);
/// dense: (in, out, 0...); reshape: (c, h, w, 0...).
struct LayerInfo {
  LayerKind kind = LayerKind::Elu;
  std::array<std::size_t, 6> dims{0, 0, 0, 0, 0, 0};
};

/// One node of the fixed-topology autodiff graph. `apply` is the pure
/// inference path (thread-safe on immutable layers); `forward` caches what
/// `backward` needs. backward() before forward() is a logic error.
class Layer {
 public:
  virtual ~Layer() = default;
  virtual LayerKind kind() const = 0;
  virtual LayerInfo info() const = 0;
  virtual Tensor4 apply(const Tensor4& x) const = 0;
  virtual Tensor4 forward(const Tensor4& x) = 0;
  virtual Tensor4 backward(const Tensor4& gy) = 0;
  virtual std::vector<std::span<double>> params() { return {}; }
  virtual std::vector<std::span<double>> grads() { return {}; }
  virtual void init_params(Rng&) {}
  virtual std::array<std::size_t, 3> out_shape(std::array<std::size_t, 3> in) const = 0;
  void zero_grad();

 protected:
  bool has_forward_ = false;
};

std::unique_ptr<Layer> make_layer(const LayerInfo& info);

std::unique_ptr<Layer> make_conv(std::size_t in_ch, std::size_t out_ch, std::size_t k,
                                 std::size_t stride, std::size_t pad);
std::unique_ptr<Layer> make_conv_transpose(std::size_t in_ch, std::size_t out_ch,
                                           std::size_t k, std::size_t stride,
                                           std::size_t pad);
std::unique_ptr<Layer> make_dense(std::size_t in, std::size_t out);
std::unique_ptr<Layer> make_elu();
std::unique_ptr<Layer> make_flatten();
std::unique_ptr<Layer> make_reshape(std::size_t c, std::size_t h, std::size_t w);

struct Network {
  std::vector<std::unique_ptr<Layer>> layers;

  Tensor4 apply(Tensor4 x) const;
  Tensor4 forward(Tensor4 x);
  Tensor4 backward(Tensor4 gy);
  void zero_grad();
  std::vector<std::span<double>> params();
  std::vector<std::span<double>> grads();
  std::size_t param_count();
  std::vector<double> snapshot() ;
  void restore(std::span<const double> values);
};

/// Uniform Xavier/Glorot fill on +-sqrt(6 / (fan_in + fan_out)).
void xavier_init(std::span<double> w, std::size_t fan_in, std::size_t fan_out, Rng& rng);

/// Seeded initialization of every layer, in layer order: kernels/weights get
/// Xavier draws in memory order, biases start at zero.
void initialize_network(Network& net, Rng& rng);

struct AdamState {
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  std::vector<double> m, v;
  long step = 0;
};

/// Standard Adam update with bias correction; throws DivergedError on
/// non-finite gradients.
void adam_step(std::vector<std::span<double>> params, std::vector<std::span<double>> grads,
               AdamState& state, double eta);

}  // namespace maxrom

#endif
