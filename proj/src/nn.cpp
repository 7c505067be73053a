// SPDX-License-Identifier: Apache-2.0

#include "maxrom/nn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "maxrom/errors.hpp"

namespace maxrom {

namespace {

inline std::size_t conv_out_dim(std::size_t in, std::size_t k, std::size_t stride,
                                std::size_t pad) {
  const std::ptrdiff_t num =
      static_cast<std::ptrdiff_t>(in) + 2 * static_cast<std::ptrdiff_t>(pad) -
      static_cast<std::ptrdiff_t>(k);
  if (num < 0) throw std::invalid_argument("conv2d: kernel larger than padded input");
  return static_cast<std::size_t>(num) / stride + 1;
}

inline std::size_t tconv_out_dim(std::size_t in, std::size_t k, std::size_t stride,
                                 std::size_t pad) {
  const std::ptrdiff_t v = static_cast<std::ptrdiff_t>((in - 1) * stride + k) -
                           2 * static_cast<std::ptrdiff_t>(pad);
  if (v <= 0) throw std::invalid_argument("conv2d_transpose: non-positive output size");
  return static_cast<std::size_t>(v);
}

// valid output range for  0 <= o*stride - pad + m < limit
inline void valid_range(std::size_t out_dim, std::size_t limit, std::size_t stride,
                        std::ptrdiff_t off, std::size_t& lo, std::size_t& hi) {
  // off = m - pad
  std::ptrdiff_t l = 0;
  if (off < 0) l = (-off + static_cast<std::ptrdiff_t>(stride) - 1) /
                   static_cast<std::ptrdiff_t>(stride);
  std::ptrdiff_t h = (static_cast<std::ptrdiff_t>(limit) - 1 - off) /
                     static_cast<std::ptrdiff_t>(stride);
  h = std::min<std::ptrdiff_t>(h, static_cast<std::ptrdiff_t>(out_dim) - 1);
  if (h < l) {
    lo = 1;
    hi = 0;  // empty
  } else {
    lo = static_cast<std::size_t>(l);
    hi = static_cast<std::size_t>(h);
  }
}

void check_conv_spec(const ConvSpec& s) {
  if (s.stride < 1 || s.kh == 0 || s.kw == 0 || s.out_channels == 0 || s.in_channels == 0)
    throw std::invalid_argument("conv spec: positive kernel dims and stride required");
  if (s.kernel.size() != s.out_channels * s.in_channels * s.kh * s.kw)
    throw std::invalid_argument("conv spec: kernel buffer does not match dims");
}

}  // namespace

Tensor4 conv2d(const Tensor4& x, const ConvSpec& s) {
  check_conv_spec(s);
  if (x.dims[1] != s.in_channels)
    throw std::invalid_argument("conv2d: input channel mismatch");
  const std::size_t b_n = x.dims[0], hin = x.dims[2], win = x.dims[3];
  const std::size_t hout = conv_out_dim(hin, s.kh, s.stride, s.pad);
  const std::size_t wout = conv_out_dim(win, s.kw, s.stride, s.pad);
  Tensor4 y(b_n, s.out_channels, hout, wout);
  if (!s.bias.empty()) {
    if (s.bias.size() != s.out_channels)
      throw std::invalid_argument("conv2d: bias size mismatch");
    for (std::size_t b = 0; b < b_n; ++b)
      for (std::size_t co = 0; co < s.out_channels; ++co)
        std::fill_n(&y.at(b, co, 0, 0), hout * wout, s.bias[co]);
  }
  for (std::size_t b = 0; b < b_n; ++b) {
    for (std::size_t co = 0; co < s.out_channels; ++co) {
      for (std::size_t ci = 0; ci < s.in_channels; ++ci) {
        const double* kbase = s.kernel.data() + ((co * s.in_channels + ci) * s.kh) * s.kw;
        for (std::size_t m = 0; m < s.kh; ++m) {
          std::size_t ohlo, ohhi;
          valid_range(hout, hin, s.stride,
                      static_cast<std::ptrdiff_t>(m) - static_cast<std::ptrdiff_t>(s.pad),
                      ohlo, ohhi);
          for (std::size_t n = 0; n < s.kw; ++n) {
            const double kv = kbase[m * s.kw + n];
            if (kv == 0.0) continue;
            std::size_t owlo, owhi;
            valid_range(wout, win, s.stride,
                        static_cast<std::ptrdiff_t>(n) - static_cast<std::ptrdiff_t>(s.pad),
                        owlo, owhi);
            if (ohhi < ohlo || owhi < owlo) continue;
            for (std::size_t oh = ohlo; oh <= ohhi; ++oh) {
              const std::size_t ih = oh * s.stride - s.pad + m;
              const double* xrow = &x.data[x.index(b, ci, ih, 0)];
              double* yrow = &y.data[y.index(b, co, oh, 0)];
              for (std::size_t ow = owlo; ow <= owhi; ++ow)
                yrow[ow] += kv * xrow[ow * s.stride - s.pad + n];
            }
          }
        }
      }
    }
  }
  return y;
}

Tensor4 conv2d_transpose(const Tensor4& x, const ConvSpec& s) {
  check_conv_spec(s);
  if (x.dims[1] != s.out_channels)
    throw std::invalid_argument("conv2d_transpose: input channel mismatch");
  const std::size_t b_n = x.dims[0], hc = x.dims[2], wc = x.dims[3];
  const std::size_t hr = tconv_out_dim(hc, s.kh, s.stride, s.pad);
  const std::size_t wr = tconv_out_dim(wc, s.kw, s.stride, s.pad);
  Tensor4 r(b_n, s.in_channels, hr, wr);
  if (!s.bias.empty()) {
    if (s.bias.size() != s.in_channels)
      throw std::invalid_argument("conv2d_transpose: bias size mismatch");
    for (std::size_t b = 0; b < b_n; ++b)
      for (std::size_t ci = 0; ci < s.in_channels; ++ci)
        std::fill_n(&r.at(b, ci, 0, 0), hr * wr, s.bias[ci]);
  }
  for (std::size_t b = 0; b < b_n; ++b) {
    for (std::size_t co = 0; co < s.out_channels; ++co) {
      for (std::size_t ci = 0; ci < s.in_channels; ++ci) {
        const double* kbase = s.kernel.data() + ((co * s.in_channels + ci) * s.kh) * s.kw;
        for (std::size_t m = 0; m < s.kh; ++m) {
          std::size_t ohlo, ohhi;
          valid_range(hc, hr, s.stride,
                      static_cast<std::ptrdiff_t>(m) - static_cast<std::ptrdiff_t>(s.pad),
                      ohlo, ohhi);
          for (std::size_t n = 0; n < s.kw; ++n) {
            const double kv = kbase[m * s.kw + n];
            if (kv == 0.0) continue;
            std::size_t owlo, owhi;
            valid_range(wc, wr, s.stride,
                        static_cast<std::ptrdiff_t>(n) - static_cast<std::ptrdiff_t>(s.pad),
                        owlo, owhi);
            if (ohhi < ohlo || owhi < owlo) continue;
            for (std::size_t oh = ohlo; oh <= ohhi; ++oh) {
              const std::size_t ih = oh * s.stride - s.pad + m;
              const double* xrow = &x.data[x.index(b, co, oh, 0)];
              double* rrow = &r.data[r.index(b, ci, ih, 0)];
              for (std::size_t ow = owlo; ow <= owhi; ++ow)
                rrow[ow * s.stride - s.pad + n] += kv * xrow[ow];
            }
          }
        }
      }
    }
  }
  return r;
}

namespace {

// dK[co,ci,m,n] = sum over (b, oh, ow) of A[b,co,oh,ow] * B[b,ci,ih,iw]:
// A plays the conv-output role, B the conv-input role.
void conv_kernel_grad(const Tensor4& a, const Tensor4& b, const ConvSpec& s,
                      std::span<double> dk) {
  const std::size_t b_n = a.dims[0];
  const std::size_t hout = a.dims[2], wout = a.dims[3];
  const std::size_t hin = b.dims[2], win = b.dims[3];
  for (std::size_t co = 0; co < s.out_channels; ++co) {
    for (std::size_t ci = 0; ci < s.in_channels; ++ci) {
      double* kbase = dk.data() + ((co * s.in_channels + ci) * s.kh) * s.kw;
      for (std::size_t m = 0; m < s.kh; ++m) {
        std::size_t ohlo, ohhi;
        valid_range(hout, hin, s.stride,
                    static_cast<std::ptrdiff_t>(m) - static_cast<std::ptrdiff_t>(s.pad),
                    ohlo, ohhi);
        for (std::size_t n = 0; n < s.kw; ++n) {
          std::size_t owlo, owhi;
          valid_range(wout, win, s.stride,
                      static_cast<std::ptrdiff_t>(n) - static_cast<std::ptrdiff_t>(s.pad),
                      owlo, owhi);
          if (ohhi < ohlo || owhi < owlo) continue;
          double acc = 0.0;
          for (std::size_t bb = 0; bb < b_n; ++bb) {
            for (std::size_t oh = ohlo; oh <= ohhi; ++oh) {
              const std::size_t ih = oh * s.stride - s.pad + m;
              const double* arow = &a.data[a.index(bb, co, oh, 0)];
              const double* brow = &b.data[b.index(bb, ci, ih, 0)];
              for (std::size_t ow = owlo; ow <= owhi; ++ow)
                acc += arow[ow] * brow[ow * s.stride - s.pad + n];
            }
          }
          kbase[m * s.kw + n] += acc;
        }
      }
    }
  }
}

void channel_sums(const Tensor4& t, std::span<double> out) {
  const std::size_t plane = t.dims[2] * t.dims[3];
  for (std::size_t b = 0; b < t.dims[0]; ++b)
    for (std::size_t c = 0; c < t.dims[1]; ++c) {
      const double* p = &t.data[t.index(b, c, 0, 0)];
      double s = 0.0;
      for (std::size_t i = 0; i < plane; ++i) s += p[i];
      out[c] += s;
    }
}

class ConvLayer : public Layer {
 public:
  ConvLayer(std::size_t in_ch, std::size_t out_ch, std::size_t k, std::size_t stride,
            std::size_t pad) {
    spec_.in_channels = in_ch;
    spec_.out_channels = out_ch;
    spec_.kh = spec_.kw = k;
    spec_.stride = stride;
    spec_.pad = pad;
    spec_.kernel.assign(out_ch * in_ch * k * k, 0.0);
    spec_.bias.assign(out_ch, 0.0);
    kgrad_.assign(spec_.kernel.size(), 0.0);
    bgrad_.assign(spec_.bias.size(), 0.0);
  }
  LayerKind kind() const override { return LayerKind::Conv; }
  LayerInfo info() const override {
    return {LayerKind::Conv,
            {spec_.in_channels, spec_.out_channels, spec_.kh, spec_.stride, spec_.pad, 0}};
  }
  Tensor4 apply(const Tensor4& x) const override { return conv2d(x, spec_); }
  Tensor4 forward(const Tensor4& x) override {
    cached_ = x;
    has_forward_ = true;
    return conv2d(x, spec_);
  }
  Tensor4 backward(const Tensor4& gy) override {
    if (!has_forward_) throw std::logic_error("backward before forward");
    conv_kernel_grad(gy, cached_, spec_, kgrad_);
    channel_sums(gy, bgrad_);
    ConvSpec linear = spec_;
    linear.bias.clear();
    return conv2d_transpose(gy, linear);
  }
  std::vector<std::span<double>> params() override {
    return {std::span<double>(spec_.kernel), std::span<double>(spec_.bias)};
  }
  std::vector<std::span<double>> grads() override {
    return {std::span<double>(kgrad_), std::span<double>(bgrad_)};
  }
  void init_params(Rng& rng) override {
    xavier_init(spec_.kernel, spec_.in_channels * spec_.kh * spec_.kw,
                spec_.out_channels * spec_.kh * spec_.kw, rng);
    std::fill(spec_.bias.begin(), spec_.bias.end(), 0.0);
  }
  std::array<std::size_t, 3> out_shape(std::array<std::size_t, 3> in) const override {
    return {spec_.out_channels, conv_out_dim(in[1], spec_.kh, spec_.stride, spec_.pad),
            conv_out_dim(in[2], spec_.kw, spec_.stride, spec_.pad)};
  }

 private:
  ConvSpec spec_;
  std::vector<double> kgrad_, bgrad_;
  Tensor4 cached_;
};

class ConvTransposeLayer : public Layer {
 public:
  // logical map in_ch -> out_ch; stored spec is the conv view (out->in)
  ConvTransposeLayer(std::size_t in_ch, std::size_t out_ch, std::size_t k,
                     std::size_t stride, std::size_t pad)
      : in_ch_(in_ch), out_ch_(out_ch) {
    spec_.in_channels = out_ch;
    spec_.out_channels = in_ch;
    spec_.kh = spec_.kw = k;
    spec_.stride = stride;
    spec_.pad = pad;
    spec_.transposed = true;
    spec_.kernel.assign(out_ch * in_ch * k * k, 0.0);
    spec_.bias.assign(out_ch, 0.0);
    kgrad_.assign(spec_.kernel.size(), 0.0);
    bgrad_.assign(spec_.bias.size(), 0.0);
  }
  LayerKind kind() const override { return LayerKind::ConvTranspose; }
  LayerInfo info() const override {
    return {LayerKind::ConvTranspose,
            {in_ch_, out_ch_, spec_.kh, spec_.stride, spec_.pad, 0}};
  }
  Tensor4 apply(const Tensor4& x) const override { return conv2d_transpose(x, spec_); }
  Tensor4 forward(const Tensor4& x) override {
    cached_ = x;
    has_forward_ = true;
    return conv2d_transpose(x, spec_);
  }
  Tensor4 backward(const Tensor4& gy) override {
    if (!has_forward_) throw std::logic_error("backward before forward");
    conv_kernel_grad(cached_, gy, spec_, kgrad_);
    channel_sums(gy, bgrad_);
    ConvSpec linear = spec_;
    linear.bias.clear();
    return conv2d(gy, linear);
  }
  std::vector<std::span<double>> params() override {
    return {std::span<double>(spec_.kernel), std::span<double>(spec_.bias)};
  }
  std::vector<std::span<double>> grads() override {
    return {std::span<double>(kgrad_), std::span<double>(bgrad_)};
  }
  void init_params(Rng& rng) override {
    xavier_init(spec_.kernel, in_ch_ * spec_.kh * spec_.kw, out_ch_ * spec_.kh * spec_.kw,
                rng);
    std::fill(spec_.bias.begin(), spec_.bias.end(), 0.0);
  }
  std::array<std::size_t, 3> out_shape(std::array<std::size_t, 3> in) const override {
    return {out_ch_, tconv_out_dim(in[1], spec_.kh, spec_.stride, spec_.pad),
            tconv_out_dim(in[2], spec_.kw, spec_.stride, spec_.pad)};
  }

 private:
  std::size_t in_ch_, out_ch_;
  ConvSpec spec_;
  std::vector<double> kgrad_, bgrad_;
  Tensor4 cached_;
};

class DenseLayer : public Layer {
 public:
  DenseLayer(std::size_t in, std::size_t out) : in_(in), out_(out) {
    w_.assign(out * in, 0.0);
    b_.assign(out, 0.0);
    wgrad_.assign(w_.size(), 0.0);
    bgrad_.assign(b_.size(), 0.0);
  }
  LayerKind kind() const override { return LayerKind::Dense; }
  LayerInfo info() const override { return {LayerKind::Dense, {in_, out_, 0, 0, 0, 0}}; }
  Tensor4 apply(const Tensor4& x) const override {
    if (x.dims[1] != in_ || x.dims[2] != 1 || x.dims[3] != 1)
      throw std::invalid_argument("dense: expected flattened input of length " +
                                  std::to_string(in_));
    Tensor4 y(x.dims[0], out_, 1, 1);
    for (std::size_t b = 0; b < x.dims[0]; ++b) {
      const double* xb = &x.data[b * in_];
      double* yb = &y.data[b * out_];
      for (std::size_t o = 0; o < out_; ++o) {
        const double* wr = &w_[o * in_];
        double s = b_[o];
        for (std::size_t i = 0; i < in_; ++i) s += wr[i] * xb[i];
        yb[o] = s;
      }
    }
    return y;
  }
  Tensor4 forward(const Tensor4& x) override {
    cached_ = x;
    has_forward_ = true;
    return apply(x);
  }
  Tensor4 backward(const Tensor4& gy) override {
    if (!has_forward_) throw std::logic_error("backward before forward");
    Tensor4 gx(cached_.dims[0], in_, 1, 1);
    for (std::size_t b = 0; b < cached_.dims[0]; ++b) {
      const double* gyb = &gy.data[b * out_];
      const double* xb = &cached_.data[b * in_];
      double* gxb = &gx.data[b * in_];
      for (std::size_t o = 0; o < out_; ++o) {
        const double g = gyb[o];
        bgrad_[o] += g;
        double* wg = &wgrad_[o * in_];
        const double* wr = &w_[o * in_];
        for (std::size_t i = 0; i < in_; ++i) {
          wg[i] += g * xb[i];
          gxb[i] += g * wr[i];
        }
      }
    }
    return gx;
  }
  std::vector<std::span<double>> params() override {
    return {std::span<double>(w_), std::span<double>(b_)};
  }
  std::vector<std::span<double>> grads() override {
    return {std::span<double>(wgrad_), std::span<double>(bgrad_)};
  }
  void init_params(Rng& rng) override {
    xavier_init(w_, in_, out_, rng);
    std::fill(b_.begin(), b_.end(), 0.0);
  }
  std::array<std::size_t, 3> out_shape(std::array<std::size_t, 3> in) const override {
    if (in[0] * in[1] * in[2] != in_)
      throw std::invalid_argument("dense: shape chain mismatch");
    return {out_, 1, 1};
  }

 private:
  std::size_t in_, out_;
  std::vector<double> w_, b_, wgrad_, bgrad_;
  Tensor4 cached_;
};

class EluLayer : public Layer {
 public:
  LayerKind kind() const override { return LayerKind::Elu; }
  LayerInfo info() const override { return {LayerKind::Elu, {}}; }
  Tensor4 apply(const Tensor4& x) const override {
    Tensor4 y = x;
    for (double& v : y.data) v = elu(v);
    return y;
  }
  Tensor4 forward(const Tensor4& x) override {
    cached_ = x;
    has_forward_ = true;
    return apply(x);
  }
  Tensor4 backward(const Tensor4& gy) override {
    if (!has_forward_) throw std::logic_error("backward before forward");
    Tensor4 gx = gy;
    for (std::size_t i = 0; i < gx.data.size(); ++i)
      gx.data[i] *= elu_derivative(cached_.data[i]);
    return gx;
  }
  std::array<std::size_t, 3> out_shape(std::array<std::size_t, 3> in) const override {
    return in;
  }

 private:
  Tensor4 cached_;
};

class FlattenLayer : public Layer {
 public:
  LayerKind kind() const override { return LayerKind::Flatten; }
  LayerInfo info() const override { return {LayerKind::Flatten, {}}; }
  Tensor4 apply(const Tensor4& x) const override {
    Tensor4 y = x;
    y.dims = {x.dims[0], x.dims[1] * x.dims[2] * x.dims[3], 1, 1};
    return y;
  }
  Tensor4 forward(const Tensor4& x) override {
    shape_ = x.dims;
    has_forward_ = true;
    return apply(x);
  }
  Tensor4 backward(const Tensor4& gy) override {
    if (!has_forward_) throw std::logic_error("backward before forward");
    Tensor4 gx = gy;
    gx.dims = shape_;
    return gx;
  }
  std::array<std::size_t, 3> out_shape(std::array<std::size_t, 3> in) const override {
    return {in[0] * in[1] * in[2], 1, 1};
  }

 private:
  std::array<std::size_t, 4> shape_{};
};

class ReshapeLayer : public Layer {
 public:
  ReshapeLayer(std::size_t c, std::size_t h, std::size_t w) : c_(c), h_(h), w_(w) {}
  LayerKind kind() const override { return LayerKind::Reshape; }
  LayerInfo info() const override { return {LayerKind::Reshape, {c_, h_, w_, 0, 0, 0}}; }
  Tensor4 apply(const Tensor4& x) const override {
    if (x.dims[1] * x.dims[2] * x.dims[3] != c_ * h_ * w_)
      throw std::invalid_argument("reshape: element count mismatch");
    Tensor4 y = x;
    y.dims = {x.dims[0], c_, h_, w_};
    return y;
  }
  Tensor4 forward(const Tensor4& x) override {
    shape_ = x.dims;
    has_forward_ = true;
    return apply(x);
  }
  Tensor4 backward(const Tensor4& gy) override {
    if (!has_forward_) throw std::logic_error("backward before forward");
    Tensor4 gx = gy;
    gx.dims = shape_;
    return gx;
  }
  std::array<std::size_t, 3> out_shape(std::array<std::size_t, 3> in) const override {
    if (in[0] * in[1] * in[2] != c_ * h_ * w_)
      throw std::invalid_argument("reshape: shape chain mismatch");
    return {c_, h_, w_};
  }

 private:
  std::size_t c_, h_, w_;
  std::array<std::size_t, 4> shape_{};
};

}  // namespace

void Layer::zero_grad() {
  for (auto g : grads()) std::fill(g.begin(), g.end(), 0.0);
}

std::vector<double> dense(std::span<const double> x, const std::vector<double>& w,
                          std::span<const double> b, std::size_t out, std::size_t in) {
  if (x.size() != in || w.size() != out * in || b.size() != out)
    throw std::invalid_argument("dense: shape mismatch");
  std::vector<double> y(out);
  for (std::size_t o = 0; o < out; ++o) {
    double s = b[o];
    for (std::size_t i = 0; i < in; ++i) s += w[o * in + i] * x[i];
    y[o] = s;
  }
  return y;
}

double elu(double x) { return x >= 0.0 ? x : std::expm1(x); }
double elu_derivative(double x) { return x >= 0.0 ? 1.0 : std::exp(x); }

std::unique_ptr<Layer> make_conv(std::size_t in_ch, std::size_t out_ch, std::size_t k,
                                 std::size_t stride, std::size_t pad) {
  return std::make_unique<ConvLayer>(in_ch, out_ch, k, stride, pad);
}
std::unique_ptr<Layer> make_conv_transpose(std::size_t in_ch, std::size_t out_ch,
                                           std::size_t k, std::size_t stride,
                                           std::size_t pad) {
  return std::make_unique<ConvTransposeLayer>(in_ch, out_ch, k, stride, pad);
}
std::unique_ptr<Layer> make_dense(std::size_t in, std::size_t out) {
  return std::make_unique<DenseLayer>(in, out);
}
std::unique_ptr<Layer> make_elu() { return std::make_unique<EluLayer>(); }
std::unique_ptr<Layer> make_flatten() { return std::make_unique<FlattenLayer>(); }
std::unique_ptr<Layer> make_reshape(std::size_t c, std::size_t h, std::size_t w) {
  return std::make_unique<ReshapeLayer>(c, h, w);
}

std::unique_ptr<Layer> make_layer(const LayerInfo& info) {
  const auto& d = info.dims;
  switch (info.kind) {
    case LayerKind::Conv:
      return make_conv(d[0], d[1], d[2], d[3], d[4]);
    case LayerKind::ConvTranspose:
      return make_conv_transpose(d[0], d[1], d[2], d[3], d[4]);
    case LayerKind::Dense:
      return make_dense(d[0], d[1]);
    case LayerKind::Elu:
      return make_elu();
    case LayerKind::Flatten:
      return make_flatten();
    case LayerKind::Reshape:
      return make_reshape(d[0], d[1], d[2]);
  }
  throw std::invalid_argument("make_layer: unknown layer kind");
}

Tensor4 Network::apply(Tensor4 x) const {
  for (const auto& l : layers) x = l->apply(x);
  return x;
}

Tensor4 Network::forward(Tensor4 x) {
  for (const auto& l : layers) x = l->forward(x);
  return x;
}

Tensor4 Network::backward(Tensor4 gy) {
  for (auto it = layers.rbegin(); it != layers.rend(); ++it) gy = (*it)->backward(gy);
  return gy;
}

void Network::zero_grad() {
  for (const auto& l : layers) l->zero_grad();
}

std::vector<std::span<double>> Network::params() {
  std::vector<std::span<double>> out;
  for (const auto& l : layers)
    for (auto p : l->params()) out.push_back(p);
  return out;
}

std::vector<std::span<double>> Network::grads() {
  std::vector<std::span<double>> out;
  for (const auto& l : layers)
    for (auto g : l->grads()) out.push_back(g);
  return out;
}

std::size_t Network::param_count() {
  std::size_t n = 0;
  for (auto p : params()) n += p.size();
  return n;
}

std::vector<double> Network::snapshot() {
  std::vector<double> out;
  out.reserve(param_count());
  for (auto p : params()) out.insert(out.end(), p.begin(), p.end());
  return out;
}

void Network::restore(std::span<const double> values) {
  std::size_t at = 0;
  for (auto p : params()) {
    if (at + p.size() > values.size())
      throw std::invalid_argument("Network::restore: value buffer too short");
    std::copy(values.begin() + at, values.begin() + at + p.size(), p.begin());
    at += p.size();
  }
  if (at != values.size())
    throw std::invalid_argument("Network::restore: value buffer size mismatch");
}

void xavier_init(std::span<double> w, std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  if (fan_in == 0 || fan_out == 0)
    throw std::invalid_argument("xavier_init: positive fans required");
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  for (double& v : w) v = rng.uniform(-bound, bound);
}

void initialize_network(Network& net, Rng& rng) {
  for (const auto& l : net.layers) l->init_params(rng);
}

void adam_step(std::vector<std::span<double>> params, std::vector<std::span<double>> grads,
               AdamState& state, double eta) {
  if (params.size() != grads.size())
    throw std::invalid_argument("adam_step: parameter/gradient group mismatch");
  std::size_t total = 0;
  for (auto p : params) total += p.size();
  if (state.m.empty()) {
    state.m.assign(total, 0.0);
    state.v.assign(total, 0.0);
  }
  if (state.m.size() != total)
    throw std::invalid_argument("adam_step: state size does not match parameters");

  ++state.step;
  const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
  std::size_t at = 0;
  for (std::size_t g = 0; g < params.size(); ++g) {
    if (params[g].size() != grads[g].size())
      throw std::invalid_argument("adam_step: span size mismatch");
    for (std::size_t i = 0; i < params[g].size(); ++i, ++at) {
      const double gr = grads[g][i];
      if (!std::isfinite(gr)) throw DivergedError("non-finite gradient", state.step);
      state.m[at] = state.beta1 * state.m[at] + (1.0 - state.beta1) * gr;
      state.v[at] = state.beta2 * state.v[at] + (1.0 - state.beta2) * gr * gr;
      const double mhat = state.m[at] / c1;
      const double vhat = state.v[at] / c2;
      params[g][i] -= eta * mhat / (std::sqrt(vhat) + state.eps);
    }
  }
}

}  // namespace maxrom
