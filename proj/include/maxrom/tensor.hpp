// SPDX-License-Identifier: Apache-2.0

#ifndef MAXROM_TENSOR_HPP
#define MAXROM_TENSOR_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace maxrom {

/// (batch, channels, height, width) tensor of 64-bit floats, row-major with
/// width fastest. Gradient buffer allocated on demand.
struct Tensor4 {
  std::array<std::size_t, 4> dims{0, 0, 0, 0};
  std::vector<double> data;
  std::vector<double> grad;

  Tensor4() = default;
  Tensor4(std::size_t b, std::size_t c, std::size_t h, std::size_t w)
      : dims{b, c, h, w}, data(b * c * h * w, 0.0) {}

  std::size_t size() const { return data.size(); }
  std::size_t index(std::size_t b, std::size_t c, std::size_t h, std::size_t w) const {
    return ((b * dims[1] + c) * dims[2] + h) * dims[3] + w;
  }
  double& at(std::size_t b, std::size_t c, std::size_t h, std::size_t w) {
    return data[index(b, c, h, w)];
  }
  double at(std::size_t b, std::size_t c, std::size_t h, std::size_t w) const {
    return data[index(b, c, h, w)];
  }
  void ensure_grad() {
    if (grad.size() != data.size()) grad.assign(data.size(), 0.0);
  }
};

/// Seedable generator with a pinned value mapping, so streams reproduce
/// bit-for-bit across standard libraries: raw draws come from mt19937_64 and
/// uniform doubles are (x >> 11) * 2^-53.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Bounded draw by modulo; stream order is part of the format.
  std::size_t index(std::size_t bound) {
    return static_cast<std::size_t>(next_u64() % bound);
  }

  /// Fisher-Yates, descending pass.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace maxrom

#endif
