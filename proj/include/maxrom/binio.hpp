// SPDX-License-Identifier: Apache-2.0

#ifndef MAXROM_BINIO_HPP
#define MAXROM_BINIO_HPP

#include <bit>
#include <cstdint>
#include <fstream>
#include <span>
#include <string>
#include <vector>

namespace maxrom {

static_assert(std::endian::native == std::endian::little,
              "binary containers are little-endian; big-endian hosts unsupported");

/// Little-endian binary writer with offset tracking.
class BinWriter {
 public:
  explicit BinWriter(const std::string& path);
  void u32(std::uint32_t v);
  void f64(double v);
  void f64_block(std::span<const double> v);
  void bytes(const void* p, std::size_t n);
  void tag(const char (&magic)[9]);  // 8-byte section tag
  std::uint64_t offset() const { return offset_; }
  void close();

 private:
  std::ofstream out_;
  std::uint64_t offset_ = 0;
};

/// Little-endian binary reader; throws FormatError (with offset) on any problem.
class BinReader {
 public:
  explicit BinReader(const std::string& path);
  std::uint32_t u32();
  double f64();
  void f64_block(std::span<double> v);
  void expect_tag(const char (&magic)[9], const std::string& what);
  std::uint64_t offset() const { return offset_; }

 private:
  void read(void* p, std::size_t n, const char* what);
  std::ifstream in_;
  std::uint64_t offset_ = 0;
};

}  // namespace maxrom

#endif
