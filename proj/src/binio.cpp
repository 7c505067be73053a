// SPDX-License-Identifier: Apache-2.0

#include "maxrom/binio.hpp"

#include <cstring>

#include "maxrom/errors.hpp"

namespace maxrom {

BinWriter::BinWriter(const std::string& path) : out_(path, std::ios::binary) {
  if (!out_) throw std::runtime_error("cannot open for writing: " + path);
}

void BinWriter::bytes(const void* p, std::size_t n) {
  out_.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  offset_ += n;
}

void BinWriter::u32(std::uint32_t v) { bytes(&v, 4); }
void BinWriter::f64(double v) { bytes(&v, 8); }

void BinWriter::f64_block(std::span<const double> v) {
  if (!v.empty()) bytes(v.data(), v.size() * 8);
}

void BinWriter::tag(const char (&magic)[9]) { bytes(magic, 8); }

void BinWriter::close() {
  out_.close();
  if (!out_) throw std::runtime_error("write failed on close");
}

BinReader::BinReader(const std::string& path) : in_(path, std::ios::binary) {
  if (!in_) throw std::runtime_error("cannot open for reading: " + path);
}

void BinReader::read(void* p, std::size_t n, const char* what) {
  in_.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in_.gcount()) != n)
    throw FormatError(std::string("truncated file while reading ") + what, offset_);
  offset_ += n;
}

std::uint32_t BinReader::u32() {
  std::uint32_t v;
  read(&v, 4, "u32");
  return v;
}

double BinReader::f64() {
  double v;
  read(&v, 8, "f64");
  return v;
}

void BinReader::f64_block(std::span<double> v) {
  if (!v.empty()) read(v.data(), v.size() * 8, "f64 block");
}

void BinReader::expect_tag(const char (&magic)[9], const std::string& what) {
  const std::uint64_t at = offset_;
  char got[8];
  read(got, 8, "tag");
  if (std::memcmp(got, magic, 8) != 0)
    throw FormatError("bad " + what + " tag, expected '" + std::string(magic, 8) + "'", at);
}

}  // namespace maxrom
