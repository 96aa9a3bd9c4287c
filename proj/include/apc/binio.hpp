#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "apc/error.hpp"

namespace apc {

// Little-endian primitive writer for the versioned binary artifacts.
class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  void u8(std::uint8_t v) { out_.put(static_cast<char>(v)); }
  void u32(std::uint32_t v) { put_le(v, 4); }
  void u64(std::uint64_t v) { put_le(v, 8); }
  void i64(std::int64_t v) { put_le(static_cast<std::uint64_t>(v), 8); }
  void f64(double v) { put_le(std::bit_cast<std::uint64_t>(v), 8); }

  void str(std::string_view s) {
    u64(s.size());
    out_.write(s.data(), static_cast<std::streamsize>(s.size()));
  }
  void magic(std::string_view m) { out_.write(m.data(), static_cast<std::streamsize>(m.size())); }

  void u32s(std::span<const std::uint32_t> v) {
    u64(v.size());
    for (auto x : v) u32(x);
  }
  void u64s(std::span<const std::uint64_t> v) {
    u64(v.size());
    for (auto x : v) u64(x);
  }
  void f64s(std::span<const double> v) {
    u64(v.size());
    for (auto x : v) f64(x);
  }

 private:
  void put_le(std::uint64_t v, int bytes) {
    char buf[8];
    for (int i = 0; i < bytes; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xffu);
    out_.write(buf, bytes);
  }

  std::ostream& out_;
};

class BinaryReader {
 public:
  BinaryReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(get_le(1)); }
  std::uint32_t u32() { return static_cast<std::uint32_t>(get_le(4)); }
  std::uint64_t u64() { return get_le(8); }
  std::int64_t i64() { return static_cast<std::int64_t>(get_le(8)); }
  double f64() { return std::bit_cast<double>(get_le(8)); }

  std::string str() {
    auto n = length();
    std::string s(n, '\0');
    read_raw(s.data(), n);
    return s;
  }

  void expect_magic(std::string_view m) {
    std::string got(m.size(), '\0');
    read_raw(got.data(), m.size());
    if (got != m) fail("bad magic, expected '" + std::string(m) + "'");
  }

  std::vector<std::uint32_t> u32s() {
    std::vector<std::uint32_t> v(length());
    for (auto& x : v) x = u32();
    return v;
  }
  std::vector<std::uint64_t> u64s() {
    std::vector<std::uint64_t> v(length());
    for (auto& x : v) x = u64();
    return v;
  }
  std::vector<double> f64s() {
    std::vector<double> v(length());
    for (auto& x : v) x = f64();
    return v;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(source_ + ": " + what + " at byte " + std::to_string(offset_));
  }

 private:
  // Guards against absurd lengths from corrupted headers before allocating.
  std::size_t length() {
    auto n = u64();
    if (n > (std::uint64_t{1} << 36)) fail("implausible array length " + std::to_string(n));
    return static_cast<std::size_t>(n);
  }

  void read_raw(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) fail("unexpected end of file");
    offset_ += n;
  }

  std::uint64_t get_le(int bytes) {
    unsigned char buf[8];
    read_raw(reinterpret_cast<char*>(buf), static_cast<std::size_t>(bytes));
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
  }

  std::istream& in_;
  std::string source_;
  std::size_t offset_ = 0;
};

}  // namespace apc
