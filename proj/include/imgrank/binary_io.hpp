#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace imgrank {

/// Little-endian byte buffer writer.
class ByteWriter {
 public:
  void bytes(std::string_view raw);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void i64(std::int64_t v) { u64(static_cast<std::uint64_t>(v)); }
  void f32(float v);
  void f64(double v);
  void f32s(std::span<const double> values);
  void f64s(std::span<const double> values);

  const std::string& buffer() const noexcept { return buffer_; }
  std::size_t size() const noexcept { return buffer_.size(); }

 private:
  std::string buffer_;
};

/// Bounds-checked little-endian reader; throws UnsupportedFormat on
/// truncation, naming `what` in the message.
class ByteReader {
 public:
  ByteReader(std::string_view data, std::string module, std::string what)
      : data_(data), module_(std::move(module)), what_(std::move(what)) {}

  std::string_view bytes(std::size_t n);
  std::uint32_t u32();
  std::uint64_t u64();
  std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
  float f32();
  double f64();
  std::vector<double> f32s(std::size_t n);
  std::vector<double> f64s(std::size_t n);

  std::size_t position() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return data_.size() - pos_; }
  void seek(std::size_t pos);
  [[noreturn]] void fail(const std::string& why) const;

 private:
  std::string_view data_;
  std::size_t pos_ = 0;
  std::string module_;
  std::string what_;
};

std::string read_file(const std::filesystem::path& path, const std::string& module);

/// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents, const std::string& module);

}  // namespace imgrank
