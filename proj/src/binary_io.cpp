#include "imgrank/binary_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "imgrank/error.hpp"

namespace imgrank {

namespace {

template <class T>
void put_le(std::string& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xffu));
}

template <class T>
T get_le(std::string_view raw) {
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    value |= static_cast<T>(static_cast<unsigned char>(raw[i])) << (8 * i);
  }
  return value;
}

}  // namespace

void ByteWriter::bytes(std::string_view raw) { buffer_.append(raw); }
void ByteWriter::u32(std::uint32_t v) { put_le(buffer_, v); }
void ByteWriter::u64(std::uint64_t v) { put_le(buffer_, v); }
void ByteWriter::f32(float v) { put_le(buffer_, std::bit_cast<std::uint32_t>(v)); }
void ByteWriter::f64(double v) { put_le(buffer_, std::bit_cast<std::uint64_t>(v)); }

void ByteWriter::f32s(std::span<const double> values) {
  for (double v : values) f32(static_cast<float>(v));
}

void ByteWriter::f64s(std::span<const double> values) {
  for (double v : values) f64(v);
}

std::string_view ByteReader::bytes(std::size_t n) {
  if (n > remaining()) fail("truncated");
  const auto out = data_.substr(pos_, n);
  pos_ += n;
  return out;
}

std::uint32_t ByteReader::u32() { return get_le<std::uint32_t>(bytes(4)); }
std::uint64_t ByteReader::u64() { return get_le<std::uint64_t>(bytes(8)); }
float ByteReader::f32() { return std::bit_cast<float>(u32()); }
double ByteReader::f64() { return std::bit_cast<double>(u64()); }

std::vector<double> ByteReader::f32s(std::size_t n) {
  if (n > remaining() / 4) fail("truncated");
  std::vector<double> out(n);
  for (double& v : out) v = f32();
  return out;
}

std::vector<double> ByteReader::f64s(std::size_t n) {
  if (n > remaining() / 8) fail("truncated");
  std::vector<double> out(n);
  for (double& v : out) v = f64();
  return out;
}

void ByteReader::seek(std::size_t pos) {
  if (pos > data_.size()) fail("offset out of range");
  pos_ = pos;
}

void ByteReader::fail(const std::string& why) const {
  throw Error(ErrorKind::UnsupportedFormat, module_, what_ + ": " + why);
}

std::string read_file(const std::filesystem::path& path, const std::string& module) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::MissingFile, module, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents, const std::string& module) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, module, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorKind::Io, module, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::Io, module, "cannot replace " + path.string());
  }
}

}  // namespace imgrank
