#include "shuffle/bigint.hpp"

#include <stdexcept>

#include "shuffle/errors.hpp"

namespace shuffle {

std::size_t bit_length(const Bigint& v) {
  if (v == 0) return 0;
  return mpz_sizeinbase(v.get_mpz_t(), 2);
}

std::size_t byte_length(const Bigint& v) { return (bit_length(v) + 7) / 8; }

std::vector<std::uint8_t> to_bytes(const Bigint& v) {
  if (v < 0) throw RangeError("to_bytes: negative value");
  std::vector<std::uint8_t> out(byte_length(v));
  if (!out.empty()) {
    std::size_t written = 0;
    mpz_export(out.data(), &written, 1, 1, 1, 0, v.get_mpz_t());
  }
  return out;
}

Bigint from_bytes(std::span<const std::uint8_t> bytes) {
  Bigint v;
  if (!bytes.empty()) {
    mpz_import(v.get_mpz_t(), bytes.size(), 1, 1, 1, 0, bytes.data());
  }
  return v;
}

void append_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void append_integer(std::vector<std::uint8_t>& out, const Bigint& v) {
  auto mag = to_bytes(v);
  append_u32_be(out, static_cast<std::uint32_t>(mag.size()));
  out.insert(out.end(), mag.begin(), mag.end());
}

void append_integer_padded(std::vector<std::uint8_t>& out, const Bigint& v,
                           std::size_t width) {
  auto mag = to_bytes(v);
  if (mag.size() > width) {
    throw RangeError("append_integer_padded: value wider than field");
  }
  append_u32_be(out, static_cast<std::uint32_t>(width));
  out.insert(out.end(), width - mag.size(), 0);
  out.insert(out.end(), mag.begin(), mag.end());
}

std::vector<std::uint8_t> serialize_integer(const Bigint& v) {
  std::vector<std::uint8_t> out;
  append_integer(out, v);
  return out;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0x0f]);
  }
  return s;
}

std::uint8_t ByteReader::u8() {
  if (pos_ + 1 > data_.size()) throw MessageError("truncated buffer");
  return data_[pos_++];
}

std::uint32_t ByteReader::u32_be() {
  if (pos_ + 4 > data_.size()) throw MessageError("truncated buffer");
  std::uint32_t v = (std::uint32_t{data_[pos_]} << 24) |
                    (std::uint32_t{data_[pos_ + 1]} << 16) |
                    (std::uint32_t{data_[pos_ + 2]} << 8) |
                    std::uint32_t{data_[pos_ + 3]};
  pos_ += 4;
  return v;
}

std::span<const std::uint8_t> ByteReader::take(std::size_t count) {
  if (pos_ + count > data_.size()) throw MessageError("truncated buffer");
  auto s = data_.subspan(pos_, count);
  pos_ += count;
  return s;
}

Bigint ByteReader::integer() {
  std::uint32_t len = u32_be();
  return from_bytes(take(len));
}

}  // namespace shuffle
