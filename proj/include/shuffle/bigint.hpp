#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace shuffle {

using Bigint = mpz_class;

// Number of significant bits; 0 for the value 0.
std::size_t bit_length(const Bigint& v);

// Number of bytes needed for the minimal big-endian magnitude; 0 for 0.
std::size_t byte_length(const Bigint& v);

// Minimal big-endian magnitude (empty for 0). Value must be non-negative.
std::vector<std::uint8_t> to_bytes(const Bigint& v);

Bigint from_bytes(std::span<const std::uint8_t> bytes);

void append_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v);

// Canonical integer encoding: 4-byte big-endian byte count, then the
// big-endian magnitude. The minimal form drops leading zero bytes; the
// padded form writes exactly `width` magnitude bytes (used on the wire so
// that items of one domain all serialize to the same length).
void append_integer(std::vector<std::uint8_t>& out, const Bigint& v);
void append_integer_padded(std::vector<std::uint8_t>& out, const Bigint& v,
                           std::size_t width);
std::vector<std::uint8_t> serialize_integer(const Bigint& v);

std::string to_hex(std::span<const std::uint8_t> bytes);

// Cursor over a byte buffer. Throws MessageError when reads run past the
// end, so parsers never touch out-of-range memory.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

  std::uint8_t u8();
  std::uint32_t u32_be();
  std::span<const std::uint8_t> take(std::size_t count);
  Bigint integer();  // length-prefixed magnitude
  bool done() const { return pos_ == data_.size(); }
  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::span<const std::uint8_t> data_;
  std::size_t pos_ = 0;
};

}  // namespace shuffle
