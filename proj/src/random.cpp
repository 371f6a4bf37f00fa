#include "shuffle/random.hpp"

#include <openssl/rand.h>

#include <cstring>

#include "shuffle/errors.hpp"
#include "shuffle/sha256.hpp"

namespace shuffle {

Bigint RandomSource::uniform_below(const Bigint& bound) {
  if (bound <= 0) throw RangeError("uniform_below: bound must be positive");
  const std::size_t bits = bit_length(bound);
  const std::size_t bytes = (bits + 7) / 8;
  const unsigned top_mask =
      bits % 8 == 0 ? 0xff : static_cast<unsigned>((1u << (bits % 8)) - 1);
  std::vector<std::uint8_t> buf(bytes);
  for (;;) {
    fill(buf);
    buf[0] &= static_cast<std::uint8_t>(top_mask);
    Bigint v = from_bytes(buf);
    if (v < bound) return v;
  }
}

Bigint RandomSource::uniform_bits(std::size_t bits) {
  if (bits == 0) return 0;
  const std::size_t bytes = (bits + 7) / 8;
  std::vector<std::uint8_t> buf(bytes);
  fill(buf);
  if (bits % 8 != 0) {
    buf[0] &= static_cast<std::uint8_t>((1u << (bits % 8)) - 1);
  }
  return from_bytes(buf);
}

std::uint64_t RandomSource::uniform_u64(std::uint64_t bound) {
  if (bound == 0) throw RangeError("uniform_u64: bound must be positive");
  if (bound == 1) return 0;
  int bits = 64 - __builtin_clzll(bound - 1);
  std::uint64_t mask = bits == 64 ? ~0ull : ((1ull << bits) - 1);
  std::array<std::uint8_t, 8> buf;
  for (;;) {
    fill(buf);
    std::uint64_t v = 0;
    for (auto b : buf) v = (v << 8) | b;
    v &= mask;
    if (v < bound) return v;
  }
}

std::vector<std::uint32_t> RandomSource::permutation(std::uint32_t n) {
  std::vector<std::uint32_t> perm(n);
  for (std::uint32_t i = 0; i < n; ++i) perm[i] = i;
  for (std::uint32_t i = n; i > 1; --i) {
    std::uint32_t j = static_cast<std::uint32_t>(uniform_u64(i));
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

void SystemRandom::fill(std::span<std::uint8_t> out) {
  if (out.empty()) return;
  if (RAND_bytes(out.data(), static_cast<int>(out.size())) != 1) {
    throw Error("system randomness unavailable");
  }
}

std::unique_ptr<RandomSource> SystemRandom::fork(std::string_view) {
  return std::make_unique<SystemRandom>();
}

namespace {

std::array<std::uint8_t, 32> derive_key(std::span<const std::uint8_t> material) {
  Digest d = sha256(material);
  std::array<std::uint8_t, 32> key;
  std::memcpy(key.data(), d.data(), key.size());
  return key;
}

}  // namespace

SeededRandom::SeededRandom(std::uint64_t seed) {
  std::array<std::uint8_t, 8> bytes;
  for (int i = 7; i >= 0; --i) {
    bytes[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(seed);
    seed >>= 8;
  }
  key_ = derive_key(bytes);
}

SeededRandom::SeededRandom(const std::array<std::uint8_t, 32>& key)
    : key_(key) {}

void SeededRandom::fill(std::span<std::uint8_t> out) {
  std::size_t done = 0;
  while (done < out.size()) {
    if (block_pos_ == block_.size()) {
      std::array<std::uint8_t, 40> input;
      std::memcpy(input.data(), key_.data(), 32);
      std::uint64_t c = counter_++;
      for (int i = 7; i >= 0; --i) {
        input[32 + static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(c);
        c >>= 8;
      }
      Digest d = sha256(input);
      std::memcpy(block_.data(), d.data(), block_.size());
      block_pos_ = 0;
    }
    std::size_t take = std::min(out.size() - done, block_.size() - block_pos_);
    std::memcpy(out.data() + done, block_.data() + block_pos_, take);
    done += take;
    block_pos_ += take;
  }
}

std::unique_ptr<RandomSource> SeededRandom::fork(std::string_view label) {
  std::vector<std::uint8_t> material;
  material.insert(material.end(), key_.begin(), key_.end());
  material.push_back(0xff);  // domain separation from the counter stream
  material.insert(material.end(), label.begin(), label.end());
  return std::make_unique<SeededRandom>(derive_key(material));
}

std::unique_ptr<RandomSource> make_random(std::optional<std::uint64_t> seed) {
  if (seed) return std::make_unique<SeededRandom>(*seed);
  return std::make_unique<SystemRandom>();
}

}  // namespace shuffle
