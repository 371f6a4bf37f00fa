#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "shuffle/bigint.hpp"

namespace shuffle {

// Uniform byte stream. Every random choice in the project is drawn through
// an explicit RandomSource handed in by the caller; nothing reads ambient
// global state, so seeded runs replay bit-for-bit.
class RandomSource {
 public:
  virtual ~RandomSource() = default;

  virtual void fill(std::span<std::uint8_t> out) = 0;

  // Independent child stream. Forking does not advance this source, so the
  // child depends only on (parent identity, label).
  virtual std::unique_ptr<RandomSource> fork(std::string_view label) = 0;

  // Uniform in [0, bound), bound > 0. Rejection sampling on the bit width.
  Bigint uniform_below(const Bigint& bound);

  // Uniform in [0, 2^bits).
  Bigint uniform_bits(std::size_t bits);

  // Uniform in [0, bound), bound > 0.
  std::uint64_t uniform_u64(std::uint64_t bound);

  // Fisher-Yates permutation of {0, ..., n-1}.
  std::vector<std::uint32_t> permutation(std::uint32_t n);
};

// OS-backed generator (OpenSSL RAND_bytes).
class SystemRandom final : public RandomSource {
 public:
  void fill(std::span<std::uint8_t> out) override;
  std::unique_ptr<RandomSource> fork(std::string_view label) override;
};

// Deterministic SHA-256 counter stream over a 32-byte key. Reproducible
// across platforms; used whenever a run is seeded.
class SeededRandom final : public RandomSource {
 public:
  explicit SeededRandom(std::uint64_t seed);
  explicit SeededRandom(const std::array<std::uint8_t, 32>& key);

  void fill(std::span<std::uint8_t> out) override;
  std::unique_ptr<RandomSource> fork(std::string_view label) override;

 private:
  std::array<std::uint8_t, 32> key_;
  std::uint64_t counter_ = 0;
  std::array<std::uint8_t, 32> block_{};
  std::size_t block_pos_ = 32;  // exhausted
};

// Seeded stream when a seed is given, system randomness otherwise.
std::unique_ptr<RandomSource> make_random(std::optional<std::uint64_t> seed);

}  // namespace shuffle
