#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace shuffle {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::span<const std::uint8_t> data);

// Compares digests as 256-bit big-endian unsigned integers, which for
// byte arrays is plain lexicographic order.
int compare_digests(const Digest& a, const Digest& b);

}  // namespace shuffle
