#include "shuffle/sha256.hpp"

#include <openssl/evp.h>

#include <cstring>

#include "shuffle/errors.hpp"

namespace shuffle {

Digest sha256(std::span<const std::uint8_t> data) {
  Digest out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, EVP_sha256(),
                 nullptr) != 1 ||
      len != out.size()) {
    throw Error("sha256 failed");
  }
  return out;
}

int compare_digests(const Digest& a, const Digest& b) {
  return std::memcmp(a.data(), b.data(), a.size());
}

}  // namespace shuffle
