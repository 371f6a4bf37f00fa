#pragma once

#include <cstdint>
#include <vector>

#include "shuffle/bigint.hpp"
#include "shuffle/random.hpp"

namespace shuffle {

// The protocol uses two cryptosystem instances with nested plaintext
// spaces. Every key and ciphertext is tagged with the instance it belongs
// to; operations across instances are rejected.
enum class Instance : std::uint8_t { cs1 = 0x01, cs2 = 0x02 };

const char* instance_name(Instance instance);

struct PublicKey {
  Bigint modulus;     // N = p*q
  Bigint generator;   // fixed to N + 1
  Bigint modulus_sq;  // N^2, cached
  Instance instance;

  std::size_t bits() const { return bit_length(modulus); }
  // Fixed magnitude widths for wire encoding: every plaintext of this
  // instance fits in plaintext_width() bytes, every ciphertext in
  // ciphertext_width() bytes.
  std::size_t plaintext_width() const { return byte_length(modulus); }
  std::size_t ciphertext_width() const { return byte_length(modulus_sq); }
};

struct SecretKey {
  Bigint lambda;  // Carmichael value lcm(p-1, q-1)
  Bigint mu;      // (L(g^lambda mod N^2))^-1 mod N
  Bigint modulus;
  Instance instance;

  // CRT decryption cache.
  Bigint p, q;
  Bigint p_sq, q_sq;
  Bigint hp, hq;        // (L_p(g^{p-1} mod p^2))^-1 mod p and the q twin
  Bigint q_inv_mod_p;
  Bigint modulus_sq;
};

struct KeyPair {
  PublicKey pub;
  SecretKey sec;
};

struct Ciphertext {
  Bigint value;  // unit in [1, N^2)
  Instance instance;

  bool operator==(const Ciphertext&) const = default;
};

// Generates a key pair with a modulus of exactly `bits` bits (product of
// two distinct primes of bits/2 bits each). bits must be even and >= 16;
// small sizes are only meant for tests.
KeyPair keygen(unsigned bits, Instance instance, RandomSource& rng);

// Builds a key pair from known primes. Intended for tiny, hand-checked
// moduli in tests; validates that p and q are distinct primes and that the
// resulting modulus admits decryption.
KeyPair keypair_from_primes(const Bigint& p, const Bigint& q,
                            Instance instance);

// c = g^m * r^N mod N^2 with a fresh uniform unit r. Requires 0 <= m < N.
Ciphertext encrypt(const PublicKey& pk, const Bigint& m, RandomSource& rng);

// Inverts encrypt; requires a matching instance and a unit ciphertext.
Bigint decrypt(const SecretKey& sk, const Ciphertext& c);

// Ciphertext multiplication: decrypts to (m1 + m2) mod N.
Ciphertext hom_add(const PublicKey& pk, const Ciphertext& a,
                   const Ciphertext& b);

// Ciphertext exponentiation: decrypts to (k * m) mod N. Requires 0 <= k < N.
Ciphertext hom_scale(const PublicKey& pk, const Ciphertext& c,
                     const Bigint& k);

// Scaling by N - 1: decrypts to (N - m) mod N.
Ciphertext hom_negate(const PublicKey& pk, const Ciphertext& c);

// Multiplication by a fresh encryption of 0: same plaintext, new value.
Ciphertext rerandomize(const PublicKey& pk, const Ciphertext& c,
                       RandomSource& rng);

// Wire form: 1-byte instance tag (0x01 / 0x02), then the value as a
// length-prefixed big-endian integer padded to `value_width` bytes so all
// ciphertexts of one instance have equal serialized size.
void append_ciphertext(std::vector<std::uint8_t>& out, const Ciphertext& c,
                       std::size_t value_width);
Ciphertext parse_ciphertext(ByteReader& reader);

}  // namespace shuffle
