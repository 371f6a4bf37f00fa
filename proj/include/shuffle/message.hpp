#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "shuffle/bigint.hpp"
#include "shuffle/paillier.hpp"

namespace shuffle {

// Labeled protocol steps. The byte value doubles as the wire code.
enum class Step : std::uint8_t {
  encrypted_input = 0x11,      // 1.1  player -> provider: E1(x_i)
  encrypted_random = 0x12,     // 1.2  player -> provider: E1(r1_i)
  permuted_randoms = 0x21,     // 2.1  provider -> player: pi1-permuted R1
  blinded_inputs = 0x22,       // 2.2  provider -> player: E1(x_pi2(i) + r2_i)
  encrypted_blindings = 0x23,  // 2.3  provider -> player: E2(r2_i)
  hash_seed = 0x24,            // 2.4  provider -> player: r1S
  selected_ciphertext = 0x27,  // 2.7  player -> provider: rerandomized pick
  masked_blinding = 0x28,      // 2.8  player -> provider: E2(r2_rho + r3_i)
  encrypted_mask = 0x29,       // 2.9  player -> provider: E1(r3_i)
};

const char* step_label(Step step);  // "1.1", "2.7", ...
bool is_valid_step(std::uint8_t code);

// Fixed magnitude widths used when putting payload items on the wire, so
// every item of one domain serializes to the same length.
struct WireWidths {
  std::size_t plaintext_cs1 = 0;
  std::size_t ciphertext_cs1 = 0;
  std::size_t ciphertext_cs2 = 0;

  static WireWidths from_keys(const PublicKey& pk1, const PublicKey& pk2);
};

// A payload item is either a ciphertext (tag 0x01/0x02) or a plain integer
// (tag 0x00) interpreted in the CS1 plaintext space.
using PayloadItem = std::variant<Bigint, Ciphertext>;

struct ProtocolMessage {
  Step step;
  std::uint32_t sender = 0;
  std::vector<PayloadItem> payload;

  // Wire form: 1-byte step code, 4-byte big-endian sender id, 4-byte
  // big-endian item count, then the serialized items.
  std::vector<std::uint8_t> serialize(const WireWidths& widths) const;
  static ProtocolMessage parse(std::span<const std::uint8_t> bytes);

  // Total serialized size of the payload items (excludes the 9-byte
  // header); this is what the traffic counters accumulate.
  std::uint64_t payload_bytes(const WireWidths& widths) const;

  // Accessors that check the item's shape.
  const Ciphertext& ciphertext_at(std::size_t i, Instance expected) const;
  const Bigint& integer_at(std::size_t i) const;
};

ProtocolMessage make_ciphertext_message(Step step, std::uint32_t sender,
                                        Ciphertext c);
ProtocolMessage make_list_message(Step step, std::uint32_t sender,
                                  std::vector<Ciphertext> list);
ProtocolMessage make_integer_message(Step step, std::uint32_t sender,
                                     Bigint value);

}  // namespace shuffle
