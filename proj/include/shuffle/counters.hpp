#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace shuffle {

// Per-party operation and traffic counters. Enc/Dec count cryptosystem
// operations, mult counts ciphertext-space multiplications, bytes_sent the
// serialized payload items put on the wire.
struct OpCounters {
  std::uint64_t enc = 0;
  std::uint64_t dec = 0;
  std::uint64_t mult = 0;
  std::uint64_t bytes_sent = 0;

  OpCounters& operator+=(const OpCounters& o) {
    enc += o.enc;
    dec += o.dec;
    mult += o.mult;
    bytes_sent += o.bytes_sent;
    return *this;
  }
  bool operator==(const OpCounters&) const = default;
};

enum class Mode { shuffle, mixnet };

struct RunReport {
  Mode mode = Mode::shuffle;
  unsigned mixes = 0;  // cascade length; 0 for shuffle runs
  std::uint32_t n = 0;
  unsigned key_bits_cs1 = 0;
  unsigned key_bits_cs2 = 0;
  double wall_ms = 0;     // modeled distributed wall time: compute + comm
  double compute_ms = 0;  // provider path plus the slowest player per stage
  double comm_ms = 0;     // latency/bandwidth model over the message log
  OpCounters provider;
  std::vector<OpCounters> players;

  OpCounters player_total() const;
  std::string mode_string() const;  // "shuffle", "mixnet3", "mixnet5"
};

// Serialized payload-item sizes implied by the key sizes: a 1-byte tag, a
// 4-byte length prefix, and a magnitude padded to the domain width.
struct SerializedLengths {
  std::uint64_t ciphertext_cs1 = 0;  // l_C1
  std::uint64_t ciphertext_cs2 = 0;  // l_C2
  std::uint64_t plaintext_cs1 = 0;   // l_M1

  static SerializedLengths from_key_bits(unsigned bits_cs1, unsigned bits_cs2);
};

// Checks a shuffle run's counters against the closed-form totals:
// provider (3n, n, 3n) with 2n^2*l_C1 + n^2*l_C2 + n*l_M1 bytes, each
// player (5, n, 2) with 4*l_C1 + l_C2 bytes. Exact equality; any deviation
// is listed in the report.
struct ConformanceResult {
  bool pass = true;
  std::vector<std::string> mismatches;
  OpCounters expected_provider;
  OpCounters expected_player;
  std::string summary() const;
};

ConformanceResult count_conformance(const RunReport& report);

}  // namespace shuffle
