#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "shuffle/counters.hpp"
#include "shuffle/protocol.hpp"
#include "shuffle/transport.hpp"

namespace shuffle {

// Key material for one run. The orchestrator hands sk1 to the players and
// sk2 to the provider at setup; key distribution itself is out of scope.
struct KeySetup {
  ShuffleParams params;
  KeyPair cs1;
  KeyPair cs2;
};

// Validates the parameters, generates both key pairs and checks the
// plaintext-space nesting N2 <= N1 (regenerating CS2 in the equal-size
// edge case) plus the exact blinding-range bound against N2.
KeySetup make_key_setup(const ShuffleParams& params, RandomSource& rng);
KeyPair make_nested_keys(unsigned bits_cs1, unsigned bits_cs2,
                         Instance instance, const Bigint& cs1_modulus,
                         RandomSource& rng);

struct RunOptions {
  std::optional<std::uint64_t> seed;  // deterministic replay when set
  double latency_us = 0.0;
  double bandwidth_mb_per_s = 0.0;  // 0 = unlimited

  // Statistical control knobs. All off in normal operation; the harness
  // pins them to produce a deliberately broken permutation distribution or
  // to force abort paths.
  bool identity_permutations = false;
  bool identity_arrival = false;
  bool sequential_indices = false;
  bool inject_duplicate_random = false;
};

struct ShuffleRun {
  ShuffleOutput output;
  RunReport report;
  Transcript transcript;
  std::vector<std::size_t> player_indices;  // rho_i per player, 1-based
};

// Executes both protocol rounds over the simulated transport. Round-two
// triples reach the provider in a fresh uniformly shuffled player order.
// Throws ProtocolAbort (with the failing step) when a run cannot finish.
ShuffleRun run_shuffle(const KeySetup& setup, const std::vector<Bigint>& inputs,
                       const RunOptions& options = {});

// Convenience overload: generates keys from the parameters first.
ShuffleRun run_shuffle(const ShuffleParams& params,
                       const std::vector<Bigint>& inputs,
                       const RunOptions& options = {});

}  // namespace shuffle
