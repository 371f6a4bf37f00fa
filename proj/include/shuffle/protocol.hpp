#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "shuffle/bigint.hpp"
#include "shuffle/counters.hpp"
#include "shuffle/message.hpp"
#include "shuffle/paillier.hpp"
#include "shuffle/random.hpp"

namespace shuffle {

constexpr std::uint32_t kProviderId = 0;

// Sizing parameters shared by all participants.
//
// Blinding values r2/r3 are sampled from [0, 2^(beta+sigma)) where beta
// bounds the inputs and sigma is a statistical hiding margin. Requiring
// 2^(beta+sigma+1) < N2 makes r2 + r3 fit below the CS2 modulus, so the
// provider recovers the exact integer sum in step 2.10 and unblinding
// cancels without a modular wrap.
struct ShuffleParams {
  unsigned key_bits_cs1 = 1024;
  unsigned key_bits_cs2 = 1022;
  unsigned input_bound_bits = 64;  // beta: inputs lie in [0, 2^beta)
  unsigned sigma = 64;

  unsigned blinding_bits() const { return input_bound_bits + sigma; }
  Bigint input_bound() const;    // 2^beta
  Bigint blinding_bound() const; // 2^(beta+sigma)

  // Throws ConfigError. Checked before any key generation.
  void validate() const;
};

struct ShuffleOutput {
  std::vector<Ciphertext> ciphertexts;  // CS1, in round-2 arrival order
};

// The identical content every player receives in steps 2.1-2.4.
struct RoundOneBroadcast {
  std::vector<Ciphertext> permuted_randoms;     // 2.1
  std::vector<Ciphertext> blinded_inputs;       // 2.2
  std::vector<Ciphertext> encrypted_blindings;  // 2.3
  Bigint hash_seed;                             // 2.4

  std::array<ProtocolMessage, 4> to_messages() const;
  // Validates arity and instance tags against the expected player count.
  static RoundOneBroadcast from_messages(
      std::span<const ProtocolMessage> messages, std::uint32_t expected_n);
};

// Test-only knobs. Defaults leave the protocol untouched; the harness pins
// them for abort-path tests and the degenerate statistics control.
struct PlayerHooks {
  std::optional<Bigint> forced_index_random;  // pins r1
  bool sequential_index = false;              // skip index distribution: rho = id
};

struct ProviderHooks {
  bool identity_permutations = false;  // pins pi1 and pi2 to identity
};

// One player's protocol state machine. A player holds pk1/sk1/pk2 and by
// construction never sees the provider's CS2 secret key.
class Player {
 public:
  enum class Phase { init, round1_sent, round2_ready, done, aborted };

  Player(std::uint32_t id, Bigint input, const ShuffleParams& params,
         const PublicKey& pk1, const SecretKey& sk1, const PublicKey& pk2,
         std::unique_ptr<RandomSource> rng, PlayerHooks hooks = {});

  // Steps 1.1-1.2: encrypted input and fresh index randomness.
  std::pair<ProtocolMessage, ProtocolMessage> round_one();

  // Steps 2.5-2.9: decrypt the randomness list, derive the index, select,
  // rerandomize and mask. Returns the 2.7/2.8/2.9 messages.
  std::array<ProtocolMessage, 3> round_two(const RoundOneBroadcast& broadcast);

  std::uint32_t id() const { return id_; }
  Phase phase() const { return phase_; }
  // 1-based random index; valid once round_two succeeded.
  std::size_t random_index() const;
  const Bigint& index_random() const { return index_random_; }  // r1
  const Bigint& mask_value() const { return mask_value_; }      // r3
  const OpCounters& counters() const { return counters_; }

 private:
  Ciphertext enc1(const Bigint& m);
  Ciphertext enc2(const Bigint& m);

  std::uint32_t id_;
  Bigint input_;
  ShuffleParams params_;
  PublicKey pk1_;
  SecretKey sk1_;
  PublicKey pk2_;
  std::unique_ptr<RandomSource> rng_;
  PlayerHooks hooks_;
  Phase phase_ = Phase::init;
  Bigint index_random_;      // r1, sampled in round one
  Bigint mask_value_;        // r3, sampled in round two
  std::size_t random_index_ = 0;
  OpCounters counters_;
};

// The service provider's state machine. It holds pk1/pk2/sk2 and by
// construction never sees the players' CS1 secret key.
class Provider {
 public:
  enum class Phase { collecting, broadcast_sent, finalized };

  Provider(std::uint32_t player_count, const ShuffleParams& params,
           const PublicKey& pk1, const PublicKey& pk2, const SecretKey& sk2,
           std::unique_ptr<RandomSource> rng, ProviderHooks hooks = {});

  // Steps 1.1/1.2 intake, in arrival order.
  void receive_round_one(const ProtocolMessage& msg);

  // Steps 2.1-2.4: permute the randomness list, blind and permute the
  // inputs, encrypt the blinding values under CS2, draw the hash seed.
  // Requires all 2n round-one messages.
  RoundOneBroadcast build_broadcast();

  // Step 2.7-2.9 intake: one triple per player, in arrival order.
  void receive_round_two(const std::array<ProtocolMessage, 3>& triple);

  // Step 2.10: decrypt each masked blinding, re-encrypt its negation under
  // CS1 and multiply the triple together, cancelling r2 and r3.
  ShuffleOutput finalize();

  Phase phase() const { return phase_; }
  std::uint32_t player_count() const { return n_; }
  const OpCounters& counters() const { return counters_; }

  // Test access to internal randomness (never sent anywhere).
  const std::vector<Bigint>& blinding_values() const { return blindings_; }
  const std::vector<std::uint32_t>& input_permutation() const { return pi2_; }
  const Bigint& hash_seed() const { return hash_seed_; }

 private:
  Ciphertext enc1(const Bigint& m);
  Ciphertext enc2(const Bigint& m);

  std::uint32_t n_;
  ShuffleParams params_;
  PublicKey pk1_;
  PublicKey pk2_;
  SecretKey sk2_;
  std::unique_ptr<RandomSource> rng_;
  ProviderHooks hooks_;
  Phase phase_ = Phase::collecting;
  std::vector<Ciphertext> received_inputs_;   // 1.1, arrival order
  std::vector<Ciphertext> received_randoms_;  // 1.2, arrival order
  std::vector<bool> seen_input_;              // per player id
  std::vector<bool> seen_random_;
  std::vector<std::uint32_t> pi1_;
  std::vector<std::uint32_t> pi2_;
  std::vector<Bigint> blindings_;  // r2, aligned with the blinded inputs
  Bigint hash_seed_;
  std::vector<std::array<ProtocolMessage, 3>> round2_;  // arrival order
  std::vector<bool> seen_round2_;
  OpCounters counters_;
};

}  // namespace shuffle
