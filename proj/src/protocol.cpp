#include "shuffle/protocol.hpp"

#include <string>

#include "shuffle/errors.hpp"
#include "shuffle/index_distribution.hpp"

namespace shuffle {

Bigint ShuffleParams::input_bound() const {
  Bigint b = 1;
  mpz_mul_2exp(b.get_mpz_t(), b.get_mpz_t(), input_bound_bits);
  return b;
}

Bigint ShuffleParams::blinding_bound() const {
  Bigint b = 1;
  mpz_mul_2exp(b.get_mpz_t(), b.get_mpz_t(), blinding_bits());
  return b;
}

void ShuffleParams::validate() const {
  if (key_bits_cs1 < 16 || key_bits_cs1 % 2 != 0) {
    throw ConfigError("CS1 key size must be even and at least 16 bits");
  }
  if (key_bits_cs2 < 16 || key_bits_cs2 % 2 != 0) {
    throw ConfigError("CS2 key size must be even and at least 16 bits");
  }
  if (key_bits_cs2 + 2 > key_bits_cs1) {
    throw ConfigError(
        "CS2 key size must be at most the CS1 key size minus 2, so the CS2 "
        "plaintext space nests inside CS1's");
  }
  if (input_bound_bits == 0) {
    throw ConfigError("input bound must be at least 1 bit");
  }
  if (blinding_bits() + 1 >= key_bits_cs2) {
    throw ConfigError(
        "blinding range too wide: input_bound_bits + sigma + 1 must stay "
        "below the CS2 key size so masked sums never wrap");
  }
}

std::array<ProtocolMessage, 4> RoundOneBroadcast::to_messages() const {
  return {
      make_list_message(Step::permuted_randoms, kProviderId, permuted_randoms),
      make_list_message(Step::blinded_inputs, kProviderId, blinded_inputs),
      make_list_message(Step::encrypted_blindings, kProviderId,
                        encrypted_blindings),
      make_integer_message(Step::hash_seed, kProviderId, hash_seed),
  };
}

RoundOneBroadcast RoundOneBroadcast::from_messages(
    std::span<const ProtocolMessage> messages, std::uint32_t expected_n) {
  const ProtocolMessage* by_step[4] = {nullptr, nullptr, nullptr, nullptr};
  auto slot = [](Step s) -> int {
    switch (s) {
      case Step::permuted_randoms:
        return 0;
      case Step::blinded_inputs:
        return 1;
      case Step::encrypted_blindings:
        return 2;
      case Step::hash_seed:
        return 3;
      default:
        return -1;
    }
  };
  for (const auto& msg : messages) {
    int i = slot(msg.step);
    if (i < 0) throw MessageError("unexpected step in broadcast");
    if (by_step[i]) throw MessageError("duplicate broadcast step");
    by_step[i] = &msg;
  }
  for (const auto* m : by_step) {
    if (!m) throw MessageError("incomplete broadcast");
  }

  auto extract_list = [expected_n](const ProtocolMessage& msg,
                                   Instance instance) {
    if (msg.payload.size() != expected_n) {
      throw MessageError(std::string("step ") + step_label(msg.step) +
                         " carries " + std::to_string(msg.payload.size()) +
                         " items, expected " + std::to_string(expected_n));
    }
    std::vector<Ciphertext> list;
    list.reserve(msg.payload.size());
    for (std::size_t i = 0; i < msg.payload.size(); ++i) {
      list.push_back(msg.ciphertext_at(i, instance));
    }
    return list;
  };

  RoundOneBroadcast b;
  b.permuted_randoms = extract_list(*by_step[0], Instance::cs1);
  b.blinded_inputs = extract_list(*by_step[1], Instance::cs1);
  b.encrypted_blindings = extract_list(*by_step[2], Instance::cs2);
  if (by_step[3]->payload.size() != 1) {
    throw MessageError("step 2.4 carries exactly one value");
  }
  b.hash_seed = by_step[3]->integer_at(0);
  return b;
}

Player::Player(std::uint32_t id, Bigint input, const ShuffleParams& params,
               const PublicKey& pk1, const SecretKey& sk1,
               const PublicKey& pk2, std::unique_ptr<RandomSource> rng,
               PlayerHooks hooks)
    : id_(id),
      input_(std::move(input)),
      params_(params),
      pk1_(pk1),
      sk1_(sk1),
      pk2_(pk2),
      rng_(std::move(rng)),
      hooks_(std::move(hooks)) {
  if (id_ == kProviderId) throw RangeError("player ids start at 1");
  if (!rng_) throw RangeError("player needs a randomness source");
}

Ciphertext Player::enc1(const Bigint& m) {
  ++counters_.enc;
  return encrypt(pk1_, m, *rng_);
}

Ciphertext Player::enc2(const Bigint& m) {
  ++counters_.enc;
  return encrypt(pk2_, m, *rng_);
}

std::pair<ProtocolMessage, ProtocolMessage> Player::round_one() {
  if (phase_ != Phase::init) throw StateError("round one already played");
  if (input_ < 0 || input_ >= params_.input_bound()) {
    throw RangeError("input outside the configured bound");
  }
  index_random_ = hooks_.forced_index_random
                      ? *hooks_.forced_index_random
                      : rng_->uniform_below(pk1_.modulus);
  auto msg_input = make_ciphertext_message(Step::encrypted_input, id_,
                                           enc1(input_));
  auto msg_random = make_ciphertext_message(Step::encrypted_random, id_,
                                            enc1(index_random_));
  phase_ = Phase::round1_sent;
  return {std::move(msg_input), std::move(msg_random)};
}

std::array<ProtocolMessage, 3> Player::round_two(
    const RoundOneBroadcast& broadcast) {
  if (phase_ != Phase::round1_sent) {
    throw StateError("round two before round one");
  }
  const std::size_t n = broadcast.permuted_randoms.size();
  if (n == 0 || broadcast.blinded_inputs.size() != n ||
      broadcast.encrypted_blindings.size() != n) {
    phase_ = Phase::aborted;
    throw ProtocolAbort("2.5", AbortReason::bad_message,
                        "broadcast lists have inconsistent lengths");
  }
  phase_ = Phase::round2_ready;

  // Step 2.5: decrypt the permuted randomness list.
  IndexInputs inputs;
  inputs.r1_values.reserve(n);
  for (const Ciphertext& c : broadcast.permuted_randoms) {
    ++counters_.dec;
    inputs.r1_values.push_back(decrypt(sk1_, c));
  }
  inputs.seed = broadcast.hash_seed;
  inputs.self_value = index_random_;

  // Step 2.6: unique random index from the sorted digests.
  if (hooks_.sequential_index) {
    random_index_ = id_;
  } else {
    try {
      random_index_ = my_index(inputs);
    } catch (const DuplicateRandomValueError& e) {
      phase_ = Phase::aborted;
      throw ProtocolAbort("2.5", AbortReason::duplicate_random_value,
                          e.what());
    } catch (const MissingSelfValueError& e) {
      phase_ = Phase::aborted;
      throw ProtocolAbort("2.5", AbortReason::missing_self_value, e.what());
    } catch (const HashCollisionError& e) {
      phase_ = Phase::aborted;
      throw ProtocolAbort("2.5", AbortReason::hash_collision, e.what());
    }
  }
  if (random_index_ < 1 || random_index_ > n) {
    phase_ = Phase::aborted;
    throw ProtocolAbort("2.6", AbortReason::bad_message,
                        "random index outside [1, n]");
  }

  // Step 2.7: rerandomize the selected blinded input (one fresh E1(0), one
  // ciphertext multiplication).
  ++counters_.enc;
  ++counters_.mult;
  Ciphertext selected = rerandomize(
      pk1_, broadcast.blinded_inputs[random_index_ - 1], *rng_);

  // Steps 2.8-2.9: mask the selected blinding value with fresh r3.
  mask_value_ = rng_->uniform_below(params_.blinding_bound());
  ++counters_.mult;
  Ciphertext masked =
      hom_add(pk2_, broadcast.encrypted_blindings[random_index_ - 1],
              enc2(mask_value_));
  Ciphertext mask_cipher = enc1(mask_value_);

  phase_ = Phase::done;
  return {
      make_ciphertext_message(Step::selected_ciphertext, id_,
                              std::move(selected)),
      make_ciphertext_message(Step::masked_blinding, id_, std::move(masked)),
      make_ciphertext_message(Step::encrypted_mask, id_,
                              std::move(mask_cipher)),
  };
}

std::size_t Player::random_index() const {
  if (phase_ != Phase::done) {
    throw StateError("random index not derived yet");
  }
  return random_index_;
}

Provider::Provider(std::uint32_t player_count, const ShuffleParams& params,
                   const PublicKey& pk1, const PublicKey& pk2,
                   const SecretKey& sk2, std::unique_ptr<RandomSource> rng,
                   ProviderHooks hooks)
    : n_(player_count),
      params_(params),
      pk1_(pk1),
      pk2_(pk2),
      sk2_(sk2),
      rng_(std::move(rng)),
      hooks_(hooks),
      seen_input_(player_count + 1, false),
      seen_random_(player_count + 1, false),
      seen_round2_(player_count + 1, false) {
  if (n_ == 0) throw RangeError("provider needs at least one player");
  if (!rng_) throw RangeError("provider needs a randomness source");
  received_inputs_.reserve(n_);
  received_randoms_.reserve(n_);
  round2_.reserve(n_);
}

Ciphertext Provider::enc1(const Bigint& m) {
  ++counters_.enc;
  return encrypt(pk1_, m, *rng_);
}

Ciphertext Provider::enc2(const Bigint& m) {
  ++counters_.enc;
  return encrypt(pk2_, m, *rng_);
}

void Provider::receive_round_one(const ProtocolMessage& msg) {
  if (phase_ != Phase::collecting) {
    throw StateError("round one intake is closed");
  }
  if (msg.sender < 1 || msg.sender > n_) {
    throw MessageError("round-one message from unknown player");
  }
  if (msg.payload.size() != 1) {
    throw MessageError("round-one message carries exactly one ciphertext");
  }
  const Ciphertext& c = msg.ciphertext_at(0, Instance::cs1);
  if (c.value < 1 || c.value >= pk1_.modulus_sq) {
    throw MessageError("round-one ciphertext out of range");
  }
  if (msg.step == Step::encrypted_input) {
    if (seen_input_[msg.sender]) {
      throw MessageError("duplicate step 1.1 message");
    }
    seen_input_[msg.sender] = true;
    received_inputs_.push_back(c);
  } else if (msg.step == Step::encrypted_random) {
    if (seen_random_[msg.sender]) {
      throw MessageError("duplicate step 1.2 message");
    }
    seen_random_[msg.sender] = true;
    received_randoms_.push_back(c);
  } else {
    throw MessageError("unexpected step during round one");
  }
}

RoundOneBroadcast Provider::build_broadcast() {
  if (phase_ != Phase::collecting) throw StateError("broadcast already built");
  if (received_inputs_.size() != n_ || received_randoms_.size() != n_) {
    throw MessageError("broadcast requires all round-one messages");
  }

  if (hooks_.identity_permutations) {
    pi1_.resize(n_);
    pi2_.resize(n_);
    for (std::uint32_t i = 0; i < n_; ++i) pi1_[i] = pi2_[i] = i;
  } else {
    pi1_ = rng_->permutation(n_);
    pi2_ = rng_->permutation(n_);
  }

  RoundOneBroadcast b;
  // Step 2.1: the randomness list, permuted by pi1.
  b.permuted_randoms.reserve(n_);
  for (std::uint32_t i = 0; i < n_; ++i) {
    b.permuted_randoms.push_back(received_randoms_[pi1_[i]]);
  }
  // Step 2.2: inputs permuted by pi2, blinded with fresh r2 (one encryption
  // and one ciphertext multiplication per slot).
  blindings_.reserve(n_);
  b.blinded_inputs.reserve(n_);
  for (std::uint32_t i = 0; i < n_; ++i) {
    blindings_.push_back(rng_->uniform_below(params_.blinding_bound()));
    ++counters_.mult;
    b.blinded_inputs.push_back(
        hom_add(pk1_, received_inputs_[pi2_[i]], enc1(blindings_[i])));
  }
  // Step 2.3: the blinding values under CS2, same slot order.
  b.encrypted_blindings.reserve(n_);
  for (std::uint32_t i = 0; i < n_; ++i) {
    b.encrypted_blindings.push_back(enc2(blindings_[i]));
  }
  // Step 2.4: hash seed for the index distribution.
  hash_seed_ = rng_->uniform_below(pk1_.modulus);
  b.hash_seed = hash_seed_;

  phase_ = Phase::broadcast_sent;
  return b;
}

void Provider::receive_round_two(const std::array<ProtocolMessage, 3>& triple) {
  if (phase_ != Phase::broadcast_sent) {
    throw StateError("round two intake before broadcast");
  }
  const std::uint32_t sender = triple[0].sender;
  if (sender < 1 || sender > n_) {
    throw MessageError("round-two triple from unknown player");
  }
  if (seen_round2_[sender]) {
    throw MessageError("duplicate round-two triple from player " +
                       std::to_string(sender));
  }
  const Step expected[3] = {Step::selected_ciphertext, Step::masked_blinding,
                            Step::encrypted_mask};
  const Instance instances[3] = {Instance::cs1, Instance::cs2, Instance::cs1};
  for (int i = 0; i < 3; ++i) {
    if (triple[i].step != expected[i]) {
      throw MessageError("round-two triple has steps out of order");
    }
    if (triple[i].sender != sender) {
      throw MessageError("round-two triple mixes senders");
    }
    if (triple[i].payload.size() != 1) {
      throw MessageError("round-two message carries exactly one ciphertext");
    }
    triple[i].ciphertext_at(0, instances[i]);
  }
  seen_round2_[sender] = true;
  round2_.push_back(triple);
}

ShuffleOutput Provider::finalize() {
  if (phase_ != Phase::broadcast_sent) throw StateError("nothing to finalize");
  if (round2_.size() != n_) {
    throw MessageError("finalize requires one triple per player");
  }

  ShuffleOutput out;
  out.ciphertexts.reserve(n_);
  for (const auto& triple : round2_) {
    // Step 2.10: recover r2 + r3, negate it in the plaintext space and
    // multiply it back in together with E1(r3); the blindings cancel.
    ++counters_.dec;
    Bigint masked_sum = decrypt(sk2_, triple[1].ciphertext_at(0, Instance::cs2));
    Bigint negated = (pk1_.modulus - masked_sum) % pk1_.modulus;
    Ciphertext unblind = enc1(negated);
    counters_.mult += 2;
    Ciphertext result =
        hom_add(pk1_,
                hom_add(pk1_, triple[0].ciphertext_at(0, Instance::cs1),
                        unblind),
                triple[2].ciphertext_at(0, Instance::cs1));
    out.ciphertexts.push_back(std::move(result));
  }
  phase_ = Phase::finalized;
  return out;
}

}  // namespace shuffle
