#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "shuffle/counters.hpp"
#include "shuffle/paillier.hpp"
#include "shuffle/random.hpp"

namespace shuffle {

// Re-encryption mix network baseline: a cascade of mixes, each permuting
// and rerandomizing a full batch of CS1 ciphertexts under the players'
// public key. Mixes hold no secret key.

struct MixBatch {
  std::vector<Ciphertext> ciphertexts;
};

class MixNode {
 public:
  MixNode(std::uint32_t id, const PublicKey& pk1,
          std::unique_ptr<RandomSource> rng);

  // Fresh uniform permutation of the rerandomized batch. Counts one
  // encryption and one multiplication per element.
  MixBatch mix(const MixBatch& batch);

  std::uint32_t id() const { return id_; }
  const PublicKey& key() const;
  const OpCounters& counters() const { return counters_; }

 private:
  std::uint32_t id_;
  PublicKey pk1_;
  std::unique_ptr<RandomSource> rng_;
  OpCounters counters_;
};

struct CascadeResult {
  MixBatch batch;
  RunReport report;  // aggregate mix work under the provider counters
};

// Sequential application of every node to the batch. Communication is
// modeled per hop: one batch message of n ciphertexts.
CascadeResult cascade(std::vector<MixNode>& nodes, const MixBatch& input,
                      double latency_us = 0.0,
                      double bandwidth_mb_per_s = 0.0);

}  // namespace shuffle
