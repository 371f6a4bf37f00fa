#pragma once

#include <vector>

#include "shuffle/bigint.hpp"
#include "shuffle/sha256.hpp"

namespace shuffle {

// Random index distribution: every player hashes each received randomness
// value concatenated with the provider's seed, sorts the digests, and takes
// the position of its own digest as its index. Distinct random inputs give
// each player a distinct, uniformly distributed index without anyone
// choosing it.

struct IndexInputs {
  std::vector<Bigint> r1_values;  // decrypted, permuted randomness values
  Bigint seed;                    // provider's hash seed
  Bigint self_value;              // the calling player's own randomness
};

struct HashRecord {
  Digest digest;                // H(serialize(r1_j) || serialize(seed))
  std::size_t source_position;  // index j in the received sequence

  bool operator==(const HashRecord&) const = default;
};

// Digest of one (value, seed) pair over the canonical length-prefixed
// big-endian integer encoding.
Digest index_hash(const Bigint& value, const Bigint& seed);

// One record per received value, in received order. Throws
// DuplicateRandomValueError when the values are not pairwise distinct.
std::vector<HashRecord> build_hashes(const IndexInputs& inputs);

// Ascending by digest as a 256-bit big-endian unsigned integer. Throws
// HashCollisionError on equal digests.
std::vector<HashRecord> sort_hashes(std::vector<HashRecord> records);

// 1-based position of the caller's digest in the sorted digest sequence.
// Throws MissingSelfValueError when self_value is absent from r1_values.
std::size_t my_index(const IndexInputs& inputs);

}  // namespace shuffle
