#include "shuffle/index_distribution.hpp"

#include <algorithm>
#include <set>

#include "shuffle/errors.hpp"

namespace shuffle {

Digest index_hash(const Bigint& value, const Bigint& seed) {
  std::vector<std::uint8_t> buf;
  append_integer(buf, value);
  append_integer(buf, seed);
  return sha256(buf);
}

std::vector<HashRecord> build_hashes(const IndexInputs& inputs) {
  std::set<Bigint> seen;
  for (const Bigint& v : inputs.r1_values) {
    if (!seen.insert(v).second) {
      throw DuplicateRandomValueError(
          "randomness values are not pairwise distinct");
    }
  }
  std::vector<HashRecord> records;
  records.reserve(inputs.r1_values.size());
  for (std::size_t j = 0; j < inputs.r1_values.size(); ++j) {
    records.push_back(HashRecord{index_hash(inputs.r1_values[j], inputs.seed), j});
  }
  return records;
}

std::vector<HashRecord> sort_hashes(std::vector<HashRecord> records) {
  std::sort(records.begin(), records.end(),
            [](const HashRecord& a, const HashRecord& b) {
              return compare_digests(a.digest, b.digest) < 0;
            });
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (compare_digests(records[i - 1].digest, records[i].digest) == 0) {
      throw HashCollisionError("digest collision in index distribution");
    }
  }
  return records;
}

std::size_t my_index(const IndexInputs& inputs) {
  bool present = false;
  for (const Bigint& v : inputs.r1_values) {
    if (v == inputs.self_value) {
      present = true;
      break;
    }
  }
  if (!present) {
    throw MissingSelfValueError(
        "own randomness missing from the received list");
  }
  const Digest self = index_hash(inputs.self_value, inputs.seed);
  auto sorted = sort_hashes(build_hashes(inputs));
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (compare_digests(sorted[i].digest, self) == 0) return i + 1;
  }
  // Unreachable: self_value is in r1_values, so its digest is in the list.
  throw MissingSelfValueError("own digest missing after sorting");
}

}  // namespace shuffle
