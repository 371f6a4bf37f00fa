#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <set>

#include "shuffle/errors.hpp"
#include "shuffle/mixnet.hpp"

using namespace shuffle;

namespace {

const KeyPair& shared_key() {
  static KeyPair kp = [] {
    SeededRandom rng(42);
    return keygen(128, Instance::cs1, rng);
  }();
  return kp;
}

MixBatch encrypt_batch(const std::vector<Bigint>& values, RandomSource& rng) {
  MixBatch batch;
  for (const Bigint& v : values) {
    batch.ciphertexts.push_back(encrypt(shared_key().pub, v, rng));
  }
  return batch;
}

std::vector<Bigint> decrypt_sorted(const MixBatch& batch) {
  std::vector<Bigint> out;
  for (const auto& c : batch.ciphertexts) {
    out.push_back(decrypt(shared_key().sec, c));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("a mix keeps the multiset and renews every ciphertext") {
  SeededRandom rng(1);
  MixBatch batch = encrypt_batch({5, 7, 9}, rng);
  MixNode node(1, shared_key().pub, std::make_unique<SeededRandom>(2));
  MixBatch mixed = node.mix(batch);
  CHECK(decrypt_sorted(mixed) == std::vector<Bigint>{5, 7, 9});
  for (const auto& in : batch.ciphertexts) {
    for (const auto& out : mixed.ciphertexts) {
      CHECK(in.value != out.value);
    }
  }
  CHECK(node.counters().enc == 3);
  CHECK(node.counters().mult == 3);
}

TEST_CASE("single-element batch") {
  SeededRandom rng(3);
  MixBatch batch = encrypt_batch({11}, rng);
  MixNode node(1, shared_key().pub, std::make_unique<SeededRandom>(4));
  MixBatch mixed = node.mix(batch);
  REQUIRE(mixed.ciphertexts.size() == 1);
  CHECK(mixed.ciphertexts[0].value != batch.ciphertexts[0].value);
  CHECK(decrypt(shared_key().sec, mixed.ciphertexts[0]) == 11);
}

TEST_CASE("identically seeded nodes mix identically") {
  SeededRandom rng(5);
  MixBatch batch = encrypt_batch({1, 2, 3, 4, 5}, rng);
  MixNode a(1, shared_key().pub, std::make_unique<SeededRandom>(99));
  MixNode b(1, shared_key().pub, std::make_unique<SeededRandom>(99));
  MixBatch ma = a.mix(batch);
  MixBatch mb = b.mix(batch);
  REQUIRE(ma.ciphertexts.size() == mb.ciphertexts.size());
  for (std::size_t i = 0; i < ma.ciphertexts.size(); ++i) {
    CHECK(ma.ciphertexts[i].value == mb.ciphertexts[i].value);
  }
}

TEST_CASE("mix rejects bad batches") {
  MixNode node(1, shared_key().pub, std::make_unique<SeededRandom>(6));
  CHECK_THROWS_AS(node.mix(MixBatch{}), RangeError);

  SeededRandom rng(7);
  KeyPair other = keygen(64, Instance::cs2, rng);
  MixBatch foreign;
  foreign.ciphertexts.push_back(encrypt(other.pub, 1, rng));
  CHECK_THROWS_AS(node.mix(foreign), InstanceMismatchError);
}

TEST_CASE("cascade preserves the multiset and counts its work") {
  SeededRandom rng(8);
  std::vector<Bigint> values;
  for (int i = 0; i < 16; ++i) values.push_back(rng.uniform_bits(40));
  MixBatch batch = encrypt_batch(values, rng);

  std::vector<MixNode> nodes;
  for (std::uint32_t id = 1; id <= 3; ++id) {
    nodes.emplace_back(id, shared_key().pub,
                       std::make_unique<SeededRandom>(100 + id));
  }
  CascadeResult result = cascade(nodes, batch);
  std::vector<Bigint> expected = values;
  std::sort(expected.begin(), expected.end());
  CHECK(decrypt_sorted(result.batch) == expected);
  CHECK(result.report.mode_string() == "mixnet3");
  CHECK(result.report.n == 16);
  CHECK(result.report.provider.enc == 3 * 16);
  CHECK(result.report.provider.mult == 3 * 16);
  CHECK(result.report.wall_ms >= result.report.compute_ms);
}

TEST_CASE("a five-mix cascade performs 5n rerandomizations") {
  SeededRandom rng(9);
  MixBatch batch = encrypt_batch({1, 2, 3, 4, 5, 6, 7}, rng);
  std::vector<MixNode> nodes;
  for (std::uint32_t id = 1; id <= 5; ++id) {
    nodes.emplace_back(id, shared_key().pub,
                       std::make_unique<SeededRandom>(200 + id));
  }
  CascadeResult result = cascade(nodes, batch);
  CHECK(result.report.provider.enc == 5 * 7);
  CHECK(result.report.provider.mult == 5 * 7);
  std::uint64_t total = 0;
  for (const auto& node : nodes) total += node.counters().enc;
  CHECK(total == 5 * 7);
}

TEST_CASE("an empty cascade is rejected") {
  SeededRandom rng(10);
  MixBatch batch = encrypt_batch({1}, rng);
  std::vector<MixNode> none;
  CHECK_THROWS_AS(cascade(none, batch), RangeError);
}
