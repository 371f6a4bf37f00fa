#include "shuffle/mixnet.hpp"

#include <chrono>

#include "shuffle/errors.hpp"

namespace shuffle {

MixNode::MixNode(std::uint32_t id, const PublicKey& pk1,
                 std::unique_ptr<RandomSource> rng)
    : id_(id), pk1_(pk1), rng_(std::move(rng)) {
  if (!rng_) throw RangeError("mix node needs a randomness source");
}

MixBatch MixNode::mix(const MixBatch& batch) {
  const std::size_t n = batch.ciphertexts.size();
  if (n == 0) throw RangeError("mix: empty batch");
  for (const Ciphertext& c : batch.ciphertexts) {
    if (c.instance != pk1_.instance) {
      throw InstanceMismatchError("mix: batch instance mismatch");
    }
    if (c.value < 1 || c.value >= pk1_.modulus_sq) {
      throw RangeError("mix: ciphertext does not match the node's modulus");
    }
  }
  auto perm = rng_->permutation(static_cast<std::uint32_t>(n));
  MixBatch out;
  out.ciphertexts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    counters_.enc += 1;
    counters_.mult += 1;
    out.ciphertexts.push_back(
        rerandomize(pk1_, batch.ciphertexts[perm[i]], *rng_));
  }
  return out;
}

const PublicKey& MixNode::key() const { return pk1_; }

CascadeResult cascade(std::vector<MixNode>& nodes, const MixBatch& input,
                      double latency_us, double bandwidth_mb_per_s) {
  if (nodes.empty()) throw RangeError("cascade: needs at least one mix");
  if (input.ciphertexts.empty()) throw RangeError("cascade: empty batch");

  using Clock = std::chrono::steady_clock;
  CascadeResult result;
  result.report.mode = Mode::mixnet;
  result.report.mixes = static_cast<unsigned>(nodes.size());
  result.report.n = static_cast<std::uint32_t>(input.ciphertexts.size());
  result.report.key_bits_cs1 =
      static_cast<unsigned>(nodes.front().key().bits());
  result.report.key_bits_cs2 = 0;

  auto t0 = Clock::now();
  MixBatch batch = input;
  for (MixNode& node : nodes) {
    batch = node.mix(batch);
  }
  result.report.compute_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - t0).count();

  OpCounters total;
  for (const MixNode& node : nodes) total += node.counters();
  // One batch message per hop: into each mix and on to the recipient.
  const std::uint64_t hops = nodes.size() + 1;
  const std::uint64_t item_bytes =
      1 + 4 + nodes.front().key().ciphertext_width();
  total.bytes_sent = nodes.size() * result.report.n * item_bytes;
  result.report.provider = total;
  result.report.comm_ms = static_cast<double>(hops) * latency_us / 1000.0;
  if (bandwidth_mb_per_s > 0) {
    result.report.comm_ms +=
        static_cast<double>(hops * result.report.n * item_bytes) /
        (bandwidth_mb_per_s * 1e6) * 1000.0;
  }
  result.report.wall_ms = result.report.compute_ms + result.report.comm_ms;
  result.batch = std::move(batch);
  return result;
}

}  // namespace shuffle
