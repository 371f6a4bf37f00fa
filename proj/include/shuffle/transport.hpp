#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "shuffle/counters.hpp"
#include "shuffle/message.hpp"

namespace shuffle {

// Recorded message log: one serialized message per frame, in send order.
// File form: each frame preceded by a 4-byte big-endian frame length.
struct Transcript {
  std::vector<std::vector<std::uint8_t>> frames;

  void write(std::ostream& os) const;
  static Transcript read(std::istream& is);
  void write_file(const std::string& path) const;
  static Transcript read_file(const std::string& path);
};

// In-process message passing between registered participants. Serializes
// every message (the transcript is the byte-exact wire log), accumulates
// per-sender payload traffic, and models communication time as
// message count * latency + bytes / bandwidth.
class Transport {
 public:
  Transport(WireWidths widths, double latency_us = 0.0,
            double bandwidth_mb_per_s = 0.0);  // bandwidth 0 = unlimited

  void register_participant(std::uint32_t id);
  void send(const ProtocolMessage& msg, std::uint32_t recipient);
  std::vector<ProtocolMessage> drain(std::uint32_t recipient);

  const Transcript& transcript() const { return transcript_; }
  std::uint64_t bytes_sent_by(std::uint32_t sender) const;
  std::uint64_t message_count() const { return message_count_; }
  std::uint64_t total_bytes() const { return total_bytes_; }
  double comm_ms() const;

 private:
  WireWidths widths_;
  double latency_us_;
  double bandwidth_mb_per_s_;
  std::map<std::uint32_t, std::vector<ProtocolMessage>> queues_;
  std::map<std::uint32_t, std::uint64_t> bytes_by_sender_;
  Transcript transcript_;
  std::uint64_t message_count_ = 0;
  std::uint64_t total_bytes_ = 0;
};

// Reconstructs a shuffle run's per-party counters from a transcript alone.
// Traffic is summed from the frames; operation counts follow from the
// message structure (each step implies a fixed amount of work on its
// sender or receiver side), so live counters can be cross-checked against
// the recorded wire log.
struct ReplayCounters {
  std::uint32_t n = 0;
  OpCounters provider;
  std::map<std::uint32_t, OpCounters> players;
};

ReplayCounters replay_counters(const Transcript& transcript);

}  // namespace shuffle
