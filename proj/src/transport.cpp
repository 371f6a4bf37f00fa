#include "shuffle/transport.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "shuffle/errors.hpp"

namespace shuffle {

void Transcript::write(std::ostream& os) const {
  for (const auto& frame : frames) {
    std::uint8_t len[4] = {
        static_cast<std::uint8_t>(frame.size() >> 24),
        static_cast<std::uint8_t>(frame.size() >> 16),
        static_cast<std::uint8_t>(frame.size() >> 8),
        static_cast<std::uint8_t>(frame.size()),
    };
    os.write(reinterpret_cast<const char*>(len), 4);
    os.write(reinterpret_cast<const char*>(frame.data()),
             static_cast<std::streamsize>(frame.size()));
  }
}

Transcript Transcript::read(std::istream& is) {
  Transcript t;
  for (;;) {
    std::uint8_t len[4];
    is.read(reinterpret_cast<char*>(len), 4);
    if (is.gcount() == 0 && is.eof()) break;
    if (is.gcount() != 4) throw MessageError("truncated transcript frame");
    std::size_t size = (std::size_t{len[0]} << 24) |
                       (std::size_t{len[1]} << 16) |
                       (std::size_t{len[2]} << 8) | std::size_t{len[3]};
    if (size > (std::size_t{1} << 30)) {
      throw MessageError("transcript frame length is implausibly large");
    }
    std::vector<std::uint8_t> frame(size);
    is.read(reinterpret_cast<char*>(frame.data()),
            static_cast<std::streamsize>(size));
    if (static_cast<std::size_t>(is.gcount()) != size) {
      throw MessageError("truncated transcript frame");
    }
    t.frames.push_back(std::move(frame));
  }
  return t;
}

void Transcript::write_file(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open transcript file for writing: " + path);
  write(os);
  if (!os) throw Error("failed writing transcript file: " + path);
}

Transcript Transcript::read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open transcript file: " + path);
  return read(is);
}

Transport::Transport(WireWidths widths, double latency_us,
                     double bandwidth_mb_per_s)
    : widths_(widths),
      latency_us_(latency_us),
      bandwidth_mb_per_s_(bandwidth_mb_per_s) {}

void Transport::register_participant(std::uint32_t id) {
  queues_.try_emplace(id);
  bytes_by_sender_.try_emplace(id, 0);
}

void Transport::send(const ProtocolMessage& msg, std::uint32_t recipient) {
  auto it = queues_.find(recipient);
  if (it == queues_.end()) {
    throw MessageError("send to unregistered participant " +
                       std::to_string(recipient));
  }
  auto frame = msg.serialize(widths_);
  std::uint64_t payload = msg.payload_bytes(widths_);
  bytes_by_sender_[msg.sender] += payload;
  total_bytes_ += payload;
  ++message_count_;
  // Deliver the re-parsed frame: recipients see exactly the recorded bytes.
  it->second.push_back(ProtocolMessage::parse(frame));
  transcript_.frames.push_back(std::move(frame));
}

std::vector<ProtocolMessage> Transport::drain(std::uint32_t recipient) {
  auto it = queues_.find(recipient);
  if (it == queues_.end()) {
    throw MessageError("drain of unregistered participant " +
                       std::to_string(recipient));
  }
  std::vector<ProtocolMessage> out;
  out.swap(it->second);
  return out;
}

std::uint64_t Transport::bytes_sent_by(std::uint32_t sender) const {
  auto it = bytes_by_sender_.find(sender);
  return it == bytes_by_sender_.end() ? 0 : it->second;
}

double Transport::comm_ms() const {
  double ms = static_cast<double>(message_count_) * latency_us_ / 1000.0;
  if (bandwidth_mb_per_s_ > 0) {
    ms += static_cast<double>(total_bytes_) /
          (bandwidth_mb_per_s_ * 1e6) * 1000.0;
  }
  return ms;
}

ReplayCounters replay_counters(const Transcript& transcript) {
  ReplayCounters result;
  // Per-step work on the sender side of each message:
  //   1.1 / 1.2 / 2.9: one encryption each
  //   2.2: one encryption and one multiplication per item, counted once
  //        even though the identical list goes to every player
  //   2.3: one encryption per item, counted once
  //   2.7 / 2.8: one encryption and one multiplication
  // Receiver side: a 2.1 delivery means its recipient decrypts every item.
  // Triples (2.7/2.8/2.9) imply one decryption, one encryption and two
  // multiplications for the provider at step 2.10.
  bool counted_2_2 = false;
  bool counted_2_3 = false;
  std::uint64_t deliveries_2_1 = 0;
  std::uint64_t items_2_1 = 0;
  std::uint64_t triples = 0;
  std::vector<std::uint32_t> player_order;

  for (const auto& frame : transcript.frames) {
    ProtocolMessage msg = ProtocolMessage::parse(frame);
    // The frame layout fixes each item's serialized size: 1-byte tag,
    // 4-byte length, padded magnitude. Recompute payload bytes directly.
    std::uint64_t payload_bytes = frame.size() - 9;

    switch (msg.step) {
      case Step::encrypted_input:
        result.players[msg.sender].enc += 1;
        result.players[msg.sender].bytes_sent += payload_bytes;
        player_order.push_back(msg.sender);
        break;
      case Step::encrypted_random:
        result.players[msg.sender].enc += 1;
        result.players[msg.sender].bytes_sent += payload_bytes;
        break;
      case Step::permuted_randoms:
        result.provider.bytes_sent += payload_bytes;
        ++deliveries_2_1;
        items_2_1 = msg.payload.size();
        break;
      case Step::blinded_inputs:
        result.provider.bytes_sent += payload_bytes;
        if (!counted_2_2) {
          result.provider.enc += msg.payload.size();
          result.provider.mult += msg.payload.size();
          counted_2_2 = true;
        }
        break;
      case Step::encrypted_blindings:
        result.provider.bytes_sent += payload_bytes;
        if (!counted_2_3) {
          result.provider.enc += msg.payload.size();
          counted_2_3 = true;
        }
        break;
      case Step::hash_seed:
        result.provider.bytes_sent += payload_bytes;
        break;
      case Step::selected_ciphertext:
        result.players[msg.sender].enc += 1;
        result.players[msg.sender].mult += 1;
        result.players[msg.sender].bytes_sent += payload_bytes;
        ++triples;
        break;
      case Step::masked_blinding:
        result.players[msg.sender].enc += 1;
        result.players[msg.sender].mult += 1;
        result.players[msg.sender].bytes_sent += payload_bytes;
        break;
      case Step::encrypted_mask:
        result.players[msg.sender].enc += 1;
        result.players[msg.sender].bytes_sent += payload_bytes;
        break;
    }
  }

  result.n = static_cast<std::uint32_t>(player_order.size());
  // Step 2.5: each 2.1 delivery makes its recipient decrypt the full list.
  // Deliveries are one per player; attribute them in player order.
  for (std::uint64_t i = 0; i < deliveries_2_1 && i < player_order.size();
       ++i) {
    result.players[player_order[i]].dec += items_2_1;
  }
  // Step 2.10.
  result.provider.dec += triples;
  result.provider.enc += triples;
  result.provider.mult += 2 * triples;
  return result;
}

}  // namespace shuffle
