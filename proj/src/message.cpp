#include "shuffle/message.hpp"

#include "shuffle/errors.hpp"

namespace shuffle {

const char* step_label(Step step) {
  switch (step) {
    case Step::encrypted_input:
      return "1.1";
    case Step::encrypted_random:
      return "1.2";
    case Step::permuted_randoms:
      return "2.1";
    case Step::blinded_inputs:
      return "2.2";
    case Step::encrypted_blindings:
      return "2.3";
    case Step::hash_seed:
      return "2.4";
    case Step::selected_ciphertext:
      return "2.7";
    case Step::masked_blinding:
      return "2.8";
    case Step::encrypted_mask:
      return "2.9";
  }
  return "?";
}

bool is_valid_step(std::uint8_t code) {
  switch (code) {
    case 0x11:
    case 0x12:
    case 0x21:
    case 0x22:
    case 0x23:
    case 0x24:
    case 0x27:
    case 0x28:
    case 0x29:
      return true;
    default:
      return false;
  }
}

WireWidths WireWidths::from_keys(const PublicKey& pk1, const PublicKey& pk2) {
  WireWidths w;
  w.plaintext_cs1 = pk1.plaintext_width();
  w.ciphertext_cs1 = pk1.ciphertext_width();
  w.ciphertext_cs2 = pk2.ciphertext_width();
  return w;
}

namespace {

std::size_t item_width(const PayloadItem& item, const WireWidths& widths) {
  if (std::holds_alternative<Bigint>(item)) return widths.plaintext_cs1;
  const auto& c = std::get<Ciphertext>(item);
  return c.instance == Instance::cs1 ? widths.ciphertext_cs1
                                     : widths.ciphertext_cs2;
}

}  // namespace

std::vector<std::uint8_t> ProtocolMessage::serialize(
    const WireWidths& widths) const {
  std::vector<std::uint8_t> out;
  out.push_back(static_cast<std::uint8_t>(step));
  append_u32_be(out, sender);
  append_u32_be(out, static_cast<std::uint32_t>(payload.size()));
  for (const PayloadItem& item : payload) {
    if (const Bigint* v = std::get_if<Bigint>(&item)) {
      out.push_back(0x00);
      append_integer_padded(out, *v, widths.plaintext_cs1);
    } else {
      const auto& c = std::get<Ciphertext>(item);
      append_ciphertext(out, c, item_width(item, widths));
    }
  }
  return out;
}

ProtocolMessage ProtocolMessage::parse(std::span<const std::uint8_t> bytes) {
  ByteReader reader(bytes);
  std::uint8_t code = reader.u8();
  if (!is_valid_step(code)) throw MessageError("unknown step code");
  ProtocolMessage msg;
  msg.step = static_cast<Step>(code);
  msg.sender = reader.u32_be();
  std::uint32_t count = reader.u32_be();
  if (count > reader.remaining() / 5) {  // tag + length prefix per item
    throw MessageError("item count exceeds the frame size");
  }
  msg.payload.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    std::uint8_t tag = reader.u8();
    if (tag == 0x00) {
      msg.payload.emplace_back(reader.integer());
    } else if (tag == static_cast<std::uint8_t>(Instance::cs1) ||
               tag == static_cast<std::uint8_t>(Instance::cs2)) {
      msg.payload.emplace_back(
          Ciphertext{reader.integer(), static_cast<Instance>(tag)});
    } else {
      throw MessageError("unknown payload tag");
    }
  }
  if (!reader.done()) throw MessageError("trailing bytes in message");
  return msg;
}

std::uint64_t ProtocolMessage::payload_bytes(const WireWidths& widths) const {
  std::uint64_t total = 0;
  for (const PayloadItem& item : payload) {
    total += 1 + 4 + item_width(item, widths);
  }
  return total;
}

const Ciphertext& ProtocolMessage::ciphertext_at(std::size_t i,
                                                 Instance expected) const {
  if (i >= payload.size()) throw MessageError("payload index out of range");
  const Ciphertext* c = std::get_if<Ciphertext>(&payload[i]);
  if (!c) throw MessageError("expected a ciphertext payload item");
  if (c->instance != expected) {
    throw InstanceMismatchError(std::string("payload item under ") +
                                instance_name(c->instance) + ", expected " +
                                instance_name(expected));
  }
  return *c;
}

const Bigint& ProtocolMessage::integer_at(std::size_t i) const {
  if (i >= payload.size()) throw MessageError("payload index out of range");
  const Bigint* v = std::get_if<Bigint>(&payload[i]);
  if (!v) throw MessageError("expected a plain integer payload item");
  return *v;
}

ProtocolMessage make_ciphertext_message(Step step, std::uint32_t sender,
                                        Ciphertext c) {
  ProtocolMessage msg;
  msg.step = step;
  msg.sender = sender;
  msg.payload.emplace_back(std::move(c));
  return msg;
}

ProtocolMessage make_list_message(Step step, std::uint32_t sender,
                                  std::vector<Ciphertext> list) {
  ProtocolMessage msg;
  msg.step = step;
  msg.sender = sender;
  msg.payload.reserve(list.size());
  for (auto& c : list) msg.payload.emplace_back(std::move(c));
  return msg;
}

ProtocolMessage make_integer_message(Step step, std::uint32_t sender,
                                     Bigint value) {
  ProtocolMessage msg;
  msg.step = step;
  msg.sender = sender;
  msg.payload.emplace_back(std::move(value));
  return msg;
}

}  // namespace shuffle
