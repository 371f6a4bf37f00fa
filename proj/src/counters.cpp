#include "shuffle/counters.hpp"

#include <sstream>

#include "shuffle/errors.hpp"

namespace shuffle {

OpCounters RunReport::player_total() const {
  OpCounters total;
  for (const auto& p : players) total += p;
  return total;
}

std::string RunReport::mode_string() const {
  if (mode == Mode::shuffle) return "shuffle";
  return "mixnet" + std::to_string(mixes);
}

SerializedLengths SerializedLengths::from_key_bits(unsigned bits_cs1,
                                                   unsigned bits_cs2) {
  // A modulus of k bits occupies ceil(k/8) bytes; its square has 2k-1 or 2k
  // bits, which is the same byte count either way since 2k-1 is odd.
  auto bytes = [](unsigned bits) { return (std::uint64_t{bits} + 7) / 8; };
  SerializedLengths l;
  l.ciphertext_cs1 = 5 + bytes(2 * bits_cs1);
  l.ciphertext_cs2 = 5 + bytes(2 * bits_cs2);
  l.plaintext_cs1 = 5 + bytes(bits_cs1);
  return l;
}

std::string ConformanceResult::summary() const {
  std::ostringstream os;
  os << "provider enc=" << expected_provider.enc
     << " dec=" << expected_provider.dec << " mult=" << expected_provider.mult
     << " bytes=" << expected_provider.bytes_sent << "; player enc="
     << expected_player.enc << " dec=" << expected_player.dec
     << " mult=" << expected_player.mult
     << " bytes=" << expected_player.bytes_sent;
  if (pass) {
    os << "; all counters match";
  } else {
    for (const auto& m : mismatches) os << "\n  mismatch: " << m;
  }
  return os.str();
}

ConformanceResult count_conformance(const RunReport& report) {
  if (report.mode != Mode::shuffle) {
    throw RangeError("count_conformance: only defined for shuffle runs");
  }
  const std::uint64_t n = report.n;
  const auto lengths =
      SerializedLengths::from_key_bits(report.key_bits_cs1, report.key_bits_cs2);

  ConformanceResult result;
  result.expected_provider.enc = 3 * n;
  result.expected_provider.dec = n;
  result.expected_provider.mult = 3 * n;
  result.expected_provider.bytes_sent = 2 * n * n * lengths.ciphertext_cs1 +
                                        n * n * lengths.ciphertext_cs2 +
                                        n * lengths.plaintext_cs1;
  result.expected_player.enc = 5;
  result.expected_player.dec = n;
  result.expected_player.mult = 2;
  result.expected_player.bytes_sent =
      4 * lengths.ciphertext_cs1 + lengths.ciphertext_cs2;

  auto check = [&result](const std::string& who, const char* what,
                         std::uint64_t expected, std::uint64_t actual) {
    if (expected != actual) {
      std::ostringstream os;
      os << who << " " << what << ": expected " << expected << ", got "
         << actual;
      result.mismatches.push_back(os.str());
      result.pass = false;
    }
  };

  check("provider", "enc", result.expected_provider.enc, report.provider.enc);
  check("provider", "dec", result.expected_provider.dec, report.provider.dec);
  check("provider", "mult", result.expected_provider.mult,
        report.provider.mult);
  check("provider", "bytes", result.expected_provider.bytes_sent,
        report.provider.bytes_sent);
  if (report.players.size() != n) {
    result.pass = false;
    result.mismatches.push_back("player counter list has wrong length");
  }
  for (std::size_t i = 0; i < report.players.size(); ++i) {
    const std::string who = "player " + std::to_string(i + 1);
    check(who, "enc", result.expected_player.enc, report.players[i].enc);
    check(who, "dec", result.expected_player.dec, report.players[i].dec);
    check(who, "mult", result.expected_player.mult, report.players[i].mult);
    check(who, "bytes", result.expected_player.bytes_sent,
          report.players[i].bytes_sent);
  }
  return result;
}

}  // namespace shuffle
