#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <set>

#include "shuffle/bench.hpp"
#include "shuffle/errors.hpp"
#include "shuffle/runner.hpp"
#include "shuffle/stats.hpp"

using namespace shuffle;

namespace {

ShuffleParams small_params() {
  ShuffleParams params;
  params.key_bits_cs1 = 64;
  params.key_bits_cs2 = 62;
  params.input_bound_bits = 16;
  params.sigma = 16;
  return params;
}

const KeySetup& small_setup() {
  static KeySetup setup = [] {
    SeededRandom rng(31337);
    return make_key_setup(small_params(), rng);
  }();
  return setup;
}

ShuffleRun seeded_run(std::uint32_t n, std::uint64_t seed,
                      double latency_us = 0.0) {
  SeededRandom rng(seed);
  std::vector<Bigint> inputs;
  for (std::uint32_t i = 0; i < n; ++i) {
    inputs.push_back(rng.uniform_below(small_setup().params.input_bound()));
  }
  RunOptions options;
  options.seed = seed;
  options.latency_us = latency_us;
  return run_shuffle(small_setup(), inputs, options);
}

}  // namespace

TEST_CASE("transport queues, frames and rejects strangers") {
  const KeySetup& s = small_setup();
  WireWidths widths = WireWidths::from_keys(s.cs1.pub, s.cs2.pub);
  Transport transport(widths);
  transport.register_participant(1);
  transport.register_participant(2);

  SeededRandom rng(1);
  auto msg1 = make_ciphertext_message(Step::encrypted_input, 1,
                                      encrypt(s.cs1.pub, 5, rng));
  auto msg2 = make_ciphertext_message(Step::encrypted_random, 2,
                                      encrypt(s.cs1.pub, 6, rng));
  transport.send(msg1, 2);
  transport.send(msg2, 1);
  CHECK(transport.transcript().frames.size() == 2);
  CHECK(transport.message_count() == 2);
  CHECK(transport.drain(1).size() == 1);
  CHECK(transport.drain(1).empty());

  CHECK_THROWS_AS(transport.send(msg1, 9), MessageError);
  CHECK_THROWS_AS(transport.drain(9), MessageError);

  // Frames replay into the original messages.
  ProtocolMessage parsed = ProtocolMessage::parse(transport.transcript().frames[0]);
  CHECK(parsed.step == Step::encrypted_input);
  CHECK(parsed.sender == 1);
  CHECK(parsed.ciphertext_at(0, Instance::cs1).value ==
        msg1.ciphertext_at(0, Instance::cs1).value);
}

TEST_CASE("message wire layout is bit-exact") {
  // Step code, 4-byte big-endian sender, 4-byte item count, then items as
  // 1-byte tag + 4-byte length + padded big-endian magnitude.
  WireWidths widths;
  widths.plaintext_cs1 = 8;
  widths.ciphertext_cs1 = 16;
  widths.ciphertext_cs2 = 16;

  ProtocolMessage seed_msg = make_integer_message(Step::hash_seed, 0, 5);
  CHECK(to_hex(seed_msg.serialize(widths)) ==
        "240000000000000001" "00" "00000008" "0000000000000005");

  ProtocolMessage cipher_msg = make_ciphertext_message(
      Step::selected_ciphertext, 3, Ciphertext{0x0102, Instance::cs1});
  CHECK(to_hex(cipher_msg.serialize(widths)) ==
        "270000000300000001" "01" "00000010"
        "00000000000000000000000000000102");

  ProtocolMessage parsed = ProtocolMessage::parse(cipher_msg.serialize(widths));
  CHECK(parsed.step == Step::selected_ciphertext);
  CHECK(parsed.sender == 3);
  CHECK(parsed.ciphertext_at(0, Instance::cs1).value == 0x0102);
}

TEST_CASE("every player receives byte-identical broadcast copies") {
  ShuffleRun run = seeded_run(4, 555);
  std::map<Step, std::set<std::string>> contents;
  for (const auto& frame : run.transcript.frames) {
    ProtocolMessage msg = ProtocolMessage::parse(frame);
    if (msg.sender == kProviderId) {
      contents[msg.step].insert(to_hex(frame));
    }
  }
  REQUIRE(contents.size() == 4);  // steps 2.1-2.4
  for (const auto& [step, copies] : contents) {
    CAPTURE(step_label(step));
    CHECK(copies.size() == 1);  // n sends, one distinct byte string
  }
}

TEST_CASE("latency model lower-bounds the communication time") {
  ShuffleRun run = seeded_run(4, 99, /*latency_us=*/5000);
  // 2n round-one, 4n broadcast and 3n round-two messages.
  const std::uint64_t messages = 9 * 4;
  CHECK(run.report.comm_ms >= 5.0 * static_cast<double>(messages));
  CHECK(run.report.wall_ms >= run.report.compute_ms);
}

TEST_CASE("counter conformance holds for a range of player counts") {
  for (std::uint32_t n : {1u, 2u, 4u, 8u, 16u, 32u}) {
    ShuffleRun run = seeded_run(n, 1000 + n);
    ConformanceResult result = count_conformance(run.report);
    INFO(result.summary());
    CHECK(result.pass);
  }
}

TEST_CASE("conformance totals instantiate the closed forms") {
  ShuffleRun run4 = seeded_run(4, 2004);
  CHECK(run4.report.provider.enc == 12);
  CHECK(run4.report.provider.dec == 4);
  CHECK(run4.report.provider.mult == 12);
  for (const auto& p : run4.report.players) {
    CHECK(p.enc == 5);
    CHECK(p.dec == 4);
    CHECK(p.mult == 2);
  }

  ShuffleRun run1 = seeded_run(1, 2001);
  CHECK(run1.report.provider.enc == 3);
  CHECK(run1.report.provider.dec == 1);
  CHECK(run1.report.provider.mult == 3);
  CHECK(run1.report.players[0].enc == 5);
  CHECK(run1.report.players[0].dec == 1);
  CHECK(run1.report.players[0].mult == 2);
}

TEST_CASE("byte totals match the serialized lengths exactly") {
  const KeySetup& s = small_setup();
  const WireWidths widths = WireWidths::from_keys(s.cs1.pub, s.cs2.pub);
  const auto lengths = SerializedLengths::from_key_bits(
      static_cast<unsigned>(s.cs1.pub.bits()),
      static_cast<unsigned>(s.cs2.pub.bits()));
  // The bit-derived lengths agree with the actual key widths.
  CHECK(lengths.ciphertext_cs1 == 5 + widths.ciphertext_cs1);
  CHECK(lengths.ciphertext_cs2 == 5 + widths.ciphertext_cs2);
  CHECK(lengths.plaintext_cs1 == 5 + widths.plaintext_cs1);

  for (std::uint32_t n : {1u, 3u, 8u}) {
    ShuffleRun run = seeded_run(n, 3000 + n);
    CHECK(run.report.provider.bytes_sent ==
          2 * n * n * lengths.ciphertext_cs1 + n * n * lengths.ciphertext_cs2 +
              n * lengths.plaintext_cs1);
    for (const auto& p : run.report.players) {
      CHECK(p.bytes_sent == 4 * lengths.ciphertext_cs1 + lengths.ciphertext_cs2);
    }
    // Transcript frames carry a 9-byte header over the payload items.
    std::uint64_t payload_total = 0;
    for (const auto& frame : run.transcript.frames) {
      payload_total += frame.size() - 9;
    }
    std::uint64_t counter_total = run.report.provider.bytes_sent;
    for (const auto& p : run.report.players) counter_total += p.bytes_sent;
    CHECK(payload_total == counter_total);
  }
}

TEST_CASE("replaying a transcript reproduces every counter") {
  ShuffleRun run = seeded_run(5, 4005);
  ReplayCounters replay = replay_counters(run.transcript);
  CHECK(replay.n == 5);
  CHECK(replay.provider == run.report.provider);
  REQUIRE(replay.players.size() == 5);
  for (std::uint32_t id = 1; id <= 5; ++id) {
    CHECK(replay.players.at(id) == run.report.players[id - 1]);
  }
}

TEST_CASE("transcript files round-trip") {
  ShuffleRun run = seeded_run(3, 4010);
  const std::string path = "transcript_roundtrip.bin";
  run.transcript.write_file(path);
  Transcript loaded = Transcript::read_file(path);
  CHECK(loaded.frames == run.transcript.frames);
  std::remove(path.c_str());

  ReplayCounters replay = replay_counters(loaded);
  CHECK(replay.provider == run.report.provider);
}

TEST_CASE("factorials and permutation ranks") {
  CHECK(factorial(0) == 1);
  CHECK(factorial(3) == 6);
  CHECK(factorial(5) == 120);

  // All 24 permutations of 4 elements rank distinctly into [0, 24).
  std::vector<std::uint32_t> perm{0, 1, 2, 3};
  std::set<std::uint64_t> ranks;
  do {
    std::uint64_t r = permutation_rank(perm);
    CHECK(r < 24);
    ranks.insert(r);
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(ranks.size() == 24);
  CHECK(permutation_rank(std::vector<std::uint32_t>{0, 1, 2, 3}) == 0);
  CHECK(permutation_rank(std::vector<std::uint32_t>{3, 2, 1, 0}) == 23);
}

TEST_CASE("chi-square critical values") {
  CHECK(chi_square_critical_001(0) == 0.0);
  CHECK(chi_square_critical_001(5) == doctest::Approx(20.515));
  CHECK(chi_square_critical_001(23) == doctest::Approx(49.728));
  // Wilson-Hilferty tail: close to the tabulated 173.617 at df=120.
  CHECK(chi_square_critical_001(120) == doctest::Approx(173.617).epsilon(0.01));
}

TEST_CASE("permutation samples tally in both forms") {
  PermutationSample full(3);
  CHECK(full.full_form());
  full.record(std::vector<std::uint32_t>{0, 1, 2});
  full.record(std::vector<std::uint32_t>{2, 1, 0});
  CHECK(full.trials() == 2);
  std::uint64_t sum = 0;
  for (auto c : full.counts()) sum += c;
  CHECK(sum == 2);
  CHECK(full.counts().size() == 6);

  PermutationSample cells(6);
  CHECK(!cells.full_form());
  cells.record(std::vector<std::uint32_t>{5, 4, 3, 2, 1, 0});
  CHECK(cells.counts().size() == 36);
  sum = 0;
  for (auto c : cells.counts()) sum += c;
  CHECK(sum == 6);  // one increment per position
}

TEST_CASE("uniformity test accepts honest runs and rejects the control") {
  UniformityConfig config;
  config.n = 2;
  config.trials = 200;
  config.key_bits = 64;
  config.seed = 5;

  UniformityResult honest = uniformity_test(config);
  CHECK(honest.trials == 200);
  CHECK(honest.df == 1);
  CHECK(!honest.reject);

  config.degenerate_control = true;
  UniformityResult control = uniformity_test(config);
  CHECK(control.reject);
  CHECK(control.statistic > control.critical);

  config.degenerate_control = false;
  config.mode = Mode::mixnet;
  config.mixes = 3;
  UniformityResult mix = uniformity_test(config);
  CHECK(!mix.reject);
}

TEST_CASE("uniformity test validates its inputs") {
  UniformityConfig config;
  config.n = 6;
  CHECK_THROWS_AS(uniformity_test(config), RangeError);
  config.n = 3;
  config.trials = 100;  // below 100 * 3!
  CHECK_THROWS_AS(uniformity_test(config), RangeError);
  config.trials = 600;
  config.mode = Mode::mixnet;
  config.degenerate_control = true;
  CHECK_THROWS_AS(uniformity_test(config), RangeError);
}

TEST_CASE("bench sweep emits the CSV schema and deterministic counters") {
  BenchConfig config;
  config.player_counts = {2, 4};
  config.key_bits_cs1 = 64;
  config.input_bound_bits = 16;
  config.sigma = 16;
  config.modes = {{Mode::shuffle, 0}, {Mode::mixnet, 3}};
  config.repetitions = 2;
  config.seed = 7;
  config.csv_path = "bench_smoke.csv";

  BenchResult result = bench_sweep(config);
  CHECK(result.rows.size() == 2 * 2 * 2);
  CHECK(result.fits.count("shuffle") == 1);
  CHECK(result.fits.count("mixnet3") == 1);

  std::ifstream csv(config.csv_path);
  REQUIRE(csv.good());
  std::string header;
  std::getline(csv, header);
  CHECK(header == kBenchCsvHeader);
  std::size_t data_lines = 0;
  for (std::string line; std::getline(csv, line);) {
    if (!line.empty()) ++data_lines;
  }
  CHECK(data_lines == result.rows.size());
  std::remove(config.csv_path.c_str());

  // Counters repeat across repetitions; only timings move.
  for (const BenchRow& row : result.rows) {
    for (const BenchRow& other : result.rows) {
      if (row.mode == other.mode && row.n == other.n) {
        CHECK(row.report.provider.enc == other.report.provider.enc);
        CHECK(row.report.provider.bytes_sent ==
              other.report.provider.bytes_sent);
        CHECK(row.report.player_total() == other.report.player_total());
      }
    }
  }
}

TEST_CASE("linear fit recovers a straight line") {
  LinearFit fit = linear_fit({1, 2, 3, 4}, {3, 5, 7, 9});
  CHECK(fit.slope == doctest::Approx(2.0));
  CHECK(fit.intercept == doctest::Approx(1.0));
  CHECK(fit.r_squared == doctest::Approx(1.0));
  CHECK_THROWS_AS(linear_fit({1}, {2}), RangeError);
}
