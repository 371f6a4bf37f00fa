// Command-line front end: key generation, single shuffle runs, the mix
// network baseline, counter conformance checks, permutation statistics and
// benchmark sweeps.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shuffle/bench.hpp"
#include "shuffle/counters.hpp"
#include "shuffle/errors.hpp"
#include "shuffle/mixnet.hpp"
#include "shuffle/runner.hpp"
#include "shuffle/stats.hpp"

namespace {

using namespace shuffle;

constexpr int kExitOk = 0;
constexpr int kExitProtocolFailure = 1;
constexpr int kExitUsage = 2;

struct CommonOptions {
  unsigned players = 8;
  unsigned key_bits = 1024;
  unsigned key_bits_cs2 = 0;  // 0: derived as key_bits - 2
  unsigned input_bound_bits = 64;
  unsigned sigma = 64;
  std::optional<std::uint64_t> seed;
  double latency_us = 0.0;
};

ShuffleParams to_params(const CommonOptions& opt) {
  ShuffleParams params;
  params.key_bits_cs1 = opt.key_bits;
  params.key_bits_cs2 =
      opt.key_bits_cs2 == 0 ? opt.key_bits - 2 : opt.key_bits_cs2;
  params.input_bound_bits = opt.input_bound_bits;
  params.sigma = opt.sigma;
  return params;
}

std::uint64_t draw_seed() {
  SystemRandom rng;
  std::array<std::uint8_t, 8> raw;
  rng.fill(raw);
  std::uint64_t s = 0;
  for (auto b : raw) s = (s << 8) | b;
  return s;
}

std::vector<Bigint> random_inputs(const ShuffleParams& params, unsigned n,
                                  RandomSource& rng) {
  std::vector<Bigint> inputs;
  inputs.reserve(n);
  for (unsigned i = 0; i < n; ++i) {
    inputs.push_back(rng.uniform_below(params.input_bound()));
  }
  return inputs;
}

bool multiset_preserved(const std::vector<Bigint>& inputs,
                        const std::vector<Ciphertext>& outputs,
                        const SecretKey& sk1) {
  std::vector<Bigint> decrypted;
  decrypted.reserve(outputs.size());
  for (const Ciphertext& c : outputs) decrypted.push_back(decrypt(sk1, c));
  std::vector<Bigint> expected = inputs;
  std::sort(expected.begin(), expected.end());
  std::sort(decrypted.begin(), decrypted.end());
  return expected == decrypted;
}

void print_counters(const std::string& who, const OpCounters& c) {
  std::cout << who << " enc=" << c.enc << " dec=" << c.dec
            << " mult=" << c.mult << " bytes=" << c.bytes_sent << "\n";
}

int cmd_keygen(const CommonOptions& opt) {
  if (opt.key_bits < 16 || opt.key_bits % 2 != 0) {
    throw ConfigError("key size must be even and at least 16 bits");
  }
  unsigned bits2 = opt.key_bits_cs2 == 0 ? opt.key_bits - 2 : opt.key_bits_cs2;
  if (bits2 < 16 || bits2 % 2 != 0 || bits2 + 2 > opt.key_bits) {
    throw ConfigError(
        "CS2 key size must be even, at least 16 bits, and at most the CS1 "
        "key size minus 2");
  }
  auto rng = make_random(opt.seed);
  KeyPair cs1 = keygen(opt.key_bits, Instance::cs1, *rng->fork("cs1"));
  KeyPair cs2 = make_nested_keys(opt.key_bits, bits2, Instance::cs2,
                                 cs1.pub.modulus, *rng->fork("cs2"));
  std::cout << "CS1 modulus (" << cs1.pub.bits()
            << " bits): " << cs1.pub.modulus.get_str(16) << "\n";
  std::cout << "CS2 modulus (" << cs2.pub.bits()
            << " bits): " << cs2.pub.modulus.get_str(16) << "\n";
  return kExitOk;
}

int cmd_run(const CommonOptions& opt, const std::string& transcript_path,
            bool inject_duplicate) {
  ShuffleParams params = to_params(opt);
  params.validate();
  if (opt.players == 0) throw ConfigError("need at least one player");

  auto rng = make_random(opt.seed);
  KeySetup setup = make_key_setup(params, *rng->fork("keygen"));
  auto inputs = random_inputs(params, opt.players, *rng->fork("inputs"));

  RunOptions options;
  options.seed = opt.seed;
  options.latency_us = opt.latency_us;
  options.inject_duplicate_random = inject_duplicate;
  ShuffleRun run = run_shuffle(setup, inputs, options);

  const bool ok =
      multiset_preserved(inputs, run.output.ciphertexts, setup.cs1.sec);
  std::cout << "shuffled " << opt.players << " inputs under "
            << params.key_bits_cs1 << "/" << params.key_bits_cs2
            << "-bit keys\n";
  std::cout << "wall_ms=" << run.report.wall_ms
            << " compute_ms=" << run.report.compute_ms
            << " comm_ms=" << run.report.comm_ms << "\n";
  print_counters("provider", run.report.provider);
  print_counters("players (total)", run.report.player_total());
  std::cout << "multiset preserved: " << (ok ? "yes" : "NO") << "\n";
  if (!transcript_path.empty()) {
    run.transcript.write_file(transcript_path);
    std::cout << "transcript: " << transcript_path << " ("
              << run.transcript.frames.size() << " frames)\n";
  }
  return ok ? kExitOk : kExitProtocolFailure;
}

int cmd_mixnet(const CommonOptions& opt, unsigned mixes) {
  if (opt.key_bits < 16 || opt.key_bits % 2 != 0) {
    throw ConfigError("key size must be even and at least 16 bits");
  }
  if (opt.players == 0) throw ConfigError("need at least one input");

  auto rng = make_random(opt.seed);
  KeyPair cs1 = keygen(opt.key_bits, Instance::cs1, *rng->fork("cs1"));
  Bigint bound = Bigint(1) << 32;
  MixBatch batch;
  auto input_rng = rng->fork("inputs");
  std::vector<Bigint> inputs;
  for (unsigned i = 0; i < opt.players; ++i) {
    inputs.push_back(input_rng->uniform_below(bound));
    batch.ciphertexts.push_back(
        encrypt(cs1.pub, inputs.back(), *input_rng));
  }
  std::vector<MixNode> nodes;
  for (unsigned m = 0; m < mixes; ++m) {
    nodes.emplace_back(m + 1, cs1.pub,
                       rng->fork("mix-" + std::to_string(m)));
  }
  CascadeResult result = cascade(nodes, batch, opt.latency_us);
  const bool ok = multiset_preserved(inputs, result.batch.ciphertexts, cs1.sec);
  std::cout << "mixnet" << mixes << " over " << opt.players << " inputs, "
            << opt.key_bits << "-bit keys\n";
  std::cout << "wall_ms=" << result.report.wall_ms
            << " compute_ms=" << result.report.compute_ms
            << " comm_ms=" << result.report.comm_ms << "\n";
  print_counters("mixes (total)", result.report.provider);
  std::cout << "multiset preserved: " << (ok ? "yes" : "NO") << "\n";
  return ok ? kExitOk : kExitProtocolFailure;
}

int cmd_conformance(const CommonOptions& opt) {
  ShuffleParams params = to_params(opt);
  params.validate();
  if (opt.players == 0) throw ConfigError("need at least one player");

  auto rng = make_random(opt.seed);
  KeySetup setup = make_key_setup(params, *rng->fork("keygen"));
  auto inputs = random_inputs(params, opt.players, *rng->fork("inputs"));
  RunOptions options;
  options.seed = opt.seed;
  ShuffleRun run = run_shuffle(setup, inputs, options);

  ConformanceResult result = count_conformance(run.report);
  print_counters("provider", run.report.provider);
  for (std::size_t i = 0; i < run.report.players.size(); ++i) {
    print_counters("player " + std::to_string(i + 1), run.report.players[i]);
  }
  std::cout << result.summary() << "\n";
  std::cout << "conformance: " << (result.pass ? "PASS" : "FAIL") << "\n";
  return result.pass ? kExitOk : kExitProtocolFailure;
}

int cmd_stats(const CommonOptions& opt, const std::string& mode,
              std::uint64_t trials, bool degenerate) {
  UniformityConfig config;
  config.n = opt.players;
  config.trials = trials;
  config.key_bits = opt.key_bits;
  config.seed = opt.seed ? *opt.seed : draw_seed();
  config.degenerate_control = degenerate;
  if (mode == "shuffle") {
    config.mode = Mode::shuffle;
  } else if (mode == "mixnet3") {
    config.mode = Mode::mixnet;
    config.mixes = 3;
  } else if (mode == "mixnet5") {
    config.mode = Mode::mixnet;
    config.mixes = 5;
  } else {
    throw ConfigError("unknown mode: " + mode);
  }
  UniformityResult result = uniformity_test(config);
  std::cout << mode << (degenerate ? " (degenerate control)" : "") << ": "
            << result.summary() << "\n";
  return kExitOk;
}

int cmd_bench(const CommonOptions& opt, std::vector<unsigned> players,
              std::vector<std::string> mode_names, unsigned repetitions,
              const std::string& csv_path) {
  BenchConfig config;
  if (!players.empty()) config.player_counts = std::move(players);
  config.key_bits_cs1 = opt.key_bits;
  config.input_bound_bits = opt.input_bound_bits;
  config.sigma = opt.sigma;
  config.repetitions = repetitions;
  config.seed = opt.seed;
  config.latency_us = opt.latency_us;
  config.csv_path = csv_path;
  config.modes.clear();
  for (const std::string& name : mode_names) {
    if (name == "shuffle") {
      config.modes.push_back({Mode::shuffle, 0});
    } else if (name == "mixnet3") {
      config.modes.push_back({Mode::mixnet, 3});
    } else if (name == "mixnet5") {
      config.modes.push_back({Mode::mixnet, 5});
    } else {
      throw ConfigError("unknown mode: " + name);
    }
  }

  BenchResult result = bench_sweep(config);
  if (csv_path.empty()) {
    std::cout << result.csv;
  } else {
    std::cout << "wrote " << result.rows.size() << " rows to " << csv_path
              << "\n";
  }
  for (const auto& [mode, fit] : result.fits) {
    std::cout << mode << ": wall_ms ~ " << fit.slope << " * n + "
              << fit.intercept << "  (R^2 = " << fit.r_squared << ")\n";
  }
  if (result.shuffle_over_mixnet5) {
    std::cout << "shuffle / mixnet5 wall-clock ratio at largest n: "
              << *result.shuffle_over_mixnet5
              << " (reference measurement on cloud hardware: 2.14)\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Secret shuffling of homomorphically encrypted inputs: one service "
      "provider, n players, plus a re-encryption mixnet baseline"};
  app.require_subcommand(1);

  CommonOptions opt;
  std::string transcript_path;
  std::string mode = "shuffle";
  std::vector<std::string> bench_modes{"shuffle", "mixnet3", "mixnet5"};
  std::vector<unsigned> bench_players;
  std::string csv_path;
  unsigned mixes = 3;
  unsigned repetitions = 3;
  std::uint64_t trials = 6000;
  bool degenerate = false;

  auto add_key_flags = [&](CLI::App* cmd) {
    cmd->add_option("--key-bits", opt.key_bits, "CS1 modulus bits");
    cmd->add_option("--key-bits-cs2", opt.key_bits_cs2,
                    "CS2 modulus bits (default: key-bits - 2)");
    cmd->add_option("--seed", opt.seed, "deterministic randomness seed");
  };

  CLI::App* keygen_cmd = app.add_subcommand("keygen", "generate key pairs");
  add_key_flags(keygen_cmd);

  CLI::App* run_cmd = app.add_subcommand("run", "one full shuffle run");
  run_cmd->add_option("--players", opt.players, "number of players");
  add_key_flags(run_cmd);
  run_cmd->add_option("--input-bound-bits", opt.input_bound_bits,
                      "inputs lie in [0, 2^bits)");
  run_cmd->add_option("--sigma", opt.sigma, "statistical blinding margin");
  run_cmd->add_option("--latency-us", opt.latency_us,
                      "modeled per-message latency");
  run_cmd->add_option("--transcript", transcript_path,
                      "write the framed message log to this file");
  bool inject_duplicate = false;
  run_cmd->add_flag("--inject-duplicate-r1", inject_duplicate,
                    "force two players onto the same randomness to exercise "
                    "the abort path");

  CLI::App* mixnet_cmd = app.add_subcommand("mixnet", "mixnet baseline run");
  mixnet_cmd->add_option("--players", opt.players, "number of inputs");
  add_key_flags(mixnet_cmd);
  mixnet_cmd->add_option("--mixes", mixes, "cascade length")
      ->check(CLI::IsMember({3, 5}));
  mixnet_cmd->add_option("--latency-us", opt.latency_us,
                         "modeled per-message latency");

  CLI::App* conf_cmd =
      app.add_subcommand("conformance", "check operation/byte counters");
  conf_cmd->add_option("--players", opt.players, "number of players");
  add_key_flags(conf_cmd);
  conf_cmd->add_option("--input-bound-bits", opt.input_bound_bits,
                       "inputs lie in [0, 2^bits)");
  conf_cmd->add_option("--sigma", opt.sigma, "statistical blinding margin");

  CLI::App* stats_cmd =
      app.add_subcommand("stats", "permutation uniformity statistics");
  stats_cmd->add_option("--players", opt.players, "number of players (<= 5)");
  add_key_flags(stats_cmd);
  stats_cmd->add_option("--trials", trials, "number of end-to-end trials");
  stats_cmd->add_option("--mode", mode, "shuffle | mixnet3 | mixnet5");
  stats_cmd->add_flag("--degenerate-control", degenerate,
                      "pin permutations/arrival to produce a non-uniform "
                      "control run");

  CLI::App* bench_cmd = app.add_subcommand("bench", "benchmark sweep");
  bench_cmd->add_option("--players", bench_players,
                        "player counts (repeatable)");
  add_key_flags(bench_cmd);
  bench_cmd->add_option("--mode", bench_modes, "modes to sweep (repeatable)");
  bench_cmd->add_option("--reps", repetitions, "repetitions per point");
  bench_cmd->add_option("--input-bound-bits", opt.input_bound_bits,
                        "inputs lie in [0, 2^bits)");
  bench_cmd->add_option("--sigma", opt.sigma, "statistical blinding margin");
  bench_cmd->add_option("--latency-us", opt.latency_us,
                        "modeled per-message latency");
  bench_cmd->add_option("--csv", csv_path, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    opt.players = std::max(0u, opt.players);
    if (app.got_subcommand(keygen_cmd)) return cmd_keygen(opt);
    if (app.got_subcommand(run_cmd)) {
      return cmd_run(opt, transcript_path, inject_duplicate);
    }
    if (app.got_subcommand(mixnet_cmd)) return cmd_mixnet(opt, mixes);
    if (app.got_subcommand(conf_cmd)) return cmd_conformance(opt);
    if (app.got_subcommand(stats_cmd)) {
      if (stats_cmd->count("--key-bits") == 0) opt.key_bits = 256;
      if (stats_cmd->count("--players") == 0) opt.players = 3;
      return cmd_stats(opt, mode, trials, degenerate);
    }
    if (app.got_subcommand(bench_cmd)) {
      return cmd_bench(opt, bench_players, bench_modes, repetitions, csv_path);
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ProtocolAbort& e) {
    std::cerr << "protocol aborted at step " << e.step() << ": " << e.what()
              << "\n";
    return kExitProtocolFailure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitProtocolFailure;
  }
  return kExitUsage;
}
