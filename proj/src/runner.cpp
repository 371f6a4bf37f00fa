#include "shuffle/runner.hpp"

#include <algorithm>
#include <chrono>
#include <string>

#include "shuffle/errors.hpp"

namespace shuffle {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

}  // namespace

KeyPair make_nested_keys(unsigned bits_cs1, unsigned bits_cs2,
                         Instance instance, const Bigint& cs1_modulus,
                         RandomSource& rng) {
  if (bits_cs2 > bits_cs1) {
    throw ConfigError("CS2 key size must not exceed the CS1 key size");
  }
  for (;;) {
    KeyPair cs2 = keygen(bits_cs2, instance, rng);
    if (cs2.pub.modulus <= cs1_modulus) return cs2;
    // Only reachable at equal key sizes; draw a fresh pair.
  }
}

KeySetup make_key_setup(const ShuffleParams& params, RandomSource& rng) {
  params.validate();
  KeySetup setup;
  setup.params = params;
  setup.cs1 = keygen(params.key_bits_cs1, Instance::cs1, rng);
  setup.cs2 = make_nested_keys(params.key_bits_cs1, params.key_bits_cs2,
                               Instance::cs2, setup.cs1.pub.modulus, rng);
  // Exact form of the blinding-range requirement: r2 + r3 < N2 always.
  if (2 * params.blinding_bound() >= setup.cs2.pub.modulus) {
    throw ConfigError("blinding range does not fit below the CS2 modulus");
  }
  return setup;
}

ShuffleRun run_shuffle(const KeySetup& setup, const std::vector<Bigint>& inputs,
                       const RunOptions& options) {
  const std::uint32_t n = static_cast<std::uint32_t>(inputs.size());
  if (n == 0) throw RangeError("run_shuffle needs at least one input");

  auto master = make_random(options.seed);
  const WireWidths widths = WireWidths::from_keys(setup.cs1.pub, setup.cs2.pub);
  Transport transport(widths, options.latency_us, options.bandwidth_mb_per_s);
  transport.register_participant(kProviderId);

  Provider provider(n, setup.params, setup.cs1.pub, setup.cs2.pub,
                    setup.cs2.sec, master->fork("provider"),
                    ProviderHooks{options.identity_permutations});

  std::vector<Player> players;
  players.reserve(n);
  std::optional<Bigint> duplicate_value;
  if (options.inject_duplicate_random && n >= 2) {
    duplicate_value = master->fork("inject")->uniform_below(
        setup.cs1.pub.modulus);
  }
  for (std::uint32_t id = 1; id <= n; ++id) {
    PlayerHooks hooks;
    hooks.sequential_index = options.sequential_indices;
    if (duplicate_value && id <= 2) hooks.forced_index_random = duplicate_value;
    players.emplace_back(id, inputs[id - 1], setup.params, setup.cs1.pub,
                         setup.cs1.sec, setup.cs2.pub,
                         master->fork("player-" + std::to_string(id)),
                         std::move(hooks));
    transport.register_participant(id);
  }

  RunReport report;
  report.mode = Mode::shuffle;
  report.n = n;
  report.key_bits_cs1 = static_cast<unsigned>(setup.cs1.pub.bits());
  report.key_bits_cs2 = static_cast<unsigned>(setup.cs2.pub.bits());

  // Round one. Players run independently; the modeled wall time takes the
  // slowest of them per stage, the way concurrent deployments behave.
  double slowest_player = 0;
  for (auto& player : players) {
    auto t0 = Clock::now();
    auto [msg_input, msg_random] = player.round_one();
    slowest_player = std::max(slowest_player, elapsed_ms(t0));
    transport.send(msg_input, kProviderId);
    transport.send(msg_random, kProviderId);
  }
  double compute_ms = slowest_player;

  auto provider_t0 = Clock::now();
  for (const auto& msg : transport.drain(kProviderId)) {
    provider.receive_round_one(msg);
  }
  RoundOneBroadcast broadcast = provider.build_broadcast();
  auto broadcast_msgs = broadcast.to_messages();
  compute_ms += elapsed_ms(provider_t0);
  for (std::uint32_t id = 1; id <= n; ++id) {
    for (const auto& msg : broadcast_msgs) transport.send(msg, id);
  }

  // Round two. Triples reach the provider in a uniformly shuffled player
  // order unless the control knob pins arrival to player order.
  slowest_player = 0;
  std::vector<std::array<ProtocolMessage, 3>> triples;
  triples.reserve(n);
  for (auto& player : players) {
    auto received = transport.drain(player.id());
    auto t0 = Clock::now();
    RoundOneBroadcast parsed =
        RoundOneBroadcast::from_messages(received, n);
    auto triple = player.round_two(parsed);
    slowest_player = std::max(slowest_player, elapsed_ms(t0));
    triples.push_back(std::move(triple));
  }
  compute_ms += slowest_player;

  std::vector<std::uint32_t> arrival(n);
  for (std::uint32_t i = 0; i < n; ++i) arrival[i] = i;
  if (!options.identity_arrival) {
    arrival = master->fork("transport")->permutation(n);
  }
  for (std::uint32_t i = 0; i < n; ++i) {
    for (const auto& msg : triples[arrival[i]]) {
      transport.send(msg, kProviderId);
    }
  }

  provider_t0 = Clock::now();
  auto delivered = transport.drain(kProviderId);
  if (delivered.size() % 3 != 0) {
    throw MessageError("round-two deliveries are not whole triples");
  }
  ShuffleRun run;
  for (std::size_t i = 0; i + 3 <= delivered.size(); i += 3) {
    provider.receive_round_two(
        {delivered[i], delivered[i + 1], delivered[i + 2]});
  }
  run.output = provider.finalize();
  compute_ms += elapsed_ms(provider_t0);

  report.compute_ms = compute_ms;
  report.comm_ms = transport.comm_ms();
  report.wall_ms = report.compute_ms + report.comm_ms;
  report.provider = provider.counters();
  report.provider.bytes_sent = transport.bytes_sent_by(kProviderId);
  report.players.reserve(n);
  run.player_indices.reserve(n);
  for (auto& player : players) {
    OpCounters c = player.counters();
    c.bytes_sent = transport.bytes_sent_by(player.id());
    report.players.push_back(c);
    run.player_indices.push_back(player.random_index());
  }
  run.report = std::move(report);
  run.transcript = transport.transcript();
  return run;
}

ShuffleRun run_shuffle(const ShuffleParams& params,
                       const std::vector<Bigint>& inputs,
                       const RunOptions& options) {
  params.validate();
  auto rng = make_random(options.seed);
  KeySetup setup = make_key_setup(params, *rng->fork("keygen"));
  return run_shuffle(setup, inputs, options);
}

}  // namespace shuffle
