#include "shuffle/stats.hpp"

#include <cmath>
#include <sstream>

#include "shuffle/errors.hpp"
#include "shuffle/mixnet.hpp"
#include "shuffle/runner.hpp"

namespace shuffle {

std::uint64_t factorial(unsigned n) {
  std::uint64_t f = 1;
  for (unsigned i = 2; i <= n; ++i) f *= i;
  return f;
}

std::uint64_t permutation_rank(std::span<const std::uint32_t> perm) {
  const std::size_t n = perm.size();
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t smaller_after = 0;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (perm[j] < perm[i]) ++smaller_after;
    }
    rank += smaller_after * factorial(static_cast<unsigned>(n - 1 - i));
  }
  return rank;
}

PermutationSample::PermutationSample(unsigned n)
    : n_(n), full_form_(n <= 5) {
  if (n == 0) throw RangeError("PermutationSample: n must be positive");
  counts_.assign(full_form_ ? factorial(n) : std::uint64_t{n} * n, 0);
}

void PermutationSample::record(std::span<const std::uint32_t> perm) {
  if (perm.size() != n_) {
    throw RangeError("PermutationSample: wrong permutation length");
  }
  if (full_form_) {
    ++counts_[permutation_rank(perm)];
  } else {
    for (std::size_t pos = 0; pos < perm.size(); ++pos) {
      ++counts_[std::size_t{perm[pos]} * n_ + pos];
    }
  }
  ++trials_;
}

double chi_square_statistic(const std::vector<std::uint64_t>& counts,
                            double expected_per_cell) {
  if (expected_per_cell <= 0) {
    throw RangeError("chi_square_statistic: expectation must be positive");
  }
  double stat = 0;
  for (std::uint64_t c : counts) {
    double d = static_cast<double>(c) - expected_per_cell;
    stat += d * d / expected_per_cell;
  }
  return stat;
}

double chi_square_critical_001(std::uint64_t df) {
  switch (df) {
    case 0:
      return 0.0;
    case 1:
      return 10.828;
    case 2:
      return 13.816;
    case 3:
      return 16.266;
    case 4:
      return 18.467;
    case 5:
      return 20.515;
    case 6:
      return 22.458;
    case 23:
      return 49.728;
    default: {
      // Wilson-Hilferty: chi2_q(df) ~ df * (1 - 2/(9 df) + z_q sqrt(2/(9 df)))^3.
      const double z = 3.090232306167813;  // standard normal 0.999 quantile
      double d = static_cast<double>(df);
      double t = 2.0 / (9.0 * d);
      double body = 1.0 - t + z * std::sqrt(t);
      return d * body * body * body;
    }
  }
}

std::string UniformityResult::summary() const {
  std::ostringstream os;
  os << "n=" << n << " trials=" << trials << " df=" << df
     << " chi2=" << statistic << " critical(0.001)=" << critical << " -> "
     << (reject ? "REJECT uniformity" : "accept uniformity");
  return os.str();
}

namespace {

std::vector<std::uint32_t> recover_permutation(
    const std::vector<Ciphertext>& output, const SecretKey& sk1, unsigned n) {
  // Inputs are the distinct values 1..n, so decryption identifies the
  // source position of every output slot.
  std::vector<std::uint32_t> perm(n, 0);
  std::vector<bool> seen(n, false);
  for (std::size_t pos = 0; pos < output.size(); ++pos) {
    Bigint v = decrypt(sk1, output[pos]);
    if (v < 1 || v > n) throw Error("recovered value outside 1..n");
    auto src = static_cast<std::uint32_t>(v.get_ui() - 1);
    if (seen[src]) throw Error("recovered permutation repeats a source");
    seen[src] = true;
    perm[pos] = src;
  }
  return perm;
}

}  // namespace

UniformityResult uniformity_test(const UniformityConfig& config) {
  if (config.n < 1 || config.n > 5) {
    throw RangeError("uniformity_test: full permutation form needs n <= 5");
  }
  const std::uint64_t cells = factorial(config.n);
  if (config.trials < 100 * cells) {
    throw RangeError("uniformity_test: needs at least 100 * n! trials");
  }
  if (config.degenerate_control && config.mode != Mode::shuffle) {
    throw RangeError(
        "uniformity_test: the degenerate control only exists for shuffle "
        "runs");
  }

  ShuffleParams params;
  params.key_bits_cs1 = config.key_bits;
  params.key_bits_cs2 = config.key_bits - 2;
  params.input_bound_bits = 16;
  params.sigma = std::min(64u, params.key_bits_cs2 - params.input_bound_bits -
                                   2);
  params.validate();

  SeededRandom master(config.seed);
  auto setup_rng = master.fork("keygen");
  KeySetup setup = make_key_setup(params, *setup_rng);

  std::vector<Bigint> inputs;
  for (unsigned i = 1; i <= config.n; ++i) inputs.emplace_back(i);

  PermutationSample sample(config.n);

  if (config.mode == Mode::shuffle) {
    for (std::uint64_t t = 0; t < config.trials; ++t) {
      RunOptions options;
      std::array<std::uint8_t, 8> raw;
      master.fork("trial-" + std::to_string(t))->fill(raw);
      std::uint64_t trial_seed = 0;
      for (auto b : raw) trial_seed = (trial_seed << 8) | b;
      options.seed = trial_seed;
      if (config.degenerate_control) {
        options.identity_permutations = true;
        options.identity_arrival = true;
        options.sequential_indices = true;
      }
      ShuffleRun run = run_shuffle(setup, inputs, options);
      sample.record(
          recover_permutation(run.output.ciphertexts, setup.cs1.sec, config.n));
    }
  } else {
    // Fresh batch encryption once; each trial uses freshly seeded mixes.
    auto batch_rng = master.fork("batch");
    MixBatch batch;
    for (const Bigint& x : inputs) {
      batch.ciphertexts.push_back(encrypt(setup.cs1.pub, x, *batch_rng));
    }
    for (std::uint64_t t = 0; t < config.trials; ++t) {
      auto trial_rng = master.fork("trial-" + std::to_string(t));
      std::vector<MixNode> nodes;
      for (unsigned m = 0; m < config.mixes; ++m) {
        nodes.emplace_back(m + 1, setup.cs1.pub,
                           trial_rng->fork("mix-" + std::to_string(m)));
      }
      CascadeResult result = cascade(nodes, batch);
      sample.record(recover_permutation(result.batch.ciphertexts,
                                        setup.cs1.sec, config.n));
    }
  }

  UniformityResult result;
  result.n = config.n;
  result.trials = sample.trials();
  result.df = cells - 1;
  result.statistic = chi_square_statistic(
      sample.counts(),
      static_cast<double>(sample.trials()) / static_cast<double>(cells));
  result.critical = chi_square_critical_001(result.df);
  result.reject = result.statistic > result.critical;
  return result;
}

}  // namespace shuffle
