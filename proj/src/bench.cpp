#include "shuffle/bench.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "shuffle/errors.hpp"
#include "shuffle/mixnet.hpp"
#include "shuffle/runner.hpp"

namespace shuffle {

const char* const kBenchCsvHeader =
    "mode,n,key_bits_cs1,key_bits_cs2,repetition,wall_ms,compute_ms,comm_ms,"
    "sp_enc,sp_dec,sp_mult,sp_bytes,player_enc_total,player_dec_total,"
    "player_mult_total,player_bytes_total";

LinearFit linear_fit(const std::vector<double>& x,
                     const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw RangeError("linear_fit: need at least two points");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0) throw RangeError("linear_fit: degenerate x values");
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean_y = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double pred = fit.slope * x[i] + fit.intercept;
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - mean_y) * (y[i] - mean_y);
  }
  fit.r_squared = ss_tot == 0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

namespace {

double median(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  if (values.size() % 2 == 1) return values[m];
  return (values[m - 1] + values[m]) / 2.0;
}

std::string render_row(const BenchRow& row) {
  const RunReport& r = row.report;
  const OpCounters player = r.player_total();
  std::ostringstream os;
  os << row.mode << ',' << row.n << ',' << r.key_bits_cs1 << ','
     << r.key_bits_cs2 << ',' << row.repetition << ',' << r.wall_ms << ','
     << r.compute_ms << ',' << r.comm_ms << ',' << r.provider.enc << ','
     << r.provider.dec << ',' << r.provider.mult << ','
     << r.provider.bytes_sent << ',' << player.enc << ',' << player.dec << ','
     << player.mult << ',' << player.bytes_sent;
  return os.str();
}

}  // namespace

BenchResult bench_sweep(const BenchConfig& config) {
  if (config.player_counts.empty()) {
    throw RangeError("bench_sweep: no player counts given");
  }
  if (config.modes.empty()) throw RangeError("bench_sweep: no modes given");
  if (config.repetitions == 0) {
    throw RangeError("bench_sweep: repetitions must be positive");
  }

  ShuffleParams params;
  params.key_bits_cs1 = config.key_bits_cs1;
  params.key_bits_cs2 = config.key_bits_cs1 - 2;
  params.input_bound_bits = config.input_bound_bits;
  params.sigma = config.sigma;
  params.validate();

  auto master = make_random(config.seed);

  BenchResult result;
  std::map<std::string, std::map<unsigned, std::vector<double>>> walls;

  for (unsigned n : config.player_counts) {
    auto keygen_rng = master->fork("keys-" + std::to_string(n));
    KeySetup setup = make_key_setup(params, *keygen_rng);
    auto input_rng = master->fork("inputs-" + std::to_string(n));
    std::vector<Bigint> inputs;
    inputs.reserve(n);
    for (unsigned i = 0; i < n; ++i) {
      inputs.push_back(input_rng->uniform_below(params.input_bound()));
    }

    for (const ModeSpec& mode : config.modes) {
      for (unsigned rep = 0; rep < config.repetitions; ++rep) {
        const std::string tag =
            mode.name() + "-" + std::to_string(n) + "-" + std::to_string(rep);
        BenchRow row;
        row.mode = mode.name();
        row.n = n;
        row.repetition = rep;

        if (mode.mode == Mode::shuffle) {
          RunOptions options;
          options.latency_us = config.latency_us;
          options.bandwidth_mb_per_s = config.bandwidth_mb_per_s;
          if (config.seed) {
            std::array<std::uint8_t, 8> raw;
            master->fork("seed-" + tag)->fill(raw);
            std::uint64_t s = 0;
            for (auto b : raw) s = (s << 8) | b;
            options.seed = s;
          }
          row.report = run_shuffle(setup, inputs, options).report;
        } else {
          auto mix_rng = master->fork("mix-" + tag);
          MixBatch batch;
          batch.ciphertexts.reserve(n);
          for (const Bigint& x : inputs) {
            batch.ciphertexts.push_back(
                encrypt(setup.cs1.pub, x, *mix_rng->fork("enc")));
          }
          std::vector<MixNode> nodes;
          for (unsigned m = 0; m < mode.mixes; ++m) {
            nodes.emplace_back(m + 1, setup.cs1.pub,
                               mix_rng->fork("node-" + std::to_string(m)));
          }
          row.report = cascade(nodes, batch, config.latency_us,
                               config.bandwidth_mb_per_s)
                           .report;
        }
        walls[row.mode][n].push_back(row.report.wall_ms);
        result.rows.push_back(std::move(row));
      }
    }
  }

  for (const auto& [mode, per_n] : walls) {
    if (per_n.size() < 2) continue;
    std::vector<double> xs, ys;
    for (const auto& [n, samples] : per_n) {
      xs.push_back(static_cast<double>(n));
      ys.push_back(median(samples));
    }
    result.fits[mode] = linear_fit(xs, ys);
  }

  auto shuffle_it = walls.find("shuffle");
  auto mix5_it = walls.find("mixnet5");
  if (shuffle_it != walls.end() && mix5_it != walls.end()) {
    unsigned largest = config.player_counts.back();
    for (unsigned n : config.player_counts) largest = std::max(largest, n);
    auto s = shuffle_it->second.find(largest);
    auto m = mix5_it->second.find(largest);
    if (s != shuffle_it->second.end() && m != mix5_it->second.end() &&
        median(m->second) > 0) {
      result.shuffle_over_mixnet5 = median(s->second) / median(m->second);
    }
  }

  std::ostringstream csv;
  csv << kBenchCsvHeader << '\n';
  for (const BenchRow& row : result.rows) csv << render_row(row) << '\n';
  result.csv = csv.str();

  if (!config.csv_path.empty()) {
    std::ofstream os(config.csv_path);
    if (!os) throw Error("cannot open CSV output: " + config.csv_path);
    os << result.csv;
    if (!os) throw Error("failed writing CSV output: " + config.csv_path);
  }
  return result;
}

}  // namespace shuffle
