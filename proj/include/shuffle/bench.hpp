#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shuffle/counters.hpp"

namespace shuffle {

struct ModeSpec {
  Mode mode = Mode::shuffle;
  unsigned mixes = 0;  // cascade length for mixnet
  std::string name() const {
    return mode == Mode::shuffle ? "shuffle" : "mixnet" + std::to_string(mixes);
  }
};

struct BenchConfig {
  std::vector<unsigned> player_counts{8, 16, 32, 64, 96};
  unsigned key_bits_cs1 = 1024;  // CS2 runs two bits below
  unsigned input_bound_bits = 64;
  unsigned sigma = 64;
  std::vector<ModeSpec> modes{{Mode::shuffle, 0}};
  unsigned repetitions = 3;
  std::optional<std::uint64_t> seed;
  double latency_us = 0.0;
  double bandwidth_mb_per_s = 0.0;
  std::string csv_path;  // empty: no file written
};

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};

// Least squares of y over x; r_squared is the coefficient of determination.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

struct BenchRow {
  std::string mode;
  unsigned n = 0;
  unsigned repetition = 0;
  RunReport report;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  // Fit of median wall_ms against n, one per mode name.
  std::map<std::string, LinearFit> fits;
  // shuffle wall / mixnet5 wall at the largest n, when both modes ran.
  std::optional<double> shuffle_over_mixnet5;
  std::string csv;  // rendered table, header included
};

// One run per (n, mode, repetition). Key generation happens once per n and
// is excluded from the timings; counters are deterministic under a fixed
// seed while wall-clock columns vary.
BenchResult bench_sweep(const BenchConfig& config);

extern const char* const kBenchCsvHeader;

}  // namespace shuffle
