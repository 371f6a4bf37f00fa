#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shuffle/counters.hpp"

namespace shuffle {

std::uint64_t factorial(unsigned n);

// Lehmer rank of a permutation of {0..n-1}, in [0, n!).
std::uint64_t permutation_rank(std::span<const std::uint32_t> perm);

// Tally of realized permutations. For n <= 5 one cell per permutation
// (n! cells); for larger n one cell per (input, output position) pair
// (n^2 cells, incremented n times per recorded permutation).
class PermutationSample {
 public:
  explicit PermutationSample(unsigned n);

  // perm[i] = source index of the element at output position i (0-based).
  void record(std::span<const std::uint32_t> perm);

  unsigned n() const { return n_; }
  bool full_form() const { return full_form_; }
  std::uint64_t trials() const { return trials_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

 private:
  unsigned n_;
  bool full_form_;
  std::uint64_t trials_ = 0;
  std::vector<std::uint64_t> counts_;
};

// Pearson statistic against the uniform distribution over the cells.
double chi_square_statistic(const std::vector<std::uint64_t>& counts,
                            double expected_per_cell);

// Upper critical value at significance 0.001. Tabulated for small degrees
// of freedom, Wilson-Hilferty approximation beyond the table.
double chi_square_critical_001(std::uint64_t df);

struct UniformityResult {
  unsigned n = 0;
  std::uint64_t trials = 0;
  std::uint64_t df = 0;
  double statistic = 0;
  double critical = 0;
  bool reject = false;
  std::string summary() const;
};

struct UniformityConfig {
  Mode mode = Mode::shuffle;
  unsigned mixes = 3;  // cascade length for mixnet mode
  unsigned n = 3;
  std::uint64_t trials = 6000;
  unsigned key_bits = 256;
  std::uint64_t seed = 1;
  bool degenerate_control = false;  // pins the run into a fixed permutation
};

// Runs `trials` end-to-end executions with toy keys and distinct inputs
// 1..n, recovers each realized permutation by decryption, and tests the
// tally against uniformity over all n! permutations at significance 0.001.
// Requires n <= 5 and trials >= 100 * n!.
UniformityResult uniformity_test(const UniformityConfig& config);

}  // namespace shuffle
