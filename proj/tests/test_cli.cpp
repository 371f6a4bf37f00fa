// Drives the installed command-line binary end to end: exit codes, the
// printed counter lines, and the usage/abort paths.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string output;
};

CmdResult run_cli(const std::string& args) {
  const std::string cmd = std::string(SHUFFLE_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult result;
  std::array<char, 512> buf;
  while (fgets(buf.data(), buf.size(), pipe)) result.output += buf.data();
  int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("conformance prints the closed-form totals") {
  CmdResult r = run_cli(
      "conformance --players 4 --key-bits 128 --input-bound-bits 16 "
      "--sigma 32 --seed 5");
  INFO(r.output);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "provider enc=12 dec=4 mult=12"));
  CHECK(contains(r.output, "player 1 enc=5 dec=4 mult=2"));
  CHECK(contains(r.output, "conformance: PASS"));
}

TEST_CASE("run verifies the shuffled multiset") {
  CmdResult r = run_cli("run --players 8 --key-bits 256 --seed 7");
  INFO(r.output);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "multiset preserved: yes"));
}

TEST_CASE("config violations are rejected before key generation") {
  CmdResult r = run_cli("run --players 4 --key-bits 64");
  INFO(r.output);
  CHECK(r.exit_code == 2);
  CHECK(contains(r.output, "configuration error"));
}

TEST_CASE("an injected duplicate aborts with exit code 1") {
  CmdResult r = run_cli(
      "run --players 4 --key-bits 256 --seed 11 --inject-duplicate-r1");
  INFO(r.output);
  CHECK(r.exit_code == 1);
  CHECK(contains(r.output, "aborted at step 2.5"));
}

TEST_CASE("stats reports a chi-square verdict") {
  CmdResult r = run_cli("stats --players 3 --trials 600 --key-bits 128 --seed 3");
  INFO(r.output);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "chi2="));
  CHECK(contains(r.output, "accept uniformity"));
}

TEST_CASE("keygen prints both moduli") {
  CmdResult r = run_cli("keygen --key-bits 64 --seed 9");
  INFO(r.output);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "CS1 modulus (64 bits)"));
  CHECK(contains(r.output, "CS2 modulus (62 bits)"));
}

TEST_CASE("mixnet baseline runs") {
  CmdResult r = run_cli("mixnet --players 6 --key-bits 128 --mixes 5 --seed 2");
  INFO(r.output);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "mixnet5"));
  CHECK(contains(r.output, "multiset preserved: yes"));
}

TEST_CASE("bench emits fits and the CSV schema") {
  CmdResult r = run_cli(
      "bench --players 2 --players 4 --key-bits 64 --input-bound-bits 16 "
      "--sigma 16 --mode shuffle --reps 2 --seed 7");
  INFO(r.output);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output,
                 "mode,n,key_bits_cs1,key_bits_cs2,repetition,wall_ms"));
  CHECK(contains(r.output, "R^2"));
}

TEST_CASE("seeded runs produce identical transcripts") {
  const std::string a = "cli_transcript_a.bin";
  const std::string b = "cli_transcript_b.bin";
  CmdResult r1 = run_cli(
      "run --players 4 --key-bits 256 --seed 12 --transcript " + a);
  CmdResult r2 = run_cli(
      "run --players 4 --key-bits 256 --seed 12 --transcript " + b);
  CHECK(r1.exit_code == 0);
  CHECK(r2.exit_code == 0);

  auto slurp = [](const std::string& path) {
    std::string data;
    FILE* f = std::fopen(path.c_str(), "rb");
    REQUIRE(f != nullptr);
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = std::fread(buf.data(), 1, buf.size(), f)) > 0) {
      data.append(buf.data(), got);
    }
    std::fclose(f);
    return data;
  };
  std::string da = slurp(a), db = slurp(b);
  CHECK(!da.empty());
  CHECK(da == db);
  std::remove(a.c_str());
  std::remove(b.c_str());
}

TEST_CASE("unknown subcommands and flags are usage errors") {
  CHECK(run_cli("bogus").exit_code == 2);
  CHECK(run_cli("run --nonsense").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
}
