#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lccp/simulate.hpp"

namespace lccp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitClaimFailed = 1;
inline constexpr int kExitUsage = 2;

/// Entry point shared by the `lccp` binary and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "start:stop:step" or a comma list; every point snapped to a 1e-12 grid.
std::vector<double> parse_grid(std::string_view text);

struct SweepRow {
  std::size_t n = 0;
  double p = 0;
  double expected_exact = 0;
  double normalized_exact = 0;  // expected_exact / (n H_n)
  double convex_baseline = 0;   // p E(p=1) + (1-p) E(p=0)
  std::optional<SimulationStats> sim;  // absent when reps == 0
  std::uint64_t seed = 0;
};

std::vector<SweepRow> sweep(std::size_t n, const std::vector<double>& grid, std::size_t reps,
                            std::uint64_t seed, unsigned threads = 1);

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_json(const std::vector<SweepRow>& rows);

enum class CheckStatus { Pass, Finding, Fail };

struct CheckResult {
  CheckStatus status = CheckStatus::Pass;
  std::string claim;
  std::string detail;
};

struct VerifyOptions {
  std::size_t n_max = 5;
  std::uint64_t seed = 20240601;
};

/// Cross-checks formulas, the oracle, the Markov chain and the simulator.
/// Proven claims report Pass or Fail; printed formulas that disagree with
/// ground truth and conjecture diagnostics report Finding.
std::vector<CheckResult> verify(const VerifyOptions& options);

std::string_view to_string(CheckStatus status);

}  // namespace lccp::cli
