#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lccp/model.hpp"

namespace lccp {

struct TrialResult {
  std::uint64_t samples_used = 0;
};

struct FiveNumber {
  double min = 0, q25 = 0, median = 0, q75 = 0, max = 0;
};

struct SimulationStats {
  std::size_t reps = 0;
  double mean = 0;
  double std_error = 0;
  FiveNumber five_number;
  std::uint64_t seed = 0;
};

inline constexpr std::uint64_t kMaxDrawsPerTrial = 1'000'000'000ULL;

/// Draws from a fresh instance until the target is met. Sizes {1,2} in
/// VerticesUnknown mode run on the union-find component tracker; everything
/// else goes through the full knowledge-state engine.
TrialResult run_trial(std::size_t n, const SampleSizeDist& dist, const RecoveryTarget& target,
                      RandomStream& stream, std::uint64_t max_draws = kMaxDrawsPerTrial);

/// Same, but always through the general engine (used to cross-check the fast path).
TrialResult run_trial_general(std::size_t n, const SampleSizeDist& dist,
                              const RecoveryTarget& target, RandomStream& stream,
                              std::uint64_t max_draws = kMaxDrawsPerTrial);

/// Group-drawing coverage: draws until at least r distinct coupons were seen.
TrialResult run_ccp_trial(std::size_t n, const SampleSizeDist& dist, std::size_t r,
                          RandomStream& stream);

/// Mean, standard error and Tukey-hinge five-number summary.
SimulationStats summarize(std::span<const std::uint64_t> values, std::uint64_t seed);

/// Hardware concurrency, capped by LCCP_THREADS when set.
unsigned threads_from_env();

/// reps independent trials; replication i uses RandomStream::derive(seed, i),
/// so the result does not depend on `threads`.
SimulationStats estimate(std::size_t n, const SampleSizeDist& dist,
                         const RecoveryTarget& target, std::size_t reps, std::uint64_t seed,
                         unsigned threads = 1);

/// Raw per-replication counts behind estimate().
std::vector<std::uint64_t> replicate(std::size_t n, const SampleSizeDist& dist,
                                     const RecoveryTarget& target, std::size_t reps,
                                     std::uint64_t seed, unsigned threads = 1);

/// (LCCP complete recovery, CCP coverage of n-1 coupons), both driven by the
/// same per-replication streams.
std::pair<SimulationStats, SimulationStats> compare_lccp_ccp(std::size_t n,
                                                             const SampleSizeDist& dist,
                                                             std::size_t reps,
                                                             std::uint64_t seed,
                                                             unsigned threads = 1);

}  // namespace lccp
