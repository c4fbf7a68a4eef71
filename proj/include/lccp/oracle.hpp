#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "lccp/model.hpp"

namespace lccp {

inline constexpr std::size_t kOracleMaxN = 7;

struct OracleOptions {
  /// Merge states that differ only by a relabeling of coupons (and, with the
  /// identity truth, the same relabeling of labels). Off = raw states.
  bool canonicalize = true;
};

/// Exact E[number of samples] for tiny n. The state is the set of matchings
/// still consistent with every sample (a bitset over all n! permutations)
/// plus which coupons were seen; a coupon is known when every consistent
/// matching agrees on it (and, in VerticesUnknown mode, it has been seen).
double oracle_expected(std::size_t n, const SampleSizeDist& dist, const RecoveryTarget& target,
                       OracleOptions options = {});

/// P(T > t) for t = 0..t_max over the same state graph.
std::vector<double> oracle_tail(std::size_t n, const SampleSizeDist& dist,
                                const RecoveryTarget& target, std::size_t t_max,
                                OracleOptions options = {});

/// Number of distinct states the oracle explored (diagnostic).
std::size_t oracle_state_count(std::size_t n, const SampleSizeDist& dist,
                               const RecoveryTarget& target, OracleOptions options = {});

/// (E[T complete] with sizes {k:1}, E[T complete] with sizes {n-k:1}).
std::pair<double, double> lemma_nk_check(std::size_t n, std::size_t k,
                                         RecoveryMode mode = RecoveryMode::VerticesKnown);

}  // namespace lccp
