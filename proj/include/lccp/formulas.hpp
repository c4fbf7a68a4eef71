#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "lccp/markov.hpp"
#include "lccp/model.hpp"

namespace lccp {

enum class Provenance { PrintedClosedForm, ProofTailSum, ProofSeries, Baseline, Conjecture };

std::string_view to_string(Provenance provenance);

/// A value together with where its expression comes from, so printed closed
/// forms are never confused with expressions re-derived from their proofs.
struct FormulaResult {
  double value = 0;
  Provenance provenance = Provenance::Baseline;
};

double harmonic(std::size_t n);

/// Classic CCP: n * H_n.
double ccp_expected_full(std::size_t n);
/// Partial CCP, r of n coupons: n * (H_n - H_{n-r}).
double ccp_expected_partial(std::size_t n, std::size_t r);

/// P(ST > t) for one specific coupon under size-2 sampling:
/// q1^t + (q2^t - q3^t)(n - 1).
double st1_tail(std::size_t n, std::size_t t);

enum class St1Variant { Printed, TailSum };

/// E[ST] for one specific coupon under size-2 sampling. Printed is the
/// closed form n(n^3+n^2+5n-5)/((n+3)(5n-4)); TailSum sums st1_tail exactly.
/// The two do not agree.
FormulaResult st1_expected(std::size_t n, St1Variant variant);

/// E[T] for any one coupon under size-2 sampling:
/// sum_{i=0}^{floor(n/2)} n!/((n-2i)! 2^i) * (m-i)!/m!, m = (n-2)(n+1)/2.
FormulaResult t1_expected_series(std::size_t n);

/// Same series in exact rational arithmetic (n < 20).
Rational t1_expected_series_exact(std::size_t n);

enum class Kp3Variant { Printed, ProofSeries };

/// n = 3 with sizes K(p). Printed is the rational function
/// (13p^4+63p^3+74p^2-200p-120)/(4(p+2)^2(3-p)); ProofSeries sums the
/// case-by-case tail expression until the remainder bound drops below 1e-12.
/// Neither matches the exact chain.
FormulaResult kp3_expected(double p, Kp3Variant variant);

struct MinSamples {
  std::size_t value = 0;
  std::size_t k_m = 0;   // support size used, after reflection
  bool proven = false;   // false when the value rests on the 2n/(k+1) conjecture
};

/// Minimal number of samples for complete recovery (VerticesUnknown) with
/// sizes drawn from dist: picks the support size closest to n/2 and returns
/// ceil(2n/(k_m+1)).
MinSamples min_samples(std::size_t n, const SampleSizeDist& dist);

/// ceil(2n/3) size-2 coupon pairs that recover every label: a path over each
/// triplet, with the last group widened to 4 or 5 coupons when 3 does not
/// divide n.
std::vector<std::vector<CouponId>> min_witness_k2(std::size_t n);

/// n * H_n / 2.
FormulaResult conjectured_2lccp_expected(std::size_t n);

}  // namespace lccp
