#include "lccp/formulas.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "lccp/error.hpp"

namespace lccp {

std::string_view to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::PrintedClosedForm: return "printed_closed_form";
    case Provenance::ProofTailSum: return "proof_tail_sum";
    case Provenance::ProofSeries: return "proof_series";
    case Provenance::Baseline: return "baseline";
    case Provenance::Conjecture: return "conjecture";
  }
  return "unknown";
}

namespace {

constexpr std::size_t kExactTailSteps = 32;

Rational power(const Rational& base, unsigned e) {
  Rational r(1);
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

void require_n3(std::size_t n) {
  if (n < 3) throw Error(ErrorKind::TooSmallN, "needs n >= 3, got " + std::to_string(n));
}

}  // namespace

double harmonic(std::size_t n) {
  double h = 0.0;
  // smallest terms first
  for (std::size_t i = n; i >= 1; --i) h += 1.0 / static_cast<double>(i);
  return h;
}

double ccp_expected_full(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::ZeroSize, "n must be positive");
  return static_cast<double>(n) * harmonic(n);
}

double ccp_expected_partial(std::size_t n, std::size_t r) {
  if (n == 0) throw Error(ErrorKind::ZeroSize, "n must be positive");
  if (r > n) {
    throw Error(ErrorKind::TargetExceedsN,
                "r = " + std::to_string(r) + " exceeds n = " + std::to_string(n));
  }
  // n * sum_{i=0}^{r-1} 1/(n-i), summed directly rather than as H_n - H_{n-r}
  double s = 0.0;
  for (std::size_t i = r; i-- > 0;) s += 1.0 / static_cast<double>(n - i);
  return static_cast<double>(n) * s;
}

double st1_tail(std::size_t n, std::size_t t) {
  require_n3(n);
  if (t <= kExactTailSteps) {
    // exact rational evaluation, so e.g. t = 1 gives exactly 1
    const Rational q1(n - 2, n);
    const Rational q2((n - 2) * (n - 3) + 2, n * (n - 1));
    const Rational q3((n - 2) * (n - 3), n * (n - 1));
    const auto e = static_cast<unsigned>(t);
    const Rational value = power(q1, e) + (power(q2, e) - power(q3, e)) * (n - 1);
    return value.convert_to<double>();
  }
  const double nn = static_cast<double>(n);
  const double q1 = (nn - 2) / nn;
  const double q2 = ((nn - 2) * (nn - 3) + 2) / (nn * (nn - 1));
  const double q3 = (nn - 2) * (nn - 3) / (nn * (nn - 1));
  const double e = static_cast<double>(t);
  return std::pow(q1, e) + (std::pow(q2, e) - std::pow(q3, e)) * (nn - 1);
}

FormulaResult st1_expected(std::size_t n, St1Variant variant) {
  require_n3(n);
  const double nn = static_cast<double>(n);
  if (variant == St1Variant::Printed) {
    const double value =
        nn * (nn * nn * nn + nn * nn + 5 * nn - 5) / ((nn + 3) * (5 * nn - 4));
    return {value, Provenance::PrintedClosedForm};
  }
  const double q1 = (nn - 2) / nn;
  const double q2 = ((nn - 2) * (nn - 3) + 2) / (nn * (nn - 1));
  const double q3 = (nn - 2) * (nn - 3) / (nn * (nn - 1));
  const double value = 1 / (1 - q1) + (nn - 1) / (1 - q2) - (nn - 1) / (1 - q3);
  return {value, Provenance::ProofTailSum};
}

FormulaResult t1_expected_series(std::size_t n) {
  require_n3(n);
  const double m = static_cast<double>((n - 2) * (n + 1) / 2);
  double term = 1.0;
  double sum = 1.0;
  for (std::size_t i = 1; i <= n / 2; ++i) {
    const double a = static_cast<double>(n - 2 * i + 2);
    const double b = static_cast<double>(n - 2 * i + 1);
    term *= a * b / 2.0 / (m - static_cast<double>(i) + 1.0);
    sum += term;
  }
  return {sum, Provenance::PrintedClosedForm};
}

Rational t1_expected_series_exact(std::size_t n) {
  require_n3(n);
  if (n >= 20) throw Error(ErrorKind::TooLargeN, "exact series is limited to n < 20");
  const std::size_t m = (n - 2) * (n + 1) / 2;
  Rational term(1);
  Rational sum(1);
  for (std::size_t i = 1; i <= n / 2; ++i) {
    term *= Rational((n - 2 * i + 2) * (n - 2 * i + 1), 2 * (m - i + 1));
    sum += term;
  }
  return sum;
}

FormulaResult kp3_expected(double p, Kp3Variant variant) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, "p = " + std::to_string(p) + " not in [0,1]");
  }
  if (variant == Kp3Variant::Printed) {
    const double num = 13 * std::pow(p, 4) + 63 * std::pow(p, 3) + 74 * p * p - 200 * p - 120;
    const double den = 4 * (p + 2) * (p + 2) * (3 - p);
    return {num / den, Provenance::PrintedClosedForm};
  }

  const double q = 1.0 - p;
  double total = 2.0;
  for (std::size_t t = 2;; ++t) {
    const double td = static_cast<double>(t);
    const double scale = std::pow(3.0, td - 1);
    double inner = 0.0;
    double binom = td * (td - 1) / 2;  // C(t, 2)
    for (std::size_t s = 2; s + 1 <= t; ++s) {
      const double sd = static_cast<double>(s);
      inner += binom * std::pow(p, sd) * std::pow(q, td - sd) * (sd + 3);
      binom = binom * (td - sd) / (sd + 1);
    }
    inner += std::pow(q, td) + 3 * td * p * std::pow(q, td - 1) + std::pow(p, td) * td;
    total += inner / scale;

    // every later term is at most 3u / 3^(u-1); bound the remainder by that sum
    const double x = 1.0 / 3.0;
    const double remainder =
        9.0 * std::pow(x, td + 1) * ((td + 1) - td * x) / ((1 - x) * (1 - x));
    if (remainder < 1e-12) break;
  }
  return {total, Provenance::ProofSeries};
}

MinSamples min_samples(std::size_t n, const SampleSizeDist& dist) {
  if (n == 0) throw Error(ErrorKind::ZeroSize, "n must be positive");
  dist.check_fits(n);
  if (n == 1) return {1, 1, true};

  const double half = static_cast<double>(n) / 2.0;
  bool have = false;
  double best_dist = 0;
  std::size_t best_k = 0;
  for (std::size_t k : dist.support()) {
    if (k == n) continue;  // never separates any coupon from the rest
    // k and n-k behave alike; only sizes strictly past the middle pair reflect
    const std::size_t reflected = 2 * k > n + 1 ? n - k : k;
    const double d = std::abs(static_cast<double>(k) - half);
    if (!have || d < best_dist || (d == best_dist && reflected > best_k)) {
      have = true;
      best_dist = d;
      best_k = reflected;
    }
  }
  if (!have) {
    throw Error(ErrorKind::Unrecoverable, "every sample contains all coupons");
  }
  const std::size_t value = (2 * n + best_k) / (best_k + 1);  // ceil(2n/(k+1))
  return {value, best_k, best_k <= 2};
}

std::vector<std::vector<CouponId>> min_witness_k2(std::size_t n) {
  require_n3(n);
  std::vector<std::vector<CouponId>> pairs;
  const std::size_t groups = n / 3;
  std::size_t start = 0;
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t width = (g + 1 == groups) ? n - start : 3;
    for (std::size_t i = start; i + 1 < start + width; ++i) {
      pairs.push_back({static_cast<CouponId>(i), static_cast<CouponId>(i + 1)});
    }
    start += width;
  }
  return pairs;
}

FormulaResult conjectured_2lccp_expected(std::size_t n) {
  require_n3(n);
  return {static_cast<double>(n) * harmonic(n) / 2.0, Provenance::Conjecture};
}

}  // namespace lccp
