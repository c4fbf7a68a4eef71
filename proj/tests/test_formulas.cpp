#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "lccp/formulas.hpp"
#include "lccp/inference.hpp"
#include "support/errors.hpp"

using namespace lccp;
using lccp::testing::error_kind;

TEST_CASE("harmonic numbers", "[formulas]") {
  CHECK(harmonic(1) == 1.0);
  CHECK(harmonic(3) == Catch::Approx(11.0 / 6).epsilon(1e-15));
  double direct = 0;
  for (int i = 1; i <= 2000; ++i) direct += 1.0 / i;
  CHECK(harmonic(2000) == Catch::Approx(direct).epsilon(1e-14));
  CHECK(harmonic(2000) == Catch::Approx(8.17837).epsilon(1e-6));
}

TEST_CASE("classic collector baselines", "[formulas]") {
  CHECK(ccp_expected_full(3) == Catch::Approx(5.5).epsilon(1e-15));
  CHECK(ccp_expected_partial(3, 2) == Catch::Approx(2.5).epsilon(1e-15));
  CHECK(ccp_expected_partial(3, 0) == 0.0);
  for (std::size_t n = 1; n <= 30; ++n) {
    REQUIRE(ccp_expected_partial(n, n) == Catch::Approx(ccp_expected_full(n)).epsilon(1e-14));
  }
  CHECK(error_kind([] { ccp_expected_partial(3, 4); }) == ErrorKind::TargetExceedsN);
  CHECK(error_kind([] { ccp_expected_full(0); }) == ErrorKind::ZeroSize);
}

TEST_CASE("specific-coupon tail", "[formulas]") {
  for (std::size_t n = 3; n <= 200; ++n) {
    REQUIRE(st1_tail(n, 0) == 1.0);
    REQUIRE(st1_tail(n, 1) == 1.0);
  }
  CHECK(st1_tail(3, 2) == Catch::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(error_kind([] { st1_tail(2, 1); }) == ErrorKind::TooSmallN);
}

TEST_CASE("specific-coupon expectation variants", "[formulas]") {
  const auto printed = st1_expected(3, St1Variant::Printed);
  CHECK(printed.value == Catch::Approx(138.0 / 66).epsilon(1e-14));
  CHECK(printed.provenance == Provenance::PrintedClosedForm);
  const auto tail = st1_expected(3, St1Variant::TailSum);
  CHECK(tail.value == Catch::Approx(2.5).epsilon(1e-14));
  CHECK(tail.provenance == Provenance::ProofTailSum);

  // closed form against the truncated sum plus its geometric remainder
  const std::size_t n = 10, horizon = 10000;
  const double nn = n;
  const double q1 = (nn - 2) / nn;
  const double q2 = ((nn - 2) * (nn - 3) + 2) / (nn * (nn - 1));
  const double q3 = (nn - 2) * (nn - 3) / (nn * (nn - 1));
  double partial = 0;
  for (std::size_t t = 0; t <= horizon; ++t) partial += st1_tail(n, t);
  const double h = horizon + 1;
  const double remainder = std::pow(q1, h) / (1 - q1) +
                           (nn - 1) * (std::pow(q2, h) / (1 - q2) - std::pow(q3, h) / (1 - q3));
  CHECK(std::abs(partial + remainder - st1_expected(n, St1Variant::TailSum).value) < 1e-9);
}

TEST_CASE("arbitrary-coupon series", "[formulas]") {
  CHECK(t1_expected_series(3).value == Catch::Approx(2.5).epsilon(1e-15));
  CHECK(t1_expected_series(4).value == Catch::Approx(2.5).epsilon(1e-15));
  CHECK(t1_expected_series(3).provenance == Provenance::PrintedClosedForm);
  CHECK(t1_expected_series_exact(3) == Rational(5, 2));
  CHECK(t1_expected_series_exact(4) == Rational(5, 2));
  for (std::size_t n = 3; n < 20; ++n) {
    REQUIRE(t1_expected_series(n).value ==
            Catch::Approx(t1_expected_series_exact(n).convert_to<double>()).epsilon(1e-13));
  }
  CHECK(error_kind([] { t1_expected_series_exact(20); }) == ErrorKind::TooLargeN);
}

TEST_CASE("n=3 K(p) printed form and proof series", "[formulas]") {
  CHECK(kp3_expected(0.0, Kp3Variant::Printed).value == Catch::Approx(-2.5).epsilon(1e-15));
  for (int i = 0; i <= 100; ++i) {
    REQUIRE(kp3_expected(i / 100.0, Kp3Variant::Printed).value < 0);
  }
  CHECK(kp3_expected(1.0, Kp3Variant::ProofSeries).value == Catch::Approx(3.25).epsilon(1e-11));
  CHECK(kp3_expected(0.0, Kp3Variant::ProofSeries).value == Catch::Approx(2.5).epsilon(1e-11));
  CHECK(kp3_expected(0.5, Kp3Variant::ProofSeries).provenance == Provenance::ProofSeries);
  CHECK(error_kind([] { kp3_expected(1.1, Kp3Variant::Printed); }) == ErrorKind::OutOfRange);
}

TEST_CASE("minimal sample counts", "[formulas]") {
  CHECK(min_samples(6, make_fixed_dist(2)).value == 4);
  CHECK(min_samples(6, make_fixed_dist(2)).proven);
  CHECK(min_samples(6, make_fixed_dist(1)).value == 6);
  const auto mix = min_samples(6, make_kp_dist(0.5));
  CHECK(mix.value == 4);
  CHECK(mix.k_m == 2);
  CHECK(mix.proven);
  for (std::size_t n = 3; n <= 9; ++n) {
    for (double q : {0.0, 0.1, 0.5, 0.99}) {
      REQUIRE(min_samples(n, make_kp_dist(q)).value == (2 * n + 2) / 3);
    }
  }
  const auto big = min_samples(12, make_fixed_dist(5));
  CHECK(big.value == 4);
  CHECK_FALSE(big.proven);
  // sizes past the middle reflect: 9 of 12 behaves like 3
  CHECK(min_samples(12, make_fixed_dist(9)).k_m == 3);
  CHECK(min_samples(1, make_fixed_dist(1)).value == 1);
  CHECK(error_kind([] { min_samples(4, make_fixed_dist(4)); }) == ErrorKind::Unrecoverable);
  CHECK(error_kind([] { min_samples(3, make_fixed_dist(4)); }) == ErrorKind::SizeExceedsN);
}

TEST_CASE("minimal witness recovers every label", "[formulas]") {
  CHECK(min_witness_k2(3) == std::vector<std::vector<CouponId>>{{0, 1}, {1, 2}});
  for (std::size_t n = 3; n <= 60; ++n) {
    const auto pairs = min_witness_k2(n);
    REQUIRE(pairs.size() == (2 * n + 2) / 3);
    const Instance inst = make_instance(n);
    auto st = init_knowledge(n, RecoveryMode::VerticesUnknown);
    for (const auto& p : pairs) {
      REQUIRE(p.size() == 2);
      st.absorb(make_sample(inst, p));
    }
    REQUIRE(known_coupons(st).size() == n);
  }
}

TEST_CASE("conjectured pair expectation", "[formulas]") {
  const auto c = conjectured_2lccp_expected(3);
  CHECK(c.value == Catch::Approx(2.75).epsilon(1e-15));
  CHECK(c.provenance == Provenance::Conjecture);
  CHECK(conjectured_2lccp_expected(2000).value == Catch::Approx(8178.4).epsilon(1e-5));
  CHECK(to_string(Provenance::ProofTailSum) == "proof_tail_sum");
}
