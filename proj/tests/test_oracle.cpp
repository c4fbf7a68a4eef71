#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "lccp/formulas.hpp"
#include "lccp/markov.hpp"
#include "lccp/oracle.hpp"
#include "support/errors.hpp"
#include "support/minimality.hpp"

using namespace lccp;
using lccp::testing::error_kind;

namespace {

constexpr double kTol = 1e-9;
constexpr double kTightTol = 1e-12;

const SampleSizeDist kPairs = make_fixed_dist(2);

}  // namespace

TEST_CASE("oracle reference values", "[oracle]") {
  CHECK(std::abs(oracle_expected(3, kPairs, RecoveryTarget::complete()) - 2.5) < kTightTol);
  CHECK(std::abs(oracle_expected(3, make_fixed_dist(1), RecoveryTarget::complete()) - 5.5) < kTightTol);
  CHECK(std::abs(oracle_expected(3, kPairs, RecoveryTarget::specific({0})) - 2.5) < kTightTol);
  CHECK(std::abs(oracle_expected(5, make_fixed_dist(1), RecoveryTarget::complete()) - 137.0 / 12) <
        kTol);
  CHECK(oracle_expected(1, make_fixed_dist(1), RecoveryTarget::complete()) == 1.0);
  CHECK(oracle_expected(1, make_fixed_dist(1), RecoveryTarget::complete(RecoveryMode::VerticesKnown)) ==
        0.0);
}

TEST_CASE("oracle errors", "[oracle][errors]") {
  CHECK(error_kind([] { oracle_expected(8, kPairs, RecoveryTarget::complete()); }) ==
        ErrorKind::TooLargeN);
  CHECK(error_kind([] { oracle_expected(2, kPairs, RecoveryTarget::complete()); }) ==
        ErrorKind::Unrecoverable);
  CHECK(error_kind([] { oracle_expected(3, make_fixed_dist(4), RecoveryTarget::complete()); }) ==
        ErrorKind::SizeExceedsN);
  CHECK(error_kind([] { oracle_expected(3, kPairs, RecoveryTarget::arbitrary(4)); }) ==
        ErrorKind::InvalidTarget);
  CHECK(error_kind([] { lemma_nk_check(4, 4); }) == ErrorKind::OutOfRange);
  CHECK(error_kind([] { lemma_nk_check(4, 0); }) == ErrorKind::OutOfRange);
}

TEST_CASE("canonical memoization does not change values", "[oracle]") {
  const std::vector<SampleSizeDist> dists = {make_fixed_dist(1), kPairs, make_kp_dist(0.3),
                                             SampleSizeDist({{1, 0.2}, {2, 0.3}, {3, 0.5}})};
  for (std::size_t n = 3; n <= 4; ++n) {
    for (const auto& dist : dists) {
      for (auto mode : {RecoveryMode::VerticesUnknown, RecoveryMode::VerticesKnown}) {
        for (const auto& target :
             {RecoveryTarget::complete(mode), RecoveryTarget::arbitrary(1, mode),
              RecoveryTarget::arbitrary(2, mode), RecoveryTarget::specific({1}, mode),
              RecoveryTarget::specific({0, 2}, mode)}) {
          const double canon = oracle_expected(n, dist, target, {true});
          const double raw = oracle_expected(n, dist, target, {false});
          REQUIRE(std::abs(canon - raw) < kTightTol);
          REQUIRE(oracle_state_count(n, dist, target, {true}) <=
                  oracle_state_count(n, dist, target, {false}));
        }
      }
    }
  }
}

TEST_CASE("specific targets are symmetric in the coupon chosen", "[oracle]") {
  const auto dist = make_kp_dist(0.4);
  const double first = oracle_expected(5, dist, RecoveryTarget::specific({0}));
  for (CouponId c = 1; c < 5; ++c) {
    REQUIRE(std::abs(oracle_expected(5, dist, RecoveryTarget::specific({c})) - first) < kTightTol);
  }
  const double pair = oracle_expected(5, dist, RecoveryTarget::specific({0, 1}));
  CHECK(std::abs(oracle_expected(5, dist, RecoveryTarget::specific({2, 4})) - pair) < kTightTol);
}

TEST_CASE("oracle agrees with the Markov chain", "[oracle][markov]") {
  for (std::size_t n = 3; n <= 5; ++n) {
    for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      REQUIRE(std::abs(oracle_expected(n, make_kp_dist(p), RecoveryTarget::complete()) -
                       expected_complete(n, p)) < kTol);
    }
  }
}

TEST_CASE("one, two and three coupons take equally long under pair sampling", "[oracle]") {
  for (std::size_t n = 3; n <= 7; ++n) {
    const double t1 = oracle_expected(n, kPairs, RecoveryTarget::arbitrary(1));
    REQUIRE(std::abs(oracle_expected(n, kPairs, RecoveryTarget::arbitrary(2)) - t1) < kTightTol);
    REQUIRE(std::abs(oracle_expected(n, kPairs, RecoveryTarget::arbitrary(3)) - t1) < kTightTol);
    if (n <= 6) REQUIRE(std::abs(t1_expected_series(n).value - t1) < kTol);
  }
}

TEST_CASE("specific-coupon tail sum agrees with the oracle", "[oracle][formulas]") {
  for (std::size_t n = 3; n <= 5; ++n) {
    REQUIRE(std::abs(oracle_expected(n, kPairs, RecoveryTarget::specific({0})) -
                     st1_expected(n, St1Variant::TailSum).value) < kTol);
  }
}

TEST_CASE("oracle tails", "[oracle]") {
  const auto st = oracle_tail(3, kPairs, RecoveryTarget::specific({0}), 10);
  CHECK(st[0] == 1.0);
  CHECK(std::abs(st[2] - 1.0 / 3) < kTightTol);
  for (std::size_t t = 0; t <= 10; ++t) REQUIRE(std::abs(st[t] - st1_tail(3, t)) < kTightTol);

  const auto t1 = oracle_tail(4, kPairs, RecoveryTarget::arbitrary(1), 12);
  CHECK(t1[0] == 1.0);
  for (std::size_t t = 1; t <= 12; ++t) {
    REQUIRE(std::abs(t1[t] - std::pow(1.0 / 3, double(t) - 1)) < kTightTol);
  }

  // truncated tail sum with a geometric estimate of the rest
  const auto dist = make_kp_dist(0.5);
  const auto tail = oracle_tail(4, dist, RecoveryTarget::complete(), 400);
  double sum = 0;
  for (double v : tail) sum += v;
  const double ratio = tail[400] / tail[399];
  sum += tail[400] * ratio / (1 - ratio);
  CHECK(std::abs(sum - oracle_expected(4, dist, RecoveryTarget::complete())) < 1e-6);
}

TEST_CASE("k and n-k sampling with known vertices", "[oracle]") {
  const auto [a, b] = lemma_nk_check(4, 1);
  CHECK(std::abs(a - b) < kTol);
  const auto [c, d] = lemma_nk_check(5, 2);
  CHECK(std::abs(c - d) < kTol);
  const auto [e, f] = lemma_nk_check(4, 2);
  CHECK(e == f);
  for (std::size_t n = 3; n <= 6; ++n) {
    for (std::size_t k = 1; k < n; ++k) {
      const auto [x, y] = lemma_nk_check(n, k);
      REQUIRE(std::abs(x - y) < kTol);
    }
  }
}

TEST_CASE("no shorter pair sequence recovers everything", "[oracle][formulas]") {
  for (std::size_t n = 3; n <= 5; ++n) {
    const std::size_t minimum = (2 * n + 2) / 3;
    CHECK(lccp::testing::some_pair_sequence_recovers(n, minimum));
    CHECK_FALSE(lccp::testing::some_pair_sequence_recovers(n, minimum - 1));
  }
}
