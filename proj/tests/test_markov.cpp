#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <vector>

#include "lccp/formulas.hpp"
#include "lccp/markov.hpp"
#include "support/errors.hpp"

using namespace lccp;
using lccp::testing::error_kind;

namespace {

constexpr double kRowTol = 1e-12;

std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> as_map(const TransitionRow& row) {
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> m;
  for (const auto& [s, p] : row.entries) m[{s.alpha, s.beta, s.gamma}] += p;
  return m;
}

}  // namespace

TEST_CASE("state space order and size", "[markov]") {
  const auto two = state_space(2);
  REQUIRE(two.size() == 4);
  CHECK(two[0] == MarkovState{2, 0, 0});
  CHECK(two[1] == MarkovState{0, 2, 0});
  CHECK(two[2] == MarkovState{1, 0, 1});
  CHECK(two[3] == MarkovState{0, 0, 2});

  const auto one = state_space(1);
  REQUIRE(one.size() == 2);
  CHECK(one[0] == MarkovState{1, 0, 0});
  CHECK(one[1] == MarkovState{0, 0, 1});

  CHECK(state_count(2000) == 1002001);
  for (std::size_t n = 1; n <= 30; ++n) {
    const auto states = state_space(n);
    std::size_t count = 0;
    for (std::size_t g = 0; g <= n; ++g) count += (n - g) / 2 + 1;
    REQUIRE(states.size() == count);
    REQUIRE(states.size() == state_count(n));
    for (std::size_t i = 0; i < states.size(); ++i) REQUIRE(state_index(n, states[i]) == i);
  }
  CHECK(error_kind([] { state_space(0); }) == ErrorKind::ZeroSize);
}

TEST_CASE("transition rows from the worked examples", "[markov]") {
  const auto a = as_map(transition_row({3, 0, 0}, 3, 0.0));
  REQUIRE(a.size() == 1);
  CHECK(a.at({1, 2, 0}) == Catch::Approx(1.0).epsilon(1e-15));

  const auto b = as_map(transition_row({1, 2, 0}, 3, 0.0));
  REQUIRE(b.size() == 2);
  CHECK(b.at({0, 0, 3}) == Catch::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(b.at({1, 2, 0}) == Catch::Approx(1.0 / 3).epsilon(1e-15));

  const auto c = as_map(transition_row({2, 0, 1}, 3, 1.0));
  REQUIRE(c.size() == 2);
  CHECK(c.at({1, 0, 2}) == Catch::Approx(2.0 / 3).epsilon(1e-15));
  CHECK(c.at({2, 0, 1}) == Catch::Approx(1.0 / 3).epsilon(1e-15));

  CHECK(error_kind([] { transition_row({2, 1, 0}, 3, 0.5); }) == ErrorKind::InvalidState);
  CHECK(error_kind([] { transition_row({2, 0, 0}, 3, 0.5); }) == ErrorKind::InvalidState);
}

TEST_CASE("rows are stochastic and move forward", "[markov]") {
  for (std::size_t n = 1; n <= 50; ++n) {
    for (int step = 0; step <= 10; ++step) {
      const double p = step / 10.0;
      if (n == 1 && step != 10) continue;
      for (const auto& s : state_space(n)) {
        double sum = 0;
        const auto row = transition_row(s, n, p);
        // the self-loop, when it has positive probability, comes last
        for (std::size_t i = 0; i + 1 < row.entries.size(); ++i) REQUIRE_FALSE(row.entries[i].first == s);
        for (const auto& [t, prob] : row.entries) {
          REQUIRE(prob > 0.0);
          REQUIRE(prob <= 1.0 + kRowTol);
          sum += prob;
          if (t == s) continue;
          REQUIRE(state_index(n, t) > state_index(n, s));
          REQUIRE((t.gamma > s.gamma || (t.gamma == s.gamma && t.alpha < s.alpha)));
        }
        REQUIRE(std::abs(sum - 1.0) <= kRowTol);
      }
    }
  }
}

TEST_CASE("expected_complete small values", "[markov]") {
  CHECK(expected_complete(3, 0.0) == 2.5);
  CHECK(expected_complete(3, 1.0) == 5.5);
  CHECK(expected_complete(1, 1.0) == 1.0);
  for (std::size_t n = 2; n <= 40; ++n) {
    REQUIRE(expected_complete(n, 1.0) == Catch::Approx(ccp_expected_full(n)).epsilon(1e-12));
  }
  CHECK(error_kind([] { expected_complete(2, 0.0); }) == ErrorKind::Unrecoverable);
  CHECK(error_kind([] { expected_complete(1, 0.5); }) == ErrorKind::SizeExceedsN);
  CHECK(error_kind([] { expected_complete(0, 0.5); }) == ErrorKind::ZeroSize);
  CHECK(error_kind([] { expected_complete(4, 1.5); }) == ErrorKind::OutOfRange);
  CHECK_FALSE(error_kind([] { expected_complete(2, 0.01); }));
}

TEST_CASE("rational solver anchors the floating-point one", "[markov]") {
  CHECK(expected_complete_exact(3, Rational(0)) == Rational(5, 2));
  CHECK(expected_complete_exact(3, Rational(1)) == Rational(11, 2));
  CHECK(expected_complete_exact(3, Rational(1, 2)) == Rational(37, 10));
  for (std::size_t n = 2; n <= 12; ++n) {
    for (const Rational p : {Rational(1, 10), Rational(1, 2), Rational(3, 4), Rational(1)}) {
      const double exact = expected_complete_exact(n, p).convert_to<double>();
      REQUIRE(expected_complete(n, p.convert_to<double>()) == Catch::Approx(exact).epsilon(1e-12));
    }
  }
  CHECK(error_kind([] { expected_complete_exact(13, Rational(1, 2)); }) == ErrorKind::TooLargeN);
}

TEST_CASE("tail distribution", "[markov]") {
  const auto t3 = tail_distribution(3, 0.0, 200);
  REQUIRE(t3.size() == 201);
  CHECK(t3[0] == 1.0);
  CHECK(t3[1] == 1.0);
  CHECK(t3[2] == Catch::Approx(1.0 / 3).epsilon(1e-15));
  double sum = 0;
  for (double v : t3) sum += v;
  CHECK(std::abs(sum - expected_complete(3, 0.0)) < 1e-6);

  for (double p : {0.0, 0.4, 1.0}) {
    const auto t = tail_distribution(8, p, 400);
    CHECK(t[0] == 1.0);
    for (std::size_t i = 1; i < t.size(); ++i) REQUIRE(t[i] <= t[i - 1] + 1e-15);
    double s = 0;
    for (double v : t) s += v;
    CHECK(std::abs(s - expected_complete(8, p)) < 1e-6);
  }
}

TEST_CASE("group-drawing coverage chain", "[markov]") {
  CHECK(ccp_expected(3, make_fixed_dist(1), 3) == Catch::Approx(5.5).epsilon(1e-14));
  CHECK(ccp_expected(3, make_fixed_dist(1), 2) == Catch::Approx(2.5).epsilon(1e-14));
  CHECK(ccp_expected(3, make_fixed_dist(1), 0) == 0.0);
  // n=4 pairs: 1 + (1 + 4/6 * 2) / (5/6) by first-step analysis
  CHECK(ccp_expected(4, make_fixed_dist(2), 4) == Catch::Approx(3.8).epsilon(1e-14));
  // size-2 draws from 3 coupons: the first draw covers 2, then each draw finds the last w.p. 2/3
  CHECK(ccp_expected(3, make_fixed_dist(2), 3) == Catch::Approx(2.5).epsilon(1e-14));
  CHECK(ccp_expected(5, make_fixed_dist(5), 5) == Catch::Approx(1.0).epsilon(1e-14));
  CHECK(error_kind([] { ccp_expected(3, make_fixed_dist(1), 4); }) == ErrorKind::TargetExceedsN);
  CHECK(error_kind([] { ccp_expected(2, make_fixed_dist(3), 1); }) == ErrorKind::SizeExceedsN);
}

TEST_CASE("LCCP strictly exceeds collecting n-1 coupons", "[markov]") {
  for (std::size_t n = 3; n <= 10; ++n) {
    for (double p : {0.0, 0.5, 1.0}) {
      REQUIRE(expected_complete(n, p) > ccp_expected(n, make_kp_dist(p), n - 1));
    }
  }
}

TEST_CASE("large n stays tractable", "[markov][slow]") {
  const double e = expected_complete(2000, 0.0);
  const double ratio = e / conjectured_2lccp_expected(2000).value;
  CHECK(ratio >= 0.9);
  CHECK(ratio <= 1.1);
}
