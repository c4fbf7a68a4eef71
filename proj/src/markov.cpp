#include "lccp/markov.hpp"

#include <cmath>
#include <string>
#include <type_traits>

#include "lccp/error.hpp"

namespace lccp {

namespace {

constexpr double kMinExitProbability = 1e-14;

std::size_t choose2(std::size_t x) { return x * (x - (x > 0 ? 1 : 0)) / 2; }

class Layout {
 public:
  explicit Layout(std::size_t n) : n_(n), offsets_(n + 2, 0) {
    for (std::size_t g = 0; g <= n; ++g) offsets_[g + 1] = offsets_[g] + (n - g) / 2 + 1;
  }
  std::size_t size() const { return offsets_[n_ + 1]; }
  std::size_t index(const MarkovState& s) const { return offsets_[s.gamma] + s.beta / 2; }
  MarkovState state(std::size_t gamma, std::size_t slot) const {
    return {n_ - gamma - 2 * slot, 2 * slot, gamma};
  }
  std::size_t slots(std::size_t gamma) const { return (n_ - gamma) / 2 + 1; }

 private:
  std::size_t n_;
  std::vector<std::size_t> offsets_;
};

void check_state(const MarkovState& s, std::size_t n) {
  if (s.alpha + s.beta + s.gamma != n || s.beta % 2 != 0) {
    throw Error(ErrorKind::InvalidState,
                "(" + std::to_string(s.alpha) + "," + std::to_string(s.beta) + "," +
                    std::to_string(s.gamma) + ") is not a state for n = " + std::to_string(n));
  }
}

template <class Scalar>
void check_inputs(std::size_t n, const Scalar& p) {
  if (n == 0) throw Error(ErrorKind::ZeroSize, "n must be positive");
  if (p < 0 || p > 1) throw Error(ErrorKind::OutOfRange, "p outside [0,1]");
  if (n == 1 && p != 1) {
    throw Error(ErrorKind::SizeExceedsN, "size-2 samples need n >= 2");
  }
}

/// Calls emit(target, probability) for the six cases of the transition
/// equation, self-loop last. Zero cases are skipped.
template <class Scalar, class Emit>
void for_each_transition(const MarkovState& s, const Scalar& mu, const Scalar& lambda,
                         Emit&& emit) {
  const std::size_t a = s.alpha, b = s.beta, g = s.gamma;
  const std::size_t half = b / 2;
  auto out = [&](MarkovState t, const Scalar& prob) {
    if (prob != 0) emit(t, prob);
  };
  if (a >= 2) out({a - 2, b + 2, g}, mu * Scalar(choose2(a)));
  if (a >= 1 && b >= 2) out({a - 1, b - 2, g + 3}, mu * Scalar(a * b));
  if (b >= 4) out({a, b - 4, g + 4}, mu * Scalar(4 * choose2(half)));
  if (a >= 1) out({a - 1, b, g + 1}, mu * Scalar(a * g) + lambda * Scalar(a));
  if (b >= 2) out({a, b - 2, g + 2}, mu * Scalar(b * g) + lambda * Scalar(b));
  out(s, mu * Scalar(choose2(g) + half) + lambda * Scalar(g));
}

template <class Scalar>
std::pair<Scalar, Scalar> coefficients(std::size_t n, const Scalar& p) {
  const Scalar mu = n >= 2 ? Scalar(1 - p) / Scalar(choose2(n)) : Scalar(0);
  const Scalar lambda = p / Scalar(n);
  return {mu, lambda};
}

/// Reverse-topological hitting-time pass shared by the double and rational
/// solvers. Only states reachable from (n,0,0) are evaluated.
template <class Scalar>
Scalar hitting_time(std::size_t n, const Scalar& p) {
  check_inputs(n, p);
  if (p == 0 && n <= 2) {
    throw Error(ErrorKind::Unrecoverable,
                "size-2 sampling never identifies a label when n <= 2");
  }
  const Layout layout(n);
  const auto [mu, lambda] = coefficients(n, p);
  const std::size_t total = layout.size();

  std::vector<char> reachable(total, 0);
  reachable[0] = 1;
  for (std::size_t g = 0; g <= n; ++g) {
    for (std::size_t slot = 0; slot < layout.slots(g); ++slot) {
      const MarkovState s = layout.state(g, slot);
      if (!reachable[layout.index(s)]) continue;
      for_each_transition<Scalar>(s, mu, lambda, [&](const MarkovState& t, const Scalar&) {
        reachable[layout.index(t)] = 1;
      });
    }
  }

  std::vector<Scalar> expect(total, Scalar(0));
  for (std::size_t g = n + 1; g-- > 0;) {
    for (std::size_t slot = layout.slots(g); slot-- > 0;) {
      const MarkovState s = layout.state(g, slot);
      const std::size_t idx = layout.index(s);
      if (!reachable[idx] || g == n) continue;
      // divide by the summed exit probability rather than 1 - self, which cancels
      Scalar leave(0);
      Scalar acc(1);
      for_each_transition<Scalar>(s, mu, lambda, [&](const MarkovState& t, const Scalar& prob) {
        if (t == s) return;
        leave += prob;
        acc += prob * expect[layout.index(t)];
      });
      if (leave == 0) {
        throw Error(ErrorKind::Unrecoverable, "reachable state with no way out");
      }
      if constexpr (std::is_floating_point_v<Scalar>) {
        if (leave <= kMinExitProbability) {
          throw Error(ErrorKind::NumericalInstability, "self-loop probability within 1e-14 of 1");
        }
      }
      expect[idx] = acc / leave;
    }
  }
  return expect[0];
}

}  // namespace

std::vector<MarkovState> state_space(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::ZeroSize, "n must be positive");
  const Layout layout(n);
  std::vector<MarkovState> states;
  states.reserve(layout.size());
  for (std::size_t g = 0; g <= n; ++g) {
    for (std::size_t slot = 0; slot < layout.slots(g); ++slot) {
      states.push_back(layout.state(g, slot));
    }
  }
  return states;
}

std::size_t state_count(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::ZeroSize, "n must be positive");
  return Layout(n).size();
}

std::size_t state_index(std::size_t n, const MarkovState& s) {
  check_state(s, n);
  return Layout(n).index(s);
}

TransitionRow transition_row(const MarkovState& s, std::size_t n, double p) {
  check_inputs(n, p);
  check_state(s, n);
  const auto [mu, lambda] = coefficients(n, p);
  TransitionRow row;
  for_each_transition<double>(s, mu, lambda, [&](const MarkovState& t, double prob) {
    row.entries.emplace_back(t, prob);
  });
  return row;
}

double expected_complete(std::size_t n, double p) { return hitting_time<double>(n, p); }

Rational expected_complete_exact(std::size_t n, const Rational& p) {
  if (n > 12) throw Error(ErrorKind::TooLargeN, "exact rational solver is limited to n <= 12");
  return hitting_time<Rational>(n, p);
}

std::vector<double> tail_distribution(std::size_t n, double p, std::size_t t_max) {
  check_inputs(n, p);
  if (p == 0 && n <= 2) {
    throw Error(ErrorKind::Unrecoverable,
                "size-2 sampling never identifies a label when n <= 2");
  }
  const Layout layout(n);
  const auto [mu, lambda] = coefficients(n, p);
  const std::size_t total = layout.size();
  const std::size_t absorbing = total - 1;

  std::vector<double> mass(total, 0.0), next(total, 0.0);
  mass[0] = 1.0;
  std::vector<double> tail;
  tail.reserve(t_max + 1);
  for (std::size_t t = 0;; ++t) {
    double alive = 0.0;
    for (std::size_t i = 0; i < absorbing; ++i) alive += mass[i];
    tail.push_back(alive);
    if (t == t_max) break;
    std::fill(next.begin(), next.end(), 0.0);
    next[absorbing] = mass[absorbing];
    for (std::size_t g = 0; g < n; ++g) {
      for (std::size_t slot = 0; slot < layout.slots(g); ++slot) {
        const MarkovState s = layout.state(g, slot);
        const double m = mass[layout.index(s)];
        if (m == 0.0) continue;
        for_each_transition<double>(s, mu, lambda, [&](const MarkovState& to, double prob) {
          next[layout.index(to)] += m * prob;
        });
      }
    }
    mass.swap(next);
  }
  return tail;
}

double ccp_expected(std::size_t n, const SampleSizeDist& dist, std::size_t r) {
  if (n == 0) throw Error(ErrorKind::ZeroSize, "n must be positive");
  if (r > n) {
    throw Error(ErrorKind::TargetExceedsN,
                "r = " + std::to_string(r) + " exceeds n = " + std::to_string(n));
  }
  dist.check_fits(n);
  auto log_choose = [](std::size_t a, std::size_t b) {
    return std::lgamma(static_cast<double>(a) + 1) - std::lgamma(static_cast<double>(b) + 1) -
           std::lgamma(static_cast<double>(a - b) + 1);
  };

  // expect[c]: remaining draws with c coupons collected; zero once c >= r
  std::vector<double> expect(n + 1, 0.0);
  for (std::size_t c = r; c-- > 0;) {
    double stay = 0.0;
    double acc = 1.0;
    for (const auto& [k, pk] : dist.entries()) {
      const double denom = log_choose(n, k);
      const std::size_t j_lo = k > c ? k - c : 0;
      const std::size_t j_hi = std::min(k, n - c);
      for (std::size_t j = j_lo; j <= j_hi; ++j) {
        const double prob = pk * std::exp(log_choose(n - c, j) + log_choose(c, k - j) - denom);
        if (j == 0) {
          stay += prob;
        } else {
          acc += prob * expect[std::min(c + j, n)];
        }
      }
    }
    expect[c] = acc / (1.0 - stay);
  }
  return expect[0];
}

}  // namespace lccp
