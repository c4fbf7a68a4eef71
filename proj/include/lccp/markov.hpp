#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lccp/model.hpp"

namespace lccp {

using Rational = boost::multiprecision::cpp_rational;

/// Counts of unknown (alpha), partly-known (beta, always even) and known
/// (gamma) coupons for sample sizes {1, 2}.
struct MarkovState {
  std::size_t alpha = 0;
  std::size_t beta = 0;
  std::size_t gamma = 0;

  friend bool operator==(const MarkovState&, const MarkovState&) = default;
};

struct TransitionRow {
  std::vector<std::pair<MarkovState, double>> entries;  // self-loop included
};

/// All states of the chain in topological order: gamma ascending, then alpha
/// descending. Starts at (n,0,0) and ends at (0,0,n).
std::vector<MarkovState> state_space(std::size_t n);

std::size_t state_count(std::size_t n);

/// Position of s inside state_space(n).
std::size_t state_index(std::size_t n, const MarkovState& s);

/// One row of the K(p) transition matrix with mu = (1-p)/C(n,2), lambda = p/n.
/// Zero-probability entries are omitted.
TransitionRow transition_row(const MarkovState& s, std::size_t n, double p);

/// E[T] for complete recovery from (n,0,0), by one reverse-topological pass:
/// E(s) = (1 + sum_{s' != s} P(s->s') E(s')) / (1 - P(s->s)).
double expected_complete(std::size_t n, double p);

/// Exact rational counterpart of expected_complete for n <= 12.
Rational expected_complete_exact(std::size_t n, const Rational& p);

/// P(T > t) for t = 0..t_max by forward propagation from (n,0,0).
std::vector<double> tail_distribution(std::size_t n, double p, std::size_t t_max);

/// Expected number of group draws until at least r distinct coupons were
/// collected (plain K-CCP, no labels). Hypergeometric transitions over the
/// collected count.
double ccp_expected(std::size_t n, const SampleSizeDist& dist, std::size_t r);

}  // namespace lccp
