#include "lccp/oracle.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>

#include "lccp/error.hpp"

namespace lccp {

namespace {

using Mask = std::uint32_t;  // one bit per coupon (n <= 7)
using Perm = std::array<std::uint8_t, kOracleMaxN>;

/// Every permutation of {0..n-1} in lexicographic order, with the bitsets
/// of permutations that map each coupon subset onto itself.
class PermTable {
 public:
  explicit PermTable(std::size_t n) : n_(n) {
    Perm p{};
    std::iota(p.begin(), p.begin() + static_cast<long>(n), std::uint8_t{0});
    do {
      perms_.push_back(p);
      Mask fixed = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (p[c] == c) fixed |= Mask{1} << c;
      }
      fixed_.push_back(fixed);
    } while (std::next_permutation(p.begin(), p.begin() + static_cast<long>(n)));
    words_ = (perms_.size() + 63) / 64;

    factorial_.assign(n + 1, 1);
    for (std::size_t i = 1; i <= n; ++i) factorial_[i] = factorial_[i - 1] * i;

    stabilizer_.assign(std::size_t{1} << n, std::vector<std::uint64_t>(words_, 0));
    for (Mask s = 0; s < (Mask{1} << n); ++s) {
      for (std::size_t i = 0; i < perms_.size(); ++i) {
        if (image(perms_[i], s) == s) stabilizer_[s][i >> 6] |= std::uint64_t{1} << (i & 63);
      }
    }
  }

  std::size_t n() const { return n_; }
  std::size_t size() const { return perms_.size(); }
  std::size_t words() const { return words_; }
  const Perm& perm(std::size_t i) const { return perms_[i]; }
  Mask fixed(std::size_t i) const { return fixed_[i]; }
  const std::vector<std::uint64_t>& stabilizer(Mask s) const { return stabilizer_[s]; }

  Mask image(const Perm& p, Mask s) const {
    Mask out = 0;
    for (std::size_t c = 0; c < n_; ++c) {
      if (s >> c & 1U) out |= Mask{1} << p[c];
    }
    return out;
  }

  // Lehmer rank matching the lexicographic enumeration order
  std::size_t rank(const Perm& p) const {
    std::size_t r = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      std::size_t smaller = 0;
      for (std::size_t j = i + 1; j < n_; ++j) smaller += p[j] < p[i];
      r += smaller * factorial_[n_ - 1 - i];
    }
    return r;
  }

 private:
  std::size_t n_;
  std::size_t words_ = 0;
  std::vector<Perm> perms_;
  std::vector<Mask> fixed_;
  std::vector<std::size_t> factorial_;
  std::vector<std::vector<std::uint64_t>> stabilizer_;
};

template <class Fn>
void for_each_bit(const std::vector<std::uint64_t>& bits, Fn&& fn) {
  for (std::size_t w = 0; w < bits.size(); ++w) {
    std::uint64_t word = bits[w];
    while (word) {
      fn(w * 64 + static_cast<std::size_t>(std::countr_zero(word)));
      word &= word - 1;
    }
  }
}

std::size_t popcount(const std::vector<std::uint64_t>& bits) {
  std::size_t total = 0;
  for (auto w : bits) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

struct State {
  std::vector<std::uint64_t> matchings;  // consistent permutations
  Mask seen = 0;
  Mask target = 0;  // Specific target coupons, relabeled along with the state
};

struct Node {
  State state;
  bool done = false;
  double out_total = 0;  // probability of leaving the state
  double self = 0;
  std::vector<std::pair<std::uint32_t, double>> next;
};

class StateGraph {
 public:
  StateGraph(std::size_t n, const SampleSizeDist& dist, const RecoveryTarget& target,
             OracleOptions options)
      : table_(n), dist_(dist), target_(target), options_(options) {
    build();
  }

  const std::vector<Node>& nodes() const { return nodes_; }

  double expected() const {
    // refinement only shrinks the matching set or grows the seen set, so this
    // order puts every successor before its predecessor
    std::vector<std::uint32_t> order(nodes_.size());
    std::iota(order.begin(), order.end(), 0U);
    std::vector<std::size_t> size(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) size[i] = popcount(nodes_[i].state.matchings);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (size[a] != size[b]) return size[a] < size[b];
      return std::popcount(nodes_[a].state.seen) > std::popcount(nodes_[b].state.seen);
    });
    std::vector<double> value(nodes_.size(), 0.0);
    for (std::uint32_t id : order) {
      const Node& node = nodes_[id];
      if (node.done) continue;
      double acc = 1.0;
      for (const auto& [to, prob] : node.next) acc += prob * value[to];
      value[id] = acc / node.out_total;
    }
    return value[0];
  }

  std::vector<double> tail(std::size_t t_max) const {
    std::vector<double> mass(nodes_.size(), 0.0), next(nodes_.size(), 0.0);
    mass[0] = 1.0;
    std::vector<double> out;
    out.reserve(t_max + 1);
    for (std::size_t t = 0;; ++t) {
      double alive = 0.0;
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!nodes_[i].done) alive += mass[i];
      }
      out.push_back(alive);
      if (t == t_max) break;
      std::fill(next.begin(), next.end(), 0.0);
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const double m = mass[i];
        if (m == 0.0) continue;
        const Node& node = nodes_[i];
        if (node.done) {
          next[i] += m;
          continue;
        }
        next[i] += m * node.self;
        for (const auto& [to, prob] : node.next) next[to] += m * prob;
      }
      mass.swap(next);
    }
    return out;
  }

 private:
  Mask all() const { return (Mask{1} << table_.n()) - 1; }

  Mask known(const State& s) const {
    Mask fixed = all();
    for_each_bit(s.matchings, [&](std::size_t i) { fixed &= table_.fixed(i); });
    return fixed & s.seen;
  }

  bool target_met(const State& s) const {
    const Mask k = known(s);
    switch (target_.kind) {
      case RecoveryTarget::Kind::Complete:
        return k == all();
      case RecoveryTarget::Kind::Arbitrary:
        return static_cast<std::size_t>(std::popcount(k)) >= target_.r;
      case RecoveryTarget::Kind::Specific:
        return (k & s.target) == s.target;
    }
    return false;
  }

  static std::string raw_key(const State& s) {
    std::string key;
    key.reserve(2 + s.matchings.size() * 8);
    key.push_back(static_cast<char>(s.seen));
    key.push_back(static_cast<char>(s.target));
    key.append(reinterpret_cast<const char*>(s.matchings.data()), s.matchings.size() * 8);
    return key;
  }

  /// Relabels the state by a coupon permutation chosen to minimise the
  /// sequence of candidate-label masks. Coupons are first split into cells by
  /// relabeling-invariant features, and only orders within cells are tried.
  State canonical(const State& s) const {
    const std::size_t n = table_.n();
    std::array<Mask, kOracleMaxN> cand{};
    for_each_bit(s.matchings, [&](std::size_t i) {
      const Perm& p = table_.perm(i);
      for (std::size_t c = 0; c < n; ++c) cand[c] |= Mask{1} << p[c];
    });
    const Mask fixed = known(State{s.matchings, all(), 0});

    std::array<std::uint32_t, kOracleMaxN> feature{};
    for (std::size_t c = 0; c < n; ++c) {
      std::uint32_t indeg = 0;
      for (std::size_t d = 0; d < n; ++d) indeg += cand[d] >> c & 1U;
      feature[c] = ((s.target >> c & 1U) << 20) | ((s.seen >> c & 1U) << 19) |
                   ((fixed >> c & 1U) << 18) |
                   (static_cast<std::uint32_t>(std::popcount(cand[c])) << 8) | indeg;
    }
    std::array<std::uint8_t, kOracleMaxN> by_feature{};
    std::iota(by_feature.begin(), by_feature.begin() + static_cast<long>(n), std::uint8_t{0});
    std::stable_sort(by_feature.begin(), by_feature.begin() + static_cast<long>(n),
                     [&](auto a, auto b) { return feature[a] < feature[b]; });

    // cell boundaries over by_feature
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i + 1;
      while (j < n && feature[by_feature[j]] == feature[by_feature[i]]) ++j;
      cells.emplace_back(i, j);
      i = j;
    }

    auto relabel = [&](const Perm& to, Mask m) {
      Mask out = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (m >> c & 1U) out |= Mask{1} << to[c];
      }
      return out;
    };

    Perm order{};  // order[position] = coupon
    std::copy(by_feature.begin(), by_feature.begin() + static_cast<long>(n), order.begin());
    Perm best_to{};
    std::array<Mask, kOracleMaxN> best_code{};
    bool have = false;
    // odometer over the permutations of every cell
    while (true) {
      Perm to{};
      for (std::size_t pos = 0; pos < n; ++pos) to[order[pos]] = static_cast<std::uint8_t>(pos);
      std::array<Mask, kOracleMaxN> code{};
      for (std::size_t c = 0; c < n; ++c) code[to[c]] = relabel(to, cand[c]);
      if (!have || std::lexicographical_compare(code.begin(), code.begin() + static_cast<long>(n),
                                                best_code.begin(),
                                                best_code.begin() + static_cast<long>(n))) {
        have = true;
        best_code = code;
        best_to = to;
      }
      std::size_t cell = 0;
      for (; cell < cells.size(); ++cell) {
        auto [lo, hi] = cells[cell];
        if (std::next_permutation(order.begin() + static_cast<long>(lo),
                                  order.begin() + static_cast<long>(hi))) {
          break;
        }
      }
      if (cell == cells.size()) break;
    }

    State out;
    out.matchings.assign(table_.words(), 0);
    for_each_bit(s.matchings, [&](std::size_t i) {
      const Perm& p = table_.perm(i);
      Perm q{};
      for (std::size_t c = 0; c < n; ++c) q[best_to[c]] = best_to[p[c]];
      const std::size_t r = table_.rank(q);
      out.matchings[r >> 6] |= std::uint64_t{1} << (r & 63);
    });
    out.seen = relabel(best_to, s.seen);
    out.target = relabel(best_to, s.target);
    return out;
  }

  std::uint32_t intern(State s) {
    if (options_.canonicalize) s = canonical(s);
    std::string key = raw_key(s);
    auto [it, inserted] = index_.try_emplace(std::move(key), static_cast<std::uint32_t>(nodes_.size()));
    if (inserted) {
      Node node;
      node.done = target_met(s);
      node.state = std::move(s);
      nodes_.push_back(std::move(node));
      pending_.push_back(it->second);
    }
    return it->second;
  }

  void build() {
    const std::size_t n = table_.n();
    State start;
    start.matchings.assign(table_.words(), 0);
    for (std::size_t i = 0; i < table_.size(); ++i) {
      start.matchings[i >> 6] |= std::uint64_t{1} << (i & 63);
    }
    start.seen = target_.mode == RecoveryMode::VerticesKnown ? all() : 0;
    for (CouponId c : target_.coupons) start.target |= Mask{1} << c;
    intern(std::move(start));

    std::vector<std::pair<std::size_t, double>> sizes;  // (k, probability per subset)
    for (const auto& [k, pk] : dist_.entries()) {
      double subsets = 1.0;
      for (std::size_t i = 0; i < k; ++i) {
        subsets = subsets * static_cast<double>(n - i) / static_cast<double>(i + 1);
      }
      sizes.emplace_back(k, pk / subsets);
    }

    while (!pending_.empty()) {
      const std::uint32_t id = pending_.back();
      pending_.pop_back();
      if (nodes_[id].done) continue;
      const State current = nodes_[id].state;
      std::map<std::uint32_t, double> out;
      double self = 0.0;
      for (const auto& [k, prob] : sizes) {
        for (Mask s = 0; s <= all(); ++s) {
          if (static_cast<std::size_t>(std::popcount(s)) != k) continue;
          State next;
          next.matchings = current.matchings;
          const auto& stab = table_.stabilizer(s);
          for (std::size_t w = 0; w < next.matchings.size(); ++w) next.matchings[w] &= stab[w];
          next.seen = current.seen | s;
          next.target = current.target;
          if (next.seen == current.seen && next.matchings == current.matchings) {
            self += prob;
            continue;
          }
          out[intern(std::move(next))] += prob;
        }
      }
      Node& node = nodes_[id];
      node.self = self;
      node.next.assign(out.begin(), out.end());
      node.out_total = 0.0;
      for (const auto& [to, prob] : node.next) node.out_total += prob;
      if (node.next.empty()) {
        throw Error(ErrorKind::Unrecoverable,
                    "a reachable state can never meet the recovery target");
      }
    }
  }

  PermTable table_;
  const SampleSizeDist& dist_;
  const RecoveryTarget& target_;
  OracleOptions options_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> pending_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

void check_oracle_inputs(std::size_t n, const SampleSizeDist& dist,
                         const RecoveryTarget& target) {
  if (n == 0) throw Error(ErrorKind::ZeroSize, "n must be positive");
  if (n > kOracleMaxN) {
    throw Error(ErrorKind::TooLargeN, "oracle is limited to n <= " + std::to_string(kOracleMaxN));
  }
  dist.check_fits(n);
  target.validate(n);
}

}  // namespace

double oracle_expected(std::size_t n, const SampleSizeDist& dist, const RecoveryTarget& target,
                       OracleOptions options) {
  check_oracle_inputs(n, dist, target);
  return StateGraph(n, dist, target, options).expected();
}

std::vector<double> oracle_tail(std::size_t n, const SampleSizeDist& dist,
                                const RecoveryTarget& target, std::size_t t_max,
                                OracleOptions options) {
  check_oracle_inputs(n, dist, target);
  return StateGraph(n, dist, target, options).tail(t_max);
}

std::size_t oracle_state_count(std::size_t n, const SampleSizeDist& dist,
                               const RecoveryTarget& target, OracleOptions options) {
  check_oracle_inputs(n, dist, target);
  return StateGraph(n, dist, target, options).nodes().size();
}

std::pair<double, double> lemma_nk_check(std::size_t n, std::size_t k, RecoveryMode mode) {
  if (k < 1 || k >= n) {
    throw Error(ErrorKind::OutOfRange, "needs 1 <= k < n");
  }
  const auto target = RecoveryTarget::complete(mode);
  return {oracle_expected(n, make_fixed_dist(k), target),
          oracle_expected(n, make_fixed_dist(n - k), target)};
}

}  // namespace lccp
