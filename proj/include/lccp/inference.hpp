#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lccp/model.hpp"

namespace lccp {

/// Fixed-width bitset sized at runtime; one per coupon for its candidate labels.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::size_t bits) : words_((bits + 63) / 64, 0) {}

  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void fill(std::size_t bits);
  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  LabelSet& operator&=(const LabelSet& other);
  LabelSet& operator|=(const LabelSet& other);
  LabelSet& subtract(const LabelSet& other);

  std::size_t count() const;
  bool empty() const;
  std::vector<LabelId> to_vector() const;

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w];
      while (bits) {
        const int b = __builtin_ctzll(bits);
        fn(static_cast<LabelId>(w * 64 + static_cast<std::size_t>(b)));
        bits &= bits - 1;
      }
    }
  }

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::vector<std::uint64_t> words_;
};

/// What the collector knows: which coupons have appeared and, for each, the
/// labels still consistent with every absorbed sample.
///
/// Absorbing a sample applies two rules, which together are equivalent to
/// "the sample's coupons map onto the sample's labels":
///   (i)  coupons in the sample keep only the sample's labels;
///   (ii) every other coupon loses the sample's labels.
/// In VerticesUnknown mode a coupon first seen now starts from the sample's
/// labels minus every label seen before, which is rule (ii) applied lazily.
class KnowledgeState {
 public:
  KnowledgeState(std::size_t n, RecoveryMode mode);

  std::size_t n() const noexcept { return n_; }
  RecoveryMode mode() const noexcept { return mode_; }
  bool seen(CouponId c) const { return seen_[c] != 0; }
  std::size_t seen_count() const noexcept { return seen_count_; }
  const LabelSet& candidates(CouponId c) const { return candidates_[c]; }
  std::size_t samples_absorbed() const noexcept { return samples_; }

  /// True while every absorbed sample had size 1 or 2.
  bool pair_history() const noexcept { return pair_history_; }
  /// Co-occurrence multigraph H: one edge per size-2 sample.
  const std::vector<std::pair<CouponId, CouponId>>& pair_edges() const noexcept {
    return pair_edges_;
  }
  /// Coupons drawn alone, one entry per size-1 sample.
  const std::vector<CouponId>& singletons() const noexcept { return singletons_; }

  void absorb(const Sample& sample);

 private:
  std::size_t n_;
  RecoveryMode mode_;
  std::vector<char> seen_;
  std::size_t seen_count_ = 0;
  std::vector<LabelSet> candidates_;
  LabelSet seen_labels_;
  std::size_t samples_ = 0;
  bool pair_history_ = true;
  std::vector<std::pair<CouponId, CouponId>> pair_edges_;
  std::vector<CouponId> singletons_;
};

KnowledgeState init_knowledge(std::size_t n, RecoveryMode mode);

KnowledgeState absorb_sample(KnowledgeState state, const Sample& sample);

/// Coupons whose label is the same in every perfect matching of the
/// candidate graph. A reference perfect matching is found by augmenting
/// paths; a coupon is known iff its strongly connected component in the
/// swap digraph (c -> c' when ref[c'] is a candidate of c) is a singleton.
std::vector<CouponId> known_coupons(const KnowledgeState& state);

/// Same contract, using the instance's hidden matching as the reference.
std::vector<CouponId> known_coupons(const KnowledgeState& state, const Instance& instance);

/// Components of size >= 3 in H, where each size-1 sample attaches its
/// coupon to an already-known virtual triple. Requires a pair history in
/// VerticesUnknown mode; throws UnsupportedHistory otherwise.
std::vector<CouponId> known_by_component_rule(const KnowledgeState& state);

bool target_met(std::span<const CouponId> known, std::size_t n, const RecoveryTarget& target);

bool is_recovered(const KnowledgeState& state, const RecoveryTarget& target);
bool is_recovered(const KnowledgeState& state, const RecoveryTarget& target,
                  const Instance& instance);

/// Incremental form of the component rule used on the simulation fast path
/// (VerticesUnknown, sample sizes 1 and 2). Tracks how many coupons, and how
/// many target coupons, are known.
class ComponentTracker {
 public:
  ComponentTracker(std::size_t n, std::span<const CouponId> target_coupons = {});

  void add_single(CouponId c);
  void add_pair(CouponId a, CouponId b);

  std::size_t known_count() const noexcept { return known_; }
  std::size_t target_known() const noexcept { return target_known_; }
  std::size_t target_size() const noexcept { return target_size_; }
  bool is_known(CouponId c) const;

 private:
  CouponId find(CouponId c);
  CouponId find_const(CouponId c) const;
  bool known_root(CouponId root) const { return anchored_[root] || size_[root] >= 3; }

  std::vector<CouponId> parent_;
  std::vector<std::uint32_t> size_;
  std::vector<std::uint32_t> target_in_;
  std::vector<char> anchored_;
  std::size_t known_ = 0;
  std::size_t target_known_ = 0;
  std::size_t target_size_ = 0;
};

}  // namespace lccp
