#include "lccp/inference.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <numeric>
#include <string>

#include "lccp/error.hpp"

namespace lccp {

void LabelSet::fill(std::size_t bits) {
  std::fill(words_.begin(), words_.end(), ~std::uint64_t{0});
  if (bits % 64 != 0 && !words_.empty()) {
    words_.back() = (std::uint64_t{1} << (bits % 64)) - 1;
  }
}

LabelSet& LabelSet::operator&=(const LabelSet& other) {
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= other.words_[w];
  return *this;
}

LabelSet& LabelSet::operator|=(const LabelSet& other) {
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
  return *this;
}

LabelSet& LabelSet::subtract(const LabelSet& other) {
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= ~other.words_[w];
  return *this;
}

std::size_t LabelSet::count() const {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

bool LabelSet::empty() const {
  return std::all_of(words_.begin(), words_.end(), [](auto w) { return w == 0; });
}

std::vector<LabelId> LabelSet::to_vector() const {
  std::vector<LabelId> out;
  for_each([&](LabelId l) { out.push_back(l); });
  return out;
}

KnowledgeState::KnowledgeState(std::size_t n, RecoveryMode mode)
    : n_(n), mode_(mode), seen_(n, 0), candidates_(n, LabelSet(n)), seen_labels_(n) {
  if (n == 0) throw Error(ErrorKind::ZeroSize, "knowledge state needs n >= 1");
  if (mode == RecoveryMode::VerticesKnown) {
    std::fill(seen_.begin(), seen_.end(), 1);
    seen_count_ = n;
    for (auto& cand : candidates_) cand.fill(n);
    seen_labels_.fill(n);
  }
}

void KnowledgeState::absorb(const Sample& sample) {
  const std::size_t k = sample.coupons.size();
  if (k == 0 || sample.labels.size() != k) {
    throw Error(ErrorKind::InvalidState, "sample coupon and label sets differ in size");
  }
  LabelSet in_sample(n_);
  for (LabelId l : sample.labels) {
    if (l >= n_) throw Error(ErrorKind::IdOutOfRange, "label id " + std::to_string(l));
    in_sample.set(l);
  }
  std::vector<char> member(n_, 0);
  for (CouponId c : sample.coupons) {
    if (c >= n_) throw Error(ErrorKind::IdOutOfRange, "coupon id " + std::to_string(c));
    member[c] = 1;
  }

  // rule (ii) first, so that it only touches coupons seen before this sample
  for (std::size_t c = 0; c < n_; ++c) {
    if (seen_[c] && !member[c]) {
      for (LabelId l : sample.labels) candidates_[c].reset(l);
    }
  }
  // rule (i)
  for (CouponId c : sample.coupons) {
    if (!seen_[c]) {
      candidates_[c] = in_sample;
      candidates_[c].subtract(seen_labels_);
      seen_[c] = 1;
      ++seen_count_;
    } else {
      candidates_[c] &= in_sample;
    }
  }
  seen_labels_ |= in_sample;

  ++samples_;
  if (k == 1) {
    singletons_.push_back(sample.coupons[0]);
  } else if (k == 2) {
    pair_edges_.emplace_back(sample.coupons[0], sample.coupons[1]);
  } else {
    pair_history_ = false;
  }
}

KnowledgeState init_knowledge(std::size_t n, RecoveryMode mode) {
  return KnowledgeState(n, mode);
}

KnowledgeState absorb_sample(KnowledgeState state, const Sample& sample) {
  state.absorb(sample);
  return state;
}

namespace {

constexpr std::uint32_t kNone = 0xffffffffU;

// Kuhn's augmenting paths over seen coupons. Returns ref[c] for seen c.
std::vector<LabelId> find_reference_matching(const KnowledgeState& state) {
  const std::size_t n = state.n();
  std::vector<LabelId> coupon_to_label(n, kNone);
  std::vector<CouponId> label_to_coupon(n, kNone);
  std::vector<std::uint32_t> visited(n, 0);
  std::uint32_t stamp = 0;

  // explicit stack: (coupon, remaining candidate list, position)
  struct Frame {
    CouponId coupon;
    std::vector<LabelId> cands;
    std::size_t pos;
  };

  for (std::size_t root = 0; root < n; ++root) {
    if (!state.seen(static_cast<CouponId>(root))) continue;
    ++stamp;
    std::vector<Frame> stack;
    std::vector<LabelId> via;  // label chosen at each frame
    stack.push_back({static_cast<CouponId>(root),
                     state.candidates(static_cast<CouponId>(root)).to_vector(), 0});
    bool found = false;
    while (!stack.empty() && !found) {
      Frame& top = stack.back();
      if (top.pos == top.cands.size()) {
        stack.pop_back();
        if (!via.empty()) via.pop_back();
        continue;
      }
      const LabelId l = top.cands[top.pos++];
      if (visited[l] == stamp) continue;
      visited[l] = stamp;
      via.push_back(l);
      const CouponId owner = label_to_coupon[l];
      if (owner == kNone) {
        found = true;
      } else {
        stack.push_back({owner, state.candidates(owner).to_vector(), 0});
      }
    }
    if (!found) {
      throw Error(ErrorKind::InvalidState, "candidate graph has no perfect matching");
    }
    // flip the augmenting path: stack[i].coupon takes via[i]
    for (std::size_t i = 0; i < stack.size(); ++i) {
      coupon_to_label[stack[i].coupon] = via[i];
      label_to_coupon[via[i]] = stack[i].coupon;
    }
  }
  return coupon_to_label;
}

// Coupons in singleton SCCs of the swap digraph, restricted to seen coupons.
std::vector<CouponId> forced_coupons(const KnowledgeState& state,
                                     std::span<const CouponId> label_owner) {
  const std::size_t n = state.n();
  std::vector<std::uint32_t> index(n, kNone), low(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<CouponId> scc_stack;
  std::vector<char> known(n, 0);
  std::uint32_t counter = 0;

  struct Frame {
    CouponId v;
    std::vector<CouponId> next;
    std::size_t pos;
  };
  auto successors = [&](CouponId v) {
    std::vector<CouponId> out;
    state.candidates(v).for_each([&](LabelId l) {
      const CouponId w = label_owner[l];
      if (w != v) out.push_back(w);
    });
    return out;
  };

  // iterative Tarjan
  for (std::size_t s = 0; s < n; ++s) {
    const auto start = static_cast<CouponId>(s);
    if (!state.seen(start) || index[start] != kNone) continue;
    std::vector<Frame> call;
    call.push_back({start, successors(start), 0});
    index[start] = low[start] = counter++;
    scc_stack.push_back(start);
    on_stack[start] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.pos < f.next.size()) {
        const CouponId w = f.next[f.pos++];
        if (index[w] == kNone) {
          index[w] = low[w] = counter++;
          scc_stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, successors(w), 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const CouponId v = f.v;
      if (low[v] == index[v]) {
        std::size_t popped = 0;
        CouponId w;
        do {
          w = scc_stack.back();
          scc_stack.pop_back();
          on_stack[w] = 0;
          ++popped;
        } while (w != v);
        if (popped == 1) known[v] = 1;
      }
      call.pop_back();
      if (!call.empty()) {
        const CouponId parent = call.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }

  std::vector<CouponId> out;
  for (std::size_t c = 0; c < n; ++c) {
    if (known[c]) out.push_back(static_cast<CouponId>(c));
  }
  return out;
}

}  // namespace

std::vector<CouponId> known_coupons(const KnowledgeState& state) {
  const auto ref = find_reference_matching(state);
  std::vector<CouponId> owner(state.n(), kNone);
  for (std::size_t c = 0; c < state.n(); ++c) {
    if (ref[c] != kNone) owner[ref[c]] = static_cast<CouponId>(c);
  }
  return forced_coupons(state, owner);
}

std::vector<CouponId> known_coupons(const KnowledgeState& state, const Instance& instance) {
  if (instance.n() != state.n()) {
    throw Error(ErrorKind::InvalidState, "instance and knowledge state sizes differ");
  }
  std::vector<CouponId> owner(instance.n());
  for (std::size_t l = 0; l < instance.n(); ++l) {
    owner[l] = instance.coupon_of(static_cast<LabelId>(l));
  }
  auto known = forced_coupons(state, owner);
#ifndef NDEBUG
  for (CouponId c : known) {
    assert(state.candidates(c).test(instance.label_of(c)));
  }
#endif
  return known;
}

std::vector<CouponId> known_by_component_rule(const KnowledgeState& state) {
  if (!state.pair_history()) {
    throw Error(ErrorKind::UnsupportedHistory, "a sample of size >= 3 was absorbed");
  }
  if (state.mode() != RecoveryMode::VerticesUnknown) {
    throw Error(ErrorKind::UnsupportedHistory, "component rule assumes VerticesUnknown");
  }
  ComponentTracker tracker(state.n());
  for (CouponId c : state.singletons()) tracker.add_single(c);
  for (const auto& [a, b] : state.pair_edges()) tracker.add_pair(a, b);
  std::vector<CouponId> out;
  for (std::size_t c = 0; c < state.n(); ++c) {
    if (tracker.is_known(static_cast<CouponId>(c))) out.push_back(static_cast<CouponId>(c));
  }
  return out;
}

bool target_met(std::span<const CouponId> known, std::size_t n, const RecoveryTarget& target) {
  switch (target.kind) {
    case RecoveryTarget::Kind::Complete:
      return known.size() == n;
    case RecoveryTarget::Kind::Arbitrary:
      return known.size() >= target.r;
    case RecoveryTarget::Kind::Specific:
      return std::includes(known.begin(), known.end(), target.coupons.begin(),
                           target.coupons.end());
  }
  return false;
}

namespace {

void check_target(const KnowledgeState& state, const RecoveryTarget& target) {
  target.validate(state.n());
  if (target.mode != state.mode()) {
    throw Error(ErrorKind::InvalidTarget, "target mode differs from knowledge mode");
  }
}

}  // namespace

bool is_recovered(const KnowledgeState& state, const RecoveryTarget& target) {
  check_target(state, target);
  const auto known = known_coupons(state);
  return target_met(known, state.n(), target);
}

bool is_recovered(const KnowledgeState& state, const RecoveryTarget& target,
                  const Instance& instance) {
  check_target(state, target);
  const auto known = known_coupons(state, instance);
  return target_met(known, state.n(), target);
}

ComponentTracker::ComponentTracker(std::size_t n, std::span<const CouponId> target_coupons)
    : parent_(n), size_(n, 1), target_in_(n, 0), anchored_(n, 0) {
  std::iota(parent_.begin(), parent_.end(), CouponId{0});
  for (CouponId c : target_coupons) {
    if (c >= n) throw Error(ErrorKind::IdOutOfRange, "target coupon " + std::to_string(c));
    if (!target_in_[c]) {
      target_in_[c] = 1;
      ++target_size_;
    }
  }
}

CouponId ComponentTracker::find(CouponId c) {
  while (parent_[c] != c) {
    parent_[c] = parent_[parent_[c]];
    c = parent_[c];
  }
  return c;
}

CouponId ComponentTracker::find_const(CouponId c) const {
  while (parent_[c] != c) c = parent_[c];
  return c;
}

bool ComponentTracker::is_known(CouponId c) const { return known_root(find_const(c)); }

void ComponentTracker::add_single(CouponId c) {
  const CouponId r = find(c);
  if (!known_root(r)) {
    known_ += size_[r];
    target_known_ += target_in_[r];
  }
  anchored_[r] = 1;
}

void ComponentTracker::add_pair(CouponId a, CouponId b) {
  CouponId ra = find(a), rb = find(b);
  if (ra == rb) return;
  const std::size_t before = (known_root(ra) ? size_[ra] : 0) + (known_root(rb) ? size_[rb] : 0);
  const std::size_t before_target =
      (known_root(ra) ? target_in_[ra] : 0) + (known_root(rb) ? target_in_[rb] : 0);
  if (size_[ra] < size_[rb]) std::swap(ra, rb);
  parent_[rb] = ra;
  size_[ra] += size_[rb];
  target_in_[ra] += target_in_[rb];
  anchored_[ra] = anchored_[ra] || anchored_[rb];
  // merging can only turn unknown coupons known
  if (known_root(ra)) {
    known_ += size_[ra] - before;
    target_known_ += target_in_[ra] - before_target;
  }
}

}  // namespace lccp
