#include "lccp/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lccp/error.hpp"

namespace lccp {

Instance make_instance(std::size_t n, std::optional<std::vector<LabelId>> matching) {
  if (n == 0) throw Error(ErrorKind::ZeroSize, "instance needs at least one coupon");
  Instance inst;
  if (matching) {
    if (matching->size() != n) {
      throw Error(ErrorKind::NonBijection, "matching length " +
                                               std::to_string(matching->size()) +
                                               " != n " + std::to_string(n));
    }
    inst.matching_ = std::move(*matching);
  } else {
    inst.matching_.resize(n);
    for (std::size_t c = 0; c < n; ++c) inst.matching_[c] = static_cast<LabelId>(c);
  }
  inst.inverse_.assign(n, static_cast<CouponId>(n));
  for (std::size_t c = 0; c < n; ++c) {
    const LabelId l = inst.matching_[c];
    if (l >= n || inst.inverse_[l] != n) {
      throw Error(ErrorKind::NonBijection,
                  "label " + std::to_string(l) + " repeated or out of range");
    }
    inst.inverse_[l] = static_cast<CouponId>(c);
  }
  return inst;
}

Sample make_sample(const Instance& instance, std::vector<CouponId> coupons) {
  std::sort(coupons.begin(), coupons.end());
  if (coupons.empty() ||
      std::adjacent_find(coupons.begin(), coupons.end()) != coupons.end()) {
    throw Error(ErrorKind::InvalidState, "sample needs distinct coupons");
  }
  if (coupons.back() >= instance.n()) {
    throw Error(ErrorKind::IdOutOfRange, "coupon id " + std::to_string(coupons.back()));
  }
  Sample s;
  s.labels.reserve(coupons.size());
  for (CouponId c : coupons) s.labels.push_back(instance.label_of(c));
  std::sort(s.labels.begin(), s.labels.end());
  s.coupons = std::move(coupons);
  return s;
}

SampleSizeDist::SampleSizeDist(std::map<std::size_t, double> entries) {
  double total = 0.0;
  for (const auto& [k, p] : entries) {
    if (k == 0) throw Error(ErrorKind::InvalidDistribution, "sample size 0");
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorKind::InvalidDistribution,
                  "probability for size " + std::to_string(k) + " outside [0,1]");
    }
    total += p;
    if (p > 0.0) entries_.emplace(k, p);
  }
  if (entries_.empty()) throw Error(ErrorKind::EmptySupport, "no positive entry");
  if (std::abs(total - 1.0) > kSumTolerance) {
    throw Error(ErrorKind::InvalidDistribution,
                "probabilities sum to " + std::to_string(total));
  }
}

std::vector<std::size_t> SampleSizeDist::support() const {
  std::vector<std::size_t> keys;
  keys.reserve(entries_.size());
  for (const auto& [k, p] : entries_) keys.push_back(k);
  return keys;
}

double SampleSizeDist::probability(std::size_t k) const {
  auto it = entries_.find(k);
  return it == entries_.end() ? 0.0 : it->second;
}

bool SampleSizeDist::support_within(std::size_t lo, std::size_t hi) const {
  return entries_.begin()->first >= lo && max_size() <= hi;
}

void SampleSizeDist::check_fits(std::size_t n) const {
  if (max_size() > n) {
    throw Error(ErrorKind::SizeExceedsN, "sample size " + std::to_string(max_size()) +
                                             " exceeds n = " + std::to_string(n));
  }
}

std::size_t SampleSizeDist::pick(double unit) const {
  double acc = 0.0;
  for (const auto& [k, p] : entries_) {
    acc += p;
    if (unit < acc) return k;
  }
  return max_size();
}

SampleSizeDist make_kp_dist(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::OutOfRange, "p = " + std::to_string(p) + " not in [0,1]");
  }
  return SampleSizeDist({{1, p}, {2, 1.0 - p}});
}

SampleSizeDist make_fixed_dist(std::size_t k) { return SampleSizeDist({{k, 1.0}}); }

RecoveryTarget RecoveryTarget::complete(RecoveryMode mode) {
  RecoveryTarget t;
  t.kind = Kind::Complete;
  t.mode = mode;
  return t;
}

RecoveryTarget RecoveryTarget::arbitrary(std::size_t r, RecoveryMode mode) {
  RecoveryTarget t;
  t.kind = Kind::Arbitrary;
  t.r = r;
  t.mode = mode;
  return t;
}

RecoveryTarget RecoveryTarget::specific(std::vector<CouponId> coupons, RecoveryMode mode) {
  std::sort(coupons.begin(), coupons.end());
  coupons.erase(std::unique(coupons.begin(), coupons.end()), coupons.end());
  RecoveryTarget t;
  t.kind = Kind::Specific;
  t.coupons = std::move(coupons);
  t.mode = mode;
  return t;
}

void RecoveryTarget::validate(std::size_t n) const {
  switch (kind) {
    case Kind::Complete:
      return;
    case Kind::Arbitrary:
      if (r < 1 || r > n) {
        throw Error(ErrorKind::InvalidTarget,
                    "arbitrary r = " + std::to_string(r) + " outside [1, n]");
      }
      return;
    case Kind::Specific:
      if (coupons.empty() || coupons.back() >= n) {
        throw Error(ErrorKind::InvalidTarget, "specific coupon set empty or out of range");
      }
      return;
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream RandomStream::derive(std::uint64_t seed, std::uint64_t index) {
  return RandomStream(splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

std::uint64_t RandomStream::uniform_below(std::uint64_t bound) {
  // rejection on the top of the range keeps every residue equally likely
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % bound;
}

double RandomStream::uniform_unit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::vector<CouponId> draw_subset(std::size_t n, std::size_t k, RandomStream& stream) {
  std::vector<CouponId> chosen;
  chosen.reserve(k);
  // Floyd's algorithm: one draw per element, uniform over all C(n,k) subsets
  if (k <= 32) {
    for (std::size_t j = n - k; j < n; ++j) {
      const auto t = static_cast<CouponId>(stream.uniform_below(j + 1));
      const bool taken = std::find(chosen.begin(), chosen.end(), t) != chosen.end();
      chosen.push_back(taken ? static_cast<CouponId>(j) : t);
    }
  } else {
    std::vector<char> mark(n, 0);
    for (std::size_t j = n - k; j < n; ++j) {
      auto t = static_cast<CouponId>(stream.uniform_below(j + 1));
      if (mark[t]) t = static_cast<CouponId>(j);
      mark[t] = 1;
      chosen.push_back(t);
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

Sample draw_sample(const Instance& instance, const SampleSizeDist& dist,
                   RandomStream& stream) {
  dist.check_fits(instance.n());
  const std::size_t k = dist.entries().size() == 1 ? dist.max_size()
                                                    : dist.pick(stream.uniform_unit());
  Sample s;
  s.coupons = draw_subset(instance.n(), k, stream);
  s.labels.reserve(k);
  for (CouponId c : s.coupons) s.labels.push_back(instance.label_of(c));
  std::sort(s.labels.begin(), s.labels.end());
  return s;
}

}  // namespace lccp
