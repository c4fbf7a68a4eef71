#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lccp {

using CouponId = std::uint32_t;
using LabelId = std::uint32_t;

/// Hidden perfect matching between n coupons and n labels.
class Instance {
 public:
  std::size_t n() const noexcept { return matching_.size(); }
  LabelId label_of(CouponId c) const { return matching_[c]; }
  CouponId coupon_of(LabelId l) const { return inverse_[l]; }
  std::span<const LabelId> matching() const noexcept { return matching_; }

 private:
  friend Instance make_instance(std::size_t n,
                                std::optional<std::vector<LabelId>> matching);
  std::vector<LabelId> matching_;
  std::vector<CouponId> inverse_;
};

/// Identity matching unless one is supplied. Throws ZeroSize / NonBijection.
Instance make_instance(std::size_t n,
                       std::optional<std::vector<LabelId>> matching = std::nullopt);

/// One draw: a coupon subset and the label subset it maps onto. Both sorted.
struct Sample {
  std::vector<CouponId> coupons;
  std::vector<LabelId> labels;

  std::size_t size() const noexcept { return coupons.size(); }
};

/// Builds a sample from explicit coupon ids against an instance.
Sample make_sample(const Instance& instance, std::vector<CouponId> coupons);

/// Finite distribution of the sample size. Zero-probability keys are dropped
/// so that support() is exact.
class SampleSizeDist {
 public:
  static constexpr double kSumTolerance = 1e-9;

  explicit SampleSizeDist(std::map<std::size_t, double> entries);

  const std::map<std::size_t, double>& entries() const noexcept { return entries_; }
  std::vector<std::size_t> support() const;
  std::size_t max_size() const noexcept { return entries_.rbegin()->first; }
  double probability(std::size_t k) const;
  bool support_within(std::size_t lo, std::size_t hi) const;

  /// Throws SizeExceedsN if any key is larger than n.
  void check_fits(std::size_t n) const;

  /// Inverse-CDF pick from a uniform value in [0, 1).
  std::size_t pick(double unit) const;

 private:
  std::map<std::size_t, double> entries_;
};

/// {1: p, 2: 1 - p}
SampleSizeDist make_kp_dist(double p);

/// Size-k sampling with probability one.
SampleSizeDist make_fixed_dist(std::size_t k);

enum class RecoveryMode { VerticesUnknown, VerticesKnown };

struct RecoveryTarget {
  enum class Kind { Complete, Arbitrary, Specific };

  Kind kind = Kind::Complete;
  std::size_t r = 0;               // Arbitrary only
  std::vector<CouponId> coupons;   // Specific only, sorted
  RecoveryMode mode = RecoveryMode::VerticesUnknown;

  static RecoveryTarget complete(RecoveryMode mode = RecoveryMode::VerticesUnknown);
  static RecoveryTarget arbitrary(std::size_t r,
                                  RecoveryMode mode = RecoveryMode::VerticesUnknown);
  static RecoveryTarget specific(std::vector<CouponId> coupons,
                                 RecoveryMode mode = RecoveryMode::VerticesUnknown);

  /// Throws InvalidTarget when r or the coupon set does not fit n.
  void validate(std::size_t n) const;
};

/// Seeded 64-bit stream. Bounded draws use rejection sampling rather than
/// std::uniform_int_distribution so sequences are identical across standard
/// library implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream for replication `index` of a run seeded with `seed`.
  static RandomStream derive(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next() { return engine_(); }
  std::uint64_t uniform_below(std::uint64_t bound);
  double uniform_unit();

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Uniformly random k-subset of {0..n-1}, sorted.
std::vector<CouponId> draw_subset(std::size_t n, std::size_t k, RandomStream& stream);

Sample draw_sample(const Instance& instance, const SampleSizeDist& dist,
                   RandomStream& stream);

// JSON forms: {"sizes": {"1": 0.3, "2": 0.7}} and {"n": 5, "matching": [...]}.
SampleSizeDist parse_dist_json(std::string_view text);
Instance parse_instance_json(std::string_view text);
std::string dist_to_json(const SampleSizeDist& dist);

}  // namespace lccp
