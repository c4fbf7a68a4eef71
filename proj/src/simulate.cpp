#include "lccp/simulate.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>

#include "lccp/error.hpp"
#include "lccp/inference.hpp"

namespace lccp {

namespace {

void check_config(std::size_t n, const SampleSizeDist& dist, const RecoveryTarget& target) {
  if (n == 0) throw Error(ErrorKind::ZeroSize, "n must be positive");
  dist.check_fits(n);
  target.validate(n);
  if (n >= 2 && dist.support_within(n, n)) {
    throw Error(ErrorKind::NonTerminating,
                "every sample contains all coupons; no label is ever determined");
  }
}

// Same draw sequence as draw_sample() for k <= 2, without allocating.
std::size_t draw_small(std::size_t n, const SampleSizeDist& dist, RandomStream& stream,
                       CouponId out[2]) {
  const std::size_t k = dist.entries().size() == 1 ? dist.max_size()
                                                    : dist.pick(stream.uniform_unit());
  if (k == 1) {
    out[0] = static_cast<CouponId>(stream.uniform_below(n));
    return 1;
  }
  const auto t0 = static_cast<CouponId>(stream.uniform_below(n - 1));
  const auto t1 = static_cast<CouponId>(stream.uniform_below(n));
  out[0] = t0;
  out[1] = (t1 == t0) ? static_cast<CouponId>(n - 1) : t1;
  return 2;
}

bool tracker_done(const ComponentTracker& tracker, std::size_t n, const RecoveryTarget& target) {
  switch (target.kind) {
    case RecoveryTarget::Kind::Complete:
      return tracker.known_count() == n;
    case RecoveryTarget::Kind::Arbitrary:
      return tracker.known_count() >= target.r;
    case RecoveryTarget::Kind::Specific:
      return tracker.target_known() == tracker.target_size();
  }
  return false;
}

TrialResult run_fast(std::size_t n, const SampleSizeDist& dist, const RecoveryTarget& target,
                     RandomStream& stream, std::uint64_t max_draws) {
  ComponentTracker tracker(n, target.coupons);
  CouponId picked[2];
  std::uint64_t draws = 0;
  while (!tracker_done(tracker, n, target)) {
    if (draws == max_draws) {
      throw Error(ErrorKind::NonTerminating, "draw cap " + std::to_string(max_draws) + " hit");
    }
    ++draws;
    if (draw_small(n, dist, stream, picked) == 1) {
      tracker.add_single(picked[0]);
    } else {
      tracker.add_pair(picked[0], picked[1]);
    }
  }
  return {draws};
}

}  // namespace

TrialResult run_trial_general(std::size_t n, const SampleSizeDist& dist,
                              const RecoveryTarget& target, RandomStream& stream,
                              std::uint64_t max_draws) {
  check_config(n, dist, target);
  const Instance instance = make_instance(n);
  KnowledgeState state(n, target.mode);
  std::uint64_t draws = 0;
  while (!is_recovered(state, target, instance)) {
    if (draws == max_draws) {
      throw Error(ErrorKind::NonTerminating, "draw cap " + std::to_string(max_draws) + " hit");
    }
    ++draws;
    const Sample s = draw_sample(instance, dist, stream);
#ifndef NDEBUG
    for (std::size_t i = 0; i < s.size(); ++i) {
      assert(s.labels[i] == instance.label_of(s.coupons[i]));
    }
#endif
    state.absorb(s);
  }
  return {draws};
}

TrialResult run_trial(std::size_t n, const SampleSizeDist& dist, const RecoveryTarget& target,
                      RandomStream& stream, std::uint64_t max_draws) {
  check_config(n, dist, target);
  if (target.mode == RecoveryMode::VerticesUnknown && dist.support_within(1, 2)) {
    return run_fast(n, dist, target, stream, max_draws);
  }
  return run_trial_general(n, dist, target, stream, max_draws);
}

TrialResult run_ccp_trial(std::size_t n, const SampleSizeDist& dist, std::size_t r,
                          RandomStream& stream) {
  if (r > n) throw Error(ErrorKind::TargetExceedsN, "r exceeds n");
  dist.check_fits(n);
  const Instance instance = make_instance(n);
  std::vector<char> seen(n, 0);
  std::size_t collected = 0;
  std::uint64_t draws = 0;
  while (collected < r) {
    ++draws;
    const Sample s = draw_sample(instance, dist, stream);
    for (CouponId c : s.coupons) {
      if (!seen[c]) {
        seen[c] = 1;
        ++collected;
      }
    }
  }
  return {draws};
}

SimulationStats summarize(std::span<const std::uint64_t> values, std::uint64_t seed) {
  if (values.empty()) throw Error(ErrorKind::OutOfRange, "reps must be >= 1");
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const std::size_t count = x.size();

  SimulationStats stats;
  stats.reps = count;
  stats.seed = seed;
  double sum = 0;
  for (double v : x) sum += v;
  stats.mean = sum / static_cast<double>(count);
  if (count > 1) {
    double ss = 0;
    for (double v : x) ss += (v - stats.mean) * (v - stats.mean);
    stats.std_error = std::sqrt(ss / static_cast<double>(count - 1) / static_cast<double>(count));
  }

  auto median_of = [&](std::size_t lo, std::size_t len) {
    const std::size_t mid = lo + len / 2;
    return len % 2 ? x[mid] : 0.5 * (x[mid - 1] + x[mid]);
  };
  // Tukey hinges: the halves share the median when the count is odd
  const std::size_t half = (count + 1) / 2;
  stats.five_number.min = x.front();
  stats.five_number.max = x.back();
  stats.five_number.median = median_of(0, count);
  stats.five_number.q25 = median_of(0, half);
  stats.five_number.q75 = median_of(count - half, half);
  return stats;
}

unsigned threads_from_env() {
  unsigned threads = std::max(1U, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LCCP_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) threads = std::min(threads, static_cast<unsigned>(cap));
  }
  return threads;
}

namespace {

template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t lo = count * t / threads, hi = count * (t + 1) / threads;
      pool.emplace_back([&, t, lo, hi] {
        try {
          for (std::size_t i = lo; i < hi; ++i) body(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::vector<std::uint64_t> replicate(std::size_t n, const SampleSizeDist& dist,
                                     const RecoveryTarget& target, std::size_t reps,
                                     std::uint64_t seed, unsigned threads) {
  if (reps == 0) throw Error(ErrorKind::OutOfRange, "reps must be >= 1");
  check_config(n, dist, target);
  std::vector<std::uint64_t> out(reps);
  parallel_for(reps, threads, [&](std::size_t i) {
    RandomStream stream = RandomStream::derive(seed, i);
    out[i] = run_trial(n, dist, target, stream).samples_used;
  });
  return out;
}

SimulationStats estimate(std::size_t n, const SampleSizeDist& dist,
                         const RecoveryTarget& target, std::size_t reps, std::uint64_t seed,
                         unsigned threads) {
  const auto values = replicate(n, dist, target, reps, seed, threads);
  return summarize(values, seed);
}

std::pair<SimulationStats, SimulationStats> compare_lccp_ccp(std::size_t n,
                                                             const SampleSizeDist& dist,
                                                             std::size_t reps,
                                                             std::uint64_t seed,
                                                             unsigned threads) {
  if (reps == 0) throw Error(ErrorKind::OutOfRange, "reps must be >= 1");
  const auto target = RecoveryTarget::complete();
  check_config(n, dist, target);
  std::vector<std::uint64_t> lccp(reps), ccp(reps);
  parallel_for(reps, threads, [&](std::size_t i) {
    RandomStream a = RandomStream::derive(seed, i);
    RandomStream b = RandomStream::derive(seed, i);
    lccp[i] = run_trial(n, dist, target, a).samples_used;
    ccp[i] = run_ccp_trial(n, dist, n - 1, b).samples_used;
  });
  return {summarize(lccp, seed), summarize(ccp, seed)};
}

}  // namespace lccp
