#pragma once

#include <cstdint>
#include <iterator>
#include <utility>

namespace fastmmd {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Child seed for sub-task `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// Counter-based random stream.
///
/// Every draw is a pure function of (seed, counter), so any block of a long
/// stream can be regenerated independently; `*_at` accessors expose that
/// directly and the sequential accessors walk the counter.  Normal variates
/// come from the Box-Muller transform of the uniform pair at counters
/// (2k, 2k+1): index 2k takes the cosine branch and 2k+1 the sine branch.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept;

  std::uint64_t bits_at(std::uint64_t counter) const noexcept;
  /// Uniform on the open interval (0, 1).
  double uniform_at(std::uint64_t counter) const noexcept;
  double normal_at(std::uint64_t index) const noexcept;
  /// Standard Cauchy (location 0, scale 1).
  double cauchy_at(std::uint64_t index) const noexcept;

  std::uint64_t next_bits() noexcept { return bits_at(counter_++); }
  double uniform() noexcept { return uniform_at(counter_++); }
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) noexcept;
  double normal() noexcept;
  /// Gamma(shape, 1) by Marsaglia-Tsang. `shape` must be positive.
  double gamma(double shape) noexcept;
  /// Uniform integer in [0, n). `n` must be positive.
  std::uint64_t below(std::uint64_t n) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }

 private:
  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::uint64_t normal_index_ = 0;
  std::uint64_t normal_pair_ = 0;
};

/// Fisher-Yates shuffle driven by `rng`.
template <typename RandomIt>
void shuffle(RandomIt first, RandomIt last, CounterRng& rng) {
  auto n = static_cast<std::uint64_t>(std::distance(first, last));
  for (std::uint64_t i = n; i > 1; --i) {
    const std::uint64_t j = rng.below(i);
    using std::swap;
    swap(first[static_cast<std::ptrdiff_t>(i - 1)], first[static_cast<std::ptrdiff_t>(j)]);
  }
}

}  // namespace fastmmd
