#include "fastmmd/random.hpp"

#include <cmath>
#include <numbers>

namespace fastmmd {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

CounterRng::CounterRng(std::uint64_t seed) noexcept
    : seed_(seed), key_(splitmix64(seed ^ 0xd1b54a32d192ed03ULL)) {}

std::uint64_t CounterRng::bits_at(std::uint64_t counter) const noexcept {
  return splitmix64(key_ + counter * 0x9e3779b97f4a7c15ULL);
}

double CounterRng::uniform_at(std::uint64_t counter) const noexcept {
  return (static_cast<double>(bits_at(counter) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal_at(std::uint64_t index) const noexcept {
  const std::uint64_t pair = index & ~std::uint64_t{1};
  const double radius = std::sqrt(-2.0 * std::log(uniform_at(pair)));
  const double angle = 2.0 * std::numbers::pi * uniform_at(pair + 1);
  return (index & 1) ? radius * std::sin(angle) : radius * std::cos(angle);
}

double CounterRng::cauchy_at(std::uint64_t index) const noexcept {
  return std::tan(std::numbers::pi * (uniform_at(index) - 0.5));
}

double CounterRng::uniform(double lo, double hi) noexcept {
  return lo + (hi - lo) * uniform();
}

double CounterRng::normal() noexcept {
  // Each Box-Muller pair reserves two counters, so interleaved uniform()
  // calls never split a pair.
  const bool second = (normal_index_++ & 1) != 0;
  if (!second) {
    normal_pair_ = counter_;
    counter_ += 2;
  }
  const double radius = std::sqrt(-2.0 * std::log(uniform_at(normal_pair_)));
  const double angle = 2.0 * std::numbers::pi * uniform_at(normal_pair_ + 1);
  return second ? radius * std::sin(angle) : radius * std::cos(angle);
}

double CounterRng::gamma(double shape) noexcept {
  if (shape < 1.0) return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    const double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

std::uint64_t CounterRng::below(std::uint64_t n) noexcept {
  const auto wide = static_cast<unsigned __int128>(next_bits()) * n;
  return static_cast<std::uint64_t>(wide >> 64);
}

}  // namespace fastmmd
