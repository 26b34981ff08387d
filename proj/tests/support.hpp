#pragma once

// Reference implementations shared by the test binaries.  These are written
// directly from the definitions, without any of the library's summation,
// caching or streaming machinery, so they can serve as oracles.

#include "fastmmd/dataset.hpp"
#include "fastmmd/kernel.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace fastmmd::testing {

inline double naive_kernel(const ShiftInvariantKernel& k, const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  double acc = 0.0;
  for (Index j = 0; j < x.size(); ++j) {
    const double diff = x(j) - y(j);
    acc += k.family() == KernelFamily::gaussian ? diff * diff : std::abs(diff);
  }
  if (k.family() == KernelFamily::gaussian) return k.k0() * std::exp(-acc / (2.0 * k.sigma() * k.sigma()));
  return k.k0() * std::exp(-acc / k.sigma());
}

/// sum_i sum_j a_i a_j K(x_i, x_j) with a_i = 1/m on class 1, -1/n on class 2.
inline long double naive_biased(const SampleSet& s, const ShiftInvariantKernel& k) {
  const double m = static_cast<double>(s.count(Label::first));
  const double n = static_cast<double>(s.count(Label::second));
  long double acc = 0.0L;
  for (Index i = 0; i < s.size(); ++i) {
    const double ai = s.labels()[i] == Label::first ? 1.0 / m : -1.0 / n;
    for (Index j = 0; j < s.size(); ++j) {
      const double aj = s.labels()[j] == Label::first ? 1.0 / m : -1.0 / n;
      acc += static_cast<long double>(ai) * aj * naive_kernel(k, s.points().col(i), s.points().col(j));
    }
  }
  return acc;
}

/// Three-term U-statistic with the diagonal excluded.
inline long double naive_unbiased(const SampleSet& s, const ShiftInvariantKernel& k) {
  const auto& x = s.group(Label::first);
  const auto& y = s.group(Label::second);
  const long double m = x.cols(), n = y.cols();
  long double xx = 0, yy = 0, xy = 0;
  for (Index i = 0; i < x.cols(); ++i)
    for (Index j = 0; j < x.cols(); ++j)
      if (i != j) xx += naive_kernel(k, x.col(i), x.col(j));
  for (Index i = 0; i < y.cols(); ++i)
    for (Index j = 0; j < y.cols(); ++j)
      if (i != j) yy += naive_kernel(k, y.col(i), y.col(j));
  for (Index i = 0; i < x.cols(); ++i)
    for (Index j = 0; j < y.cols(); ++j) xy += naive_kernel(k, x.col(i), y.col(j));
  return xx / (m * (m - 1)) + yy / (n * (n - 1)) - 2 * xy / (m * n);
}

/// sum_i sum_j a_i a_j cos(p_i - p_j).
inline long double naive_double_cos(const std::vector<double>& weights, const std::vector<double>& phases) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < phases.size(); ++i)
    for (std::size_t j = 0; j < phases.size(); ++j)
      acc += static_cast<long double>(weights[i]) * weights[j] * std::cos(phases[i] - phases[j]);
  return acc;
}

/// Dense Sylvester-Hadamard matrix of order n (a power of two).
inline Eigen::MatrixXd hadamard(Index n) {
  Eigen::MatrixXd h(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) h(i, j) = (__builtin_popcountll(static_cast<unsigned long long>(i & j)) % 2) ? -1.0 : 1.0;
  return h;
}

/// Random labeled set with m class-1 and n class-2 points from a standard-library engine.
inline SampleSet random_set(std::mt19937_64& gen, Index m, Index n, Index d, double shift = 0.5) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd first(d, m), second(d, n);
  for (Index i = 0; i < first.size(); ++i) first(i) = z(gen);
  for (Index i = 0; i < second.size(); ++i) second(i) = z(gen) + shift;
  return SampleSet::from_groups(first, second);
}

inline double relative_error(double got, double want) {
  const double scale = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / scale;
}

/// |got - want| relative to `scale` (for quantities that cancel toward zero).
inline double scaled_error(double got, double want, double scale) { return std::abs(got - want) / scale; }

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
  double stderr_ = 0.0;
};

inline Moments moments(const std::vector<double>& v) {
  Moments r;
  if (v.empty()) return r;
  long double s = 0;
  for (double x : v) s += x;
  r.mean = static_cast<double>(s / v.size());
  if (v.size() > 1) {
    long double ss = 0;
    for (double x : v) ss += (x - r.mean) * (x - r.mean);
    r.stddev = std::sqrt(static_cast<double>(ss / (v.size() - 1)));
    r.stderr_ = r.stddev / std::sqrt(static_cast<double>(v.size()));
  }
  return r;
}

/// Least-squares slope of y on x.
inline double regression_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace fastmmd::testing
