#include "fastmmd/exact.hpp"

#include "fastmmd/random.hpp"
#include "fastmmd/summation.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace fastmmd {

namespace {

// sum_j K(x, ys.col(j))
double row_sum(const ShiftInvariantKernel& kernel, const Eigen::Ref<const Eigen::VectorXd>& x,
               const Eigen::Ref<const Eigen::MatrixXd>& ys) {
  if (ys.cols() == 0) return 0.0;
  Eigen::ArrayXd dist;
  if (kernel.family() == KernelFamily::gaussian) {
    dist = (ys.colwise() - x).colwise().squaredNorm().transpose().array() /
           (2.0 * kernel.sigma() * kernel.sigma());
  } else {
    dist = (ys.colwise() - x).cwiseAbs().colwise().sum().transpose().array() / kernel.sigma();
  }
  return kernel.k0() * (-dist).exp().sum();
}

// Sum over i of row_sum(a_i, b_{i+1..}) when symmetric, else of row_sum(a_i, b).
double block_sum(const ShiftInvariantKernel& kernel, const Eigen::MatrixXd& a,
                 const Eigen::MatrixXd& b, bool upper_triangle, Parallelism par) {
  std::vector<double> rows(static_cast<std::size_t>(a.cols()), 0.0);
  parallel_for(a.cols(), par, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
    for (std::ptrdiff_t i = begin; i < end; ++i) {
      rows[static_cast<std::size_t>(i)] =
          upper_triangle ? row_sum(kernel, a.col(i), b.rightCols(b.cols() - i - 1))
                         : row_sum(kernel, a.col(i), b);
    }
  });
  return pairwise_sum<double>(rows);
}

void require_two_per_class(const SampleSet& samples, const char* what) {
  if (samples.count(Label::first) < 2 || samples.count(Label::second) < 2)
    throw InvalidArgument(std::string(what) + ": unbiased estimate needs at least 2 samples per class");
}

}  // namespace

KernelSums kernel_sums(const SampleSet& samples, const ShiftInvariantKernel& kernel, Parallelism par) {
  const auto& x = samples.group(Label::first);
  const auto& y = samples.group(Label::second);
  KernelSums sums;
  sums.m = x.cols();
  sums.n = y.cols();
  sums.k0 = kernel.k0();
  sums.offdiag_first = 2.0 * block_sum(kernel, x, x, true, par);
  sums.offdiag_second = 2.0 * block_sum(kernel, y, y, true, par);
  sums.cross = block_sum(kernel, x, y, false, par);
  return sums;
}

MmdEstimate mmd_biased_exact(const SampleSet& samples, const ShiftInvariantKernel& kernel,
                             Parallelism par) {
  const KernelSums s = kernel_sums(samples, kernel, par);
  // The terms cancel heavily when the classes are close, so combine them in extended precision.
  const long double m = static_cast<long double>(s.m);
  const long double n = static_cast<long double>(s.n);
  double value = static_cast<double>(
      (s.offdiag_first + m * s.k0) / (m * m) + (s.offdiag_second + n * s.k0) / (n * n) - 2.0L * s.cross / (m * n));
  if (!std::isfinite(value)) throw NumericalError("mmd_biased_exact: non-finite result");
  if (value < 0.0) {
    if (value < -1e-12 * s.k0)
      throw NumericalError("mmd_biased_exact: negative squared MMD beyond rounding slack");
    value = 0.0;
  }
  return {value, EstimateKind::biased, Method::exact, 0, std::nullopt};
}

MmdEstimate mmd_unbiased_exact(const SampleSet& samples, const ShiftInvariantKernel& kernel,
                               Parallelism par) {
  require_two_per_class(samples, "mmd_unbiased_exact");
  const KernelSums s = kernel_sums(samples, kernel, par);
  const long double m = static_cast<long double>(s.m);
  const long double n = static_cast<long double>(s.n);
  const double value = static_cast<double>(s.offdiag_first / (m * (m - 1.0L)) +
                                            s.offdiag_second / (n * (n - 1.0L)) - 2.0L * s.cross / (m * n));
  if (!std::isfinite(value)) throw NumericalError("mmd_unbiased_exact: non-finite result");
  return {value, EstimateKind::unbiased, Method::exact, 0, std::nullopt};
}

double unbiased_from_biased(double biased_sq, double mean_sq_first, double mean_sq_second, Index m,
                            Index n, double k0) {
  if (m < 2 || n < 2) throw InvalidArgument("unbiased_from_biased: needs at least 2 samples per class");
  const long double mm = static_cast<long double>(m);
  const long double nn = static_cast<long double>(n);
  return static_cast<double>(biased_sq + mean_sq_first / (mm - 1.0L) + mean_sq_second / (nn - 1.0L) -
                             (mm + nn - 2.0L) * k0 / ((mm - 1.0L) * (nn - 1.0L)));
}

PairedSamples pair_samples(const SampleSet& samples, std::uint64_t seed) {
  const auto& x = samples.group(Label::first);
  const auto& y = samples.group(Label::second);
  std::vector<Index> px(static_cast<std::size_t>(x.cols())), py(static_cast<std::size_t>(y.cols()));
  std::iota(px.begin(), px.end(), Index{0});
  std::iota(py.begin(), py.end(), Index{0});
  CounterRng rng(seed);
  shuffle(px.begin(), px.end(), rng);
  shuffle(py.begin(), py.end(), rng);
  const Index n = std::min(x.cols(), y.cols());
  PairedSamples paired{Eigen::MatrixXd(x.rows(), n), Eigen::MatrixXd(y.rows(), n)};
  for (Index i = 0; i < n; ++i) {
    paired.first.col(i) = x.col(px[static_cast<std::size_t>(i)]);
    paired.second.col(i) = y.col(py[static_cast<std::size_t>(i)]);
  }
  return paired;
}

double paired_unbiased(const ShiftInvariantKernel& kernel, const Eigen::Ref<const Eigen::MatrixXd>& first,
                       const Eigen::Ref<const Eigen::MatrixXd>& second) {
  const Index b = first.cols();
  if (b < 2 || second.cols() != b)
    throw InvalidArgument("paired_unbiased: need two equal blocks of at least 2 samples");
  double total = 0.0;
  for (Index a = 0; a < b; ++a) {
    for (Index c = a + 1; c < b; ++c) {
      total += kernel(first.col(a), first.col(c)) + kernel(second.col(a), second.col(c)) -
               kernel(first.col(a), second.col(c)) - kernel(first.col(c), second.col(a));
    }
  }
  // h is symmetric, so the ordered-pair sum is twice the unordered one.
  return 2.0 * total / (static_cast<double>(b) * static_cast<double>(b - 1));
}

MmdEstimate mmd_linear(const SampleSet& samples, const ShiftInvariantKernel& kernel, std::uint64_t seed) {
  const PairedSamples paired = pair_samples(samples, seed);
  const Index pairs = paired.size() / 2;
  if (pairs < 1) throw InvalidArgument("mmd_linear: need at least 2 samples per class after equalization");
  std::vector<double> h(static_cast<std::size_t>(pairs));
  for (Index i = 0; i < pairs; ++i) {
    const auto x1 = paired.first.col(2 * i), x2 = paired.first.col(2 * i + 1);
    const auto y1 = paired.second.col(2 * i), y2 = paired.second.col(2 * i + 1);
    h[static_cast<std::size_t>(i)] = kernel(x1, x2) + kernel(y1, y2) - kernel(x1, y2) - kernel(x2, y1);
  }
  const double value = pairwise_sum<double>(h) / static_cast<double>(pairs);
  return {value, EstimateKind::unbiased, Method::linear, 0, seed};
}

Index default_block_size(Index paired) {
  return std::max<Index>(2, static_cast<Index>(std::lround(std::sqrt(static_cast<double>(paired)))));
}

MmdEstimate mmd_btest(const SampleSet& samples, const ShiftInvariantKernel& kernel, Index block_size,
                      std::uint64_t seed) {
  const PairedSamples paired = pair_samples(samples, seed);
  const Index n = paired.size();
  const Index b = block_size == 0 ? default_block_size(n) : block_size;
  if (b < 2) throw InvalidArgument("mmd_btest: block size must be >= 2");
  if (b > n)
    throw InvalidArgument("mmd_btest: block size " + std::to_string(b) + " exceeds paired sample count " +
                          std::to_string(n));
  const Index blocks = n / b;
  std::vector<double> stats(static_cast<std::size_t>(blocks));
  for (Index k = 0; k < blocks; ++k)
    stats[static_cast<std::size_t>(k)] =
        paired_unbiased(kernel, paired.first.middleCols(k * b, b), paired.second.middleCols(k * b, b));
  const double value = pairwise_sum<double>(stats) / static_cast<double>(blocks);
  return {value, EstimateKind::unbiased, Method::btest, 0, seed};
}

}  // namespace fastmmd
