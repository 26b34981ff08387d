#pragma once

#include "fastmmd/dataset.hpp"
#include "fastmmd/estimate.hpp"
#include "fastmmd/kernel.hpp"
#include "fastmmd/parallel.hpp"

#include <Eigen/Core>

#include <cstdint>

namespace fastmmd {

/// Kernel sums over the three blocks of the Gram matrix.
/// The within-class sums exclude the diagonal.
struct KernelSums {
  double offdiag_first = 0.0;   ///< sum_{i != j in I1} K(x_i, x_j)
  double offdiag_second = 0.0;  ///< sum_{i != j in I2} K(x_i, x_j)
  double cross = 0.0;           ///< sum_{i in I1, j in I2} K(x_i, x_j)
  Index m = 0;
  Index n = 0;
  double k0 = 1.0;
};

/// O(N^2 d). Rows run in parallel; each row sum is reduced in a fixed order.
KernelSums kernel_sums(const SampleSet& samples, const ShiftInvariantKernel& kernel,
                       Parallelism par = {});

/// V-statistic sum_i sum_j a_i a_j K(x_i, x_j) with a_i = 1/m on I1 and
/// -1/n on I2.  Rounding negatives down to -1e-12 k0 are clamped to zero;
/// anything below that throws NumericalError.
MmdEstimate mmd_biased_exact(const SampleSet& samples, const ShiftInvariantKernel& kernel,
                             Parallelism par = {});

/// U-statistic with diagonal terms excluded. Needs two samples per class.
MmdEstimate mmd_unbiased_exact(const SampleSet& samples, const ShiftInvariantKernel& kernel,
                               Parallelism par = {});

/// The unbiased estimate rebuilt from the biased one:
///   U = B + S1/(m-1) + S2/(n-1) - (m+n-2) k0 / ((m-1)(n-1))
/// where S1, S2 are the within-class means including the diagonal
/// (S1 = |mu_1|^2 in feature space).
double unbiased_from_biased(double biased_sq, double mean_sq_first, double mean_sq_second,
                            Index m, Index n, double k0);

/// Class-size equalized pairing used by the subsampling baselines: each
/// class is shuffled (seeded) and the larger one loses its tail.  Column i
/// of `first` is paired with column i of `second`.
struct PairedSamples {
  Eigen::MatrixXd first;
  Eigen::MatrixXd second;

  Index size() const { return first.cols(); }
};

PairedSamples pair_samples(const SampleSet& samples, std::uint64_t seed);

/// Unbiased statistic over paired samples z_a = (x_a, y_a):
///   1/(B(B-1)) sum_{a != b} h(z_a, z_b),
///   h = K(x_a, x_b) + K(y_a, y_b) - K(x_a, y_b) - K(x_b, y_a).
double paired_unbiased(const ShiftInvariantKernel& kernel, const Eigen::Ref<const Eigen::MatrixXd>& first,
                       const Eigen::Ref<const Eigen::MatrixXd>& second);

/// Linear-time estimate: mean of h over the disjoint consecutive pairs
/// (z_1, z_2), (z_3, z_4), ... of the seeded pairing.
MmdEstimate mmd_linear(const SampleSet& samples, const ShiftInvariantKernel& kernel,
                       std::uint64_t seed);

/// round(sqrt(n)), at least 2.
Index default_block_size(Index paired);

/// B-test: mean of `paired_unbiased` over floor(n / B) disjoint blocks of the
/// seeded pairing; the remainder is dropped.  `block_size == 0` picks the
/// default.  B = 2 reproduces `mmd_linear` for the same seed.
MmdEstimate mmd_btest(const SampleSet& samples, const ShiftInvariantKernel& kernel,
                      Index block_size, std::uint64_t seed);

}  // namespace fastmmd
