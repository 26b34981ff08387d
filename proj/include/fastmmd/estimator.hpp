#pragma once

#include "fastmmd/dataset.hpp"
#include "fastmmd/estimate.hpp"
#include "fastmmd/kernel.hpp"
#include "fastmmd/parallel.hpp"

#include <cstdint>
#include <functional>

namespace fastmmd {

/// Everything needed to turn a SampleSet and a seed into one MMD estimate.
struct EstimatorConfig {
  Method method = Method::fourier;
  EstimateKind kind = EstimateKind::unbiased;
  ShiftInvariantKernel kernel = ShiftInvariantKernel::gaussian(1.0);
  Index basis = 1024;     ///< frequencies for fourier / fastfood / circular
  Index block_size = 0;   ///< B-test block size, 0 = round(sqrt(n))
  Parallelism par{};
};

/// Throws InvalidArgument for incompatible combinations: linear and btest
/// are unbiased-only, circular is biased-only, fastfood needs a gaussian
/// kernel, and spectral methods need basis >= 1.
void validate(const EstimatorConfig& config);

/// Runs the configured estimator. `seed` drives the frequency bank or the
/// sample pairing; exact estimates ignore it.
MmdEstimate estimate(const SampleSet& samples, const EstimatorConfig& config, std::uint64_t seed);

using Estimator = std::function<MmdEstimate(const SampleSet&, std::uint64_t)>;

/// Validated estimator handle.
Estimator make_estimator(EstimatorConfig config);

}  // namespace fastmmd
