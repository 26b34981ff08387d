#include "fastmmd/estimator.hpp"

#include "fastmmd/circular.hpp"
#include "fastmmd/exact.hpp"
#include "fastmmd/fastfood.hpp"
#include "fastmmd/fourier.hpp"

#include <string>

namespace fastmmd {

namespace {

MmdEstimate pick(const EstimatePair& pair, EstimateKind kind) {
  if (kind == EstimateKind::biased) return pair.biased;
  if (!pair.unbiased) throw InvalidArgument("unbiased estimate needs at least 2 samples per class");
  return *pair.unbiased;
}

}  // namespace

void validate(const EstimatorConfig& config) {
  const std::string name(to_string(config.method));
  switch (config.method) {
    case Method::linear:
    case Method::btest:
      if (config.kind == EstimateKind::biased)
        throw InvalidArgument(name + " is only defined for the unbiased estimate");
      if (config.block_size < 0 || config.block_size == 1)
        throw InvalidArgument("block size must be >= 2 (or 0 for the default)");
      break;
    case Method::circular:
      if (config.kind == EstimateKind::unbiased)
        throw InvalidArgument("circular ensemble is a biased estimate; use --estimate biased");
      [[fallthrough]];
    case Method::fourier:
    case Method::fastfood:
      if (config.basis < 1) throw InvalidArgument(name + " needs basis >= 1");
      if (config.method == Method::fastfood && config.kernel.family() != KernelFamily::gaussian)
        throw InvalidArgument("fastfood requires the gaussian kernel");
      break;
    case Method::exact:
      break;
  }
}

MmdEstimate estimate(const SampleSet& samples, const EstimatorConfig& config, std::uint64_t seed) {
  validate(config);
  const auto& k = config.kernel;
  switch (config.method) {
    case Method::exact:
      return config.kind == EstimateKind::biased ? mmd_biased_exact(samples, k, config.par)
                                                 : mmd_unbiased_exact(samples, k, config.par);
    case Method::linear:
      return mmd_linear(samples, k, seed);
    case Method::btest:
      return mmd_btest(samples, k, config.block_size, seed);
    case Method::fourier:
      return pick(fastmmd_fourier(samples, k, sample_spectral(k, config.basis, samples.dim(), seed), config.par),
                  config.kind);
    case Method::fastfood:
      return pick(fastmmd_fastfood(samples, k, config.basis, seed, config.par), config.kind);
    case Method::circular:
      return ensemble_discrepancy(samples, k, sample_spectral(k, config.basis, samples.dim(), seed));
  }
  throw InvalidArgument("unknown method");
}

Estimator make_estimator(EstimatorConfig config) {
  validate(config);
  return [config](const SampleSet& samples, std::uint64_t seed) { return estimate(samples, config, seed); };
}

}  // namespace fastmmd
