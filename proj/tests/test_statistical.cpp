// Slow Monte Carlo checks of the testing procedure and the sweep.

#include "fastmmd/dataset.hpp"
#include "fastmmd/estimator.hpp"
#include "fastmmd/hypothesis.hpp"
#include "fastmmd/random.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace fastmmd;

namespace {

EstimatorConfig spectral(Method method, Index basis) {
  EstimatorConfig c;
  c.method = method;
  c.kind = EstimateKind::unbiased;
  c.basis = basis;
  return c;
}

double rejection_rate(const EstimatorConfig& config, const BlobSpec& spec, int trials, Index shuffles,
                      std::uint64_t seed) {
  const Estimator estimator = make_estimator(config);
  int rejections = 0;
  for (int t = 0; t < trials; ++t) {
    const std::uint64_t trial = derive_seed(seed, static_cast<std::uint64_t>(t));
    const SampleSet s = synth_blob_pair(spec, derive_seed(trial, 0));
    rejections += two_sample_test(s, estimator, 0.05, shuffles, derive_seed(trial, 1)).reject ? 1 : 0;
  }
  return static_cast<double>(rejections) / trials;
}

/// Kolmogorov-Smirnov distance between a sample and the uniform law on [0, 1].
double ks_from_uniform(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - v[i], v[i] - static_cast<double>(i) / n});
  return d;
}

}  // namespace

TEST_CASE("test detects well separated anisotropic blobs") {
  const double rate = rejection_rate(spectral(Method::fourier, 256), BlobSpec{5.0, 4.0, 1000}, 100, 1000, 31);
  CHECK(rate >= 0.9);
}

TEST_CASE("type one error is calibrated for every estimator family") {
  const BlobSpec same{5.0, 1.0, 100};
  for (const auto& config : {spectral(Method::fourier, 128), spectral(Method::fastfood, 128),
                             spectral(Method::exact, 0), spectral(Method::btest, 0)}) {
    const double rate = rejection_rate(config, same, 200, 500, 32);
    CHECK_MESSAGE(rate >= 0.02, to_string(config.method));
    CHECK_MESSAGE(rate <= 0.10, to_string(config.method));
  }
}

TEST_CASE("p values are uniform under equal distributions") {
  const Estimator estimator = make_estimator(spectral(Method::fourier, 64));
  std::vector<double> p;
  for (std::uint64_t t = 0; t < 500; ++t) {
    const SampleSet s = synth_blob_pair(BlobSpec{5.0, 1.0, 50}, derive_seed(33, t));
    p.push_back(two_sample_test(s, estimator, 0.05, 200, derive_seed(34, t)).p_value);
  }
  CHECK(ks_from_uniform(p) < 0.1);
}

TEST_CASE("fastmmd sweep reproduces the exact sweep on ring data") {
  const SampleSet s = synth_ring(200, 35);
  const SweepResult exact =
      bandwidth_sweep(s, KernelFamily::gaussian, 0.1, 100.0, 5, spectral(Method::exact, 0), 1, 36);
  const SweepResult fast =
      bandwidth_sweep(s, KernelFamily::gaussian, 0.1, 100.0, 5, spectral(Method::fourier, 1024), 200, 37);
  REQUIRE(exact.points.size() == 16);
  for (std::size_t i = 0; i < exact.points.size(); ++i) {
    const double pooled = std::sqrt(0.5 * (exact.points[i].stddev * exact.points[i].stddev +
                                           fast.points[i].stddev * fast.points[i].stddev));
    CHECK_MESSAGE(std::abs(exact.points[i].mean - fast.points[i].mean) <= 2.0 * pooled,
                  "sigma " << exact.points[i].sigma);
  }
}

TEST_CASE("fastmmd is less spread than the linear estimate at every bandwidth") {
  const SampleSet s = synth_ring(200, 38);
  const SweepResult fast =
      bandwidth_sweep(s, KernelFamily::gaussian, 0.1, 100.0, 5, spectral(Method::fourier, 1024), 1000, 39);
  const SweepResult linear =
      bandwidth_sweep(s, KernelFamily::gaussian, 0.1, 100.0, 5, spectral(Method::linear, 0), 1000, 40);
  for (std::size_t i = 0; i < fast.points.size(); ++i)
    CHECK_MESSAGE(fast.points[i].stddev < linear.points[i].stddev, "sigma " << fast.points[i].sigma);
}

TEST_CASE("type two error falls with more frequencies and larger anisotropy") {
  Type2Config c;
  c.samples_per_set = 300;
  c.trials = 100;
  c.shuffles = 300;
  c.estimator = spectral(Method::fastfood, 0);
  c.epsilons = {1.5, 4.0};
  c.bases = {8, 256};
  const auto cells = type2_experiment(c, 41);
  REQUIRE(cells.size() == 4);
  // Cells are ordered by epsilon, then basis.
  CHECK(cells[1].type2_error() <= cells[0].type2_error());
  CHECK(cells[3].type2_error() <= cells[2].type2_error());
  CHECK(cells[3].type2_error() <= cells[1].type2_error());
}
