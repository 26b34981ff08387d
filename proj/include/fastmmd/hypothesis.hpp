#pragma once

#include "fastmmd/dataset.hpp"
#include "fastmmd/estimate.hpp"
#include "fastmmd/estimator.hpp"
#include "fastmmd/parallel.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace fastmmd {

/// Null statistics from `shuffles` label permutations of the pooled sample
/// (class sizes preserved).  Shuffle b permutes with, and seeds the
/// estimator with, children of derive_seed(seed, b), so randomized
/// estimators redraw their frequencies or pairing every time.
std::vector<double> bootstrap_null(const SampleSet& samples, const Estimator& estimator, Index shuffles,
                                   std::uint64_t seed, Parallelism par = {});

/// Smallest null value whose 1-based rank is >= ceil((1 - alpha) * B).
double null_quantile(std::vector<double> null, double alpha);

/// (1 + #{null >= statistic}) / (B + 1).
double permutation_p_value(const std::vector<double>& null, double statistic);

struct TestResult {
  double statistic = 0.0;
  double threshold = 0.0;
  double p_value = 1.0;
  bool reject = false;
  double alpha = 0.05;
  Index shuffles = 0;
  Method method = Method::exact;
  EstimateKind kind = EstimateKind::unbiased;
  Index basis = 0;
  std::optional<std::uint64_t> seed;
};

/// Rejects when the observed statistic exceeds the (1 - alpha) null
/// quantile.  The observed statistic uses derive_seed(seed, 0) and the null
/// uses derive_seed(seed, 1).
TestResult two_sample_test(const SampleSet& samples, const Estimator& estimator, double alpha, Index shuffles,
                           std::uint64_t seed, Parallelism par = {});

/// sigma_min * 10^(k / steps_per_decade) for every k with the value <= sigma_max.
std::vector<double> geometric_grid(double sigma_min, double sigma_max, int steps_per_decade);

struct SweepPoint {
  double sigma = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  ///< sample standard deviation over repeats (0 if one repeat)
  std::vector<MmdEstimate> estimates;
};

struct SweepResult {
  std::vector<SweepPoint> points;
  double argmax_sigma = 0.0;

  std::vector<double> sigmas() const;
};

/// Repeats the configured estimator over a geometric bandwidth grid, with
/// the kernel family replaced by `family` and sigma by each grid value.
SweepResult bandwidth_sweep(const SampleSet& samples, KernelFamily family, double sigma_min, double sigma_max,
                            int steps_per_decade, const EstimatorConfig& config, Index repeats,
                            std::uint64_t seed);

/// Tidy `sigma,repeat,value_sq` rows followed by nothing else.
void write_sweep_csv(const SweepResult& sweep, std::ostream& out);

struct Type2Config {
  std::vector<double> epsilons{4.0};
  std::vector<Index> bases{256};
  Index samples_per_set = 1000;
  double spacing = 5.0;
  Index trials = 100;
  double alpha = 0.05;
  Index shuffles = 1000;
  EstimatorConfig estimator{};
};

struct Type2Cell {
  double epsilon = 1.0;
  Index basis = 0;
  Index trials = 0;
  Index rejections = 0;

  double rejection_rate() const { return trials ? static_cast<double>(rejections) / static_cast<double>(trials) : 0.0; }
  /// Fraction of trials that failed to reject. At epsilon = 1 this is
  /// 1 - (Type I rate).
  double type2_error() const { return 1.0 - rejection_rate(); }
};

/// Blob P vs Q tests over the (epsilon, basis) grid.  Trial t draws its data
/// from derive_seed(seed, t) for every cell, so cells share noise.
std::vector<Type2Cell> type2_experiment(const Type2Config& config, std::uint64_t seed);

void write_type2_csv(const std::vector<Type2Cell>& cells, std::ostream& out);

}  // namespace fastmmd
