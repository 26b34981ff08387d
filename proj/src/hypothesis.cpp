#include "fastmmd/hypothesis.hpp"

#include "fastmmd/error.hpp"
#include "fastmmd/random.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <cmath>
#include <ostream>
#include <string>

namespace fastmmd {

namespace {

template <typename Error>
[[noreturn]] void rethrow_with_shuffle(const Error& e, Index shuffle) {
  throw Error(std::string(e.what()) + " (bootstrap shuffle " + std::to_string(shuffle) + ")");
}

}  // namespace

std::vector<double> bootstrap_null(const SampleSet& samples, const Estimator& estimator, Index shuffles,
                                   std::uint64_t seed, Parallelism par) {
  if (shuffles < 1) throw InvalidArgument("bootstrap_null: shuffles must be >= 1");
  std::vector<double> null(static_cast<std::size_t>(shuffles));
  parallel_for(shuffles, par, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
    for (Index b = begin; b < end; ++b) {
      const std::uint64_t child = derive_seed(seed, static_cast<std::uint64_t>(b));
      std::vector<Label> labels = samples.labels();
      CounterRng rng(derive_seed(child, 0));
      shuffle(labels.begin(), labels.end(), rng);
      try {
        null[static_cast<std::size_t>(b)] = estimator(samples.relabeled(std::move(labels)), derive_seed(child, 1)).value_sq;
      } catch (const InvalidArgument& e) {
        rethrow_with_shuffle(e, b);
      } catch (const NumericalError& e) {
        rethrow_with_shuffle(e, b);
      }
    }
  });
  return null;
}

double null_quantile(std::vector<double> null, double alpha) {
  if (null.empty()) throw InvalidArgument("null_quantile: empty null sample");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("null_quantile: alpha must lie in (0, 1)");
  const auto b = static_cast<double>(null.size());
  // The tiny slack keeps (1 - alpha) * B from rounding up past an integer.
  auto rank = static_cast<std::size_t>(std::ceil((1.0 - alpha) * b - 1e-9));
  rank = std::clamp<std::size_t>(rank, 1, null.size());
  std::nth_element(null.begin(), null.begin() + static_cast<std::ptrdiff_t>(rank - 1), null.end());
  return null[rank - 1];
}

double permutation_p_value(const std::vector<double>& null, double statistic) {
  const auto exceed = std::count_if(null.begin(), null.end(), [&](double v) { return v >= statistic; });
  return (1.0 + static_cast<double>(exceed)) / (static_cast<double>(null.size()) + 1.0);
}

TestResult two_sample_test(const SampleSet& samples, const Estimator& estimator, double alpha, Index shuffles,
                           std::uint64_t seed, Parallelism par) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("two_sample_test: alpha must lie in (0, 1)");
  const MmdEstimate observed = estimator(samples, derive_seed(seed, 0));
  const std::vector<double> null = bootstrap_null(samples, estimator, shuffles, derive_seed(seed, 1), par);

  TestResult r;
  r.statistic = observed.value_sq;
  r.threshold = null_quantile(null, alpha);
  r.p_value = permutation_p_value(null, r.statistic);
  r.reject = r.statistic > r.threshold;
  r.alpha = alpha;
  r.shuffles = shuffles;
  r.method = observed.method;
  r.kind = observed.kind;
  r.basis = observed.basis;
  r.seed = seed;
  return r;
}

std::vector<double> geometric_grid(double sigma_min, double sigma_max, int steps_per_decade) {
  if (!(sigma_min > 0.0) || !(sigma_max > sigma_min))
    throw InvalidArgument("geometric_grid: need 0 < sigma_min < sigma_max");
  if (steps_per_decade < 1) throw InvalidArgument("geometric_grid: steps_per_decade must be >= 1");
  std::vector<double> grid;
  for (int k = 0;; ++k) {
    const double sigma = sigma_min * std::pow(10.0, static_cast<double>(k) / steps_per_decade);
    if (sigma > sigma_max * (1.0 + 1e-12)) break;
    grid.push_back(sigma);
  }
  return grid;
}

std::vector<double> SweepResult::sigmas() const {
  std::vector<double> out;
  for (const auto& p : points) out.push_back(p.sigma);
  return out;
}

SweepResult bandwidth_sweep(const SampleSet& samples, KernelFamily family, double sigma_min, double sigma_max,
                            int steps_per_decade, const EstimatorConfig& config, Index repeats,
                            std::uint64_t seed) {
  if (repeats < 1) throw InvalidArgument("bandwidth_sweep: repeats must be >= 1");
  const std::vector<double> grid = geometric_grid(sigma_min, sigma_max, steps_per_decade);
  SweepResult result;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < grid.size(); ++g) {
    EstimatorConfig at = config;
    at.kernel = ShiftInvariantKernel(family, grid[g], config.kernel.k0());
    validate(at);
    SweepPoint point;
    point.sigma = grid[g];
    const std::uint64_t sigma_seed = derive_seed(seed, g);
    for (Index r = 0; r < repeats; ++r)
      point.estimates.push_back(estimate(samples, at, derive_seed(sigma_seed, static_cast<std::uint64_t>(r))));
    double sum = 0.0;
    for (const auto& e : point.estimates) sum += e.value_sq;
    point.mean = sum / static_cast<double>(repeats);
    if (repeats > 1) {
      double ss = 0.0;
      for (const auto& e : point.estimates) ss += (e.value_sq - point.mean) * (e.value_sq - point.mean);
      point.stddev = std::sqrt(ss / static_cast<double>(repeats - 1));
    }
    if (point.mean > best) {
      best = point.mean;
      result.argmax_sigma = point.sigma;
    }
    result.points.push_back(std::move(point));
  }
  return result;
}

void write_sweep_csv(const SweepResult& sweep, std::ostream& out) {
  out << "sigma,repeat,value_sq\n";
  char buf[32];
  auto num = [&](double v) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
  };
  for (const auto& p : sweep.points) {
    for (std::size_t r = 0; r < p.estimates.size(); ++r) {
      num(p.sigma);
      out << ',' << r << ',';
      num(p.estimates[r].value_sq);
      out << '\n';
    }
  }
}

std::vector<Type2Cell> type2_experiment(const Type2Config& config, std::uint64_t seed) {
  if (config.trials < 1) throw InvalidArgument("type2_experiment: trials must be >= 1");
  if (config.epsilons.empty() || config.bases.empty())
    throw InvalidArgument("type2_experiment: empty epsilon or basis grid");
  std::vector<Type2Cell> cells;
  for (double epsilon : config.epsilons) {
    for (Index basis : config.bases) {
      EstimatorConfig est = config.estimator;
      est.basis = basis;
      const Estimator estimator = make_estimator(est);
      const BlobSpec spec{config.spacing, epsilon, config.samples_per_set};
      Type2Cell cell{epsilon, basis, config.trials, 0};
      for (Index t = 0; t < config.trials; ++t) {
        const std::uint64_t trial_seed = derive_seed(seed, static_cast<std::uint64_t>(t));
        const SampleSet data = synth_blob_pair(spec, trial_seed);
        const std::uint64_t test_seed = derive_seed(trial_seed, static_cast<std::uint64_t>(cells.size() + 1));
        if (two_sample_test(data, estimator, config.alpha, config.shuffles, test_seed, config.estimator.par).reject)
          ++cell.rejections;
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

void write_type2_csv(const std::vector<Type2Cell>& cells, std::ostream& out) {
  out << "epsilon,basis,trials,rejections,rejection_rate,type2_error\n";
  for (const auto& c : cells)
    out << c.epsilon << ',' << c.basis << ',' << c.trials << ',' << c.rejections << ',' << c.rejection_rate() << ','
        << c.type2_error() << '\n';
}

}  // namespace fastmmd
