#include "fastmmd/hypothesis.hpp"
#include "fastmmd/exact.hpp"
#include "fastmmd/fourier.hpp"

#include "support.hpp"

#include <doctest.h>

#include <mutex>
#include <set>
#include <sstream>

using namespace fastmmd;

TEST_CASE("estimator configuration rules") {
  EstimatorConfig c;
  c.method = Method::linear;
  c.kind = EstimateKind::biased;
  CHECK_THROWS_AS(validate(c), InvalidArgument);
  c.method = Method::btest;
  CHECK_THROWS_AS(validate(c), InvalidArgument);
  c.kind = EstimateKind::unbiased;
  c.block_size = 1;
  CHECK_THROWS_AS(validate(c), InvalidArgument);
  c.block_size = 0;
  CHECK_NOTHROW(validate(c));
  c.method = Method::circular;
  CHECK_THROWS_AS(validate(c), InvalidArgument);
  c.kind = EstimateKind::biased;
  CHECK_NOTHROW(validate(c));
  c.method = Method::fourier;
  c.basis = 0;
  CHECK_THROWS_AS(validate(c), InvalidArgument);
  c.method = Method::fastfood;
  c.basis = 16;
  c.kernel = ShiftInvariantKernel::laplacian(1.0);
  CHECK_THROWS_AS(validate(c), InvalidArgument);
  CHECK_THROWS_AS(make_estimator(c), InvalidArgument);
}

TEST_CASE("estimator dispatch matches the module functions") {
  std::mt19937_64 gen(1);
  const SampleSet s = testing::random_set(gen, 20, 22, 3);
  const auto k = ShiftInvariantKernel::gaussian(1.3);
  EstimatorConfig c;
  c.kernel = k;
  c.basis = 50;
  c.method = Method::exact;
  CHECK(estimate(s, c, 1).value_sq == mmd_unbiased_exact(s, k).value_sq);
  c.method = Method::fourier;
  c.kind = EstimateKind::biased;
  CHECK(estimate(s, c, 4).value_sq == fastmmd_fourier(s, k, sample_spectral(k, 50, 3, 4)).biased.value_sq);
  c.method = Method::linear;
  c.kind = EstimateKind::unbiased;
  CHECK(estimate(s, c, 9).value_sq == mmd_linear(s, k, 9).value_sq);
}

TEST_CASE("higher quantile convention") {
  std::vector<double> null(100);
  for (int i = 0; i < 100; ++i) null[static_cast<std::size_t>(i)] = 100 - i;  // 1..100 in reverse
  CHECK(null_quantile(null, 0.05) == 95.0);
  CHECK(null_quantile(null, 0.5) == 50.0);
  CHECK(null_quantile(null, 0.999) == 1.0);
  CHECK(null_quantile({3.0}, 0.05) == 3.0);
  CHECK(null_quantile({1.0, 2.0, 3.0}, 0.5) == 2.0);  // ceil(1.5) = 2
  CHECK_THROWS_AS(null_quantile({}, 0.05), InvalidArgument);
  CHECK_THROWS_AS(null_quantile({1.0}, 1.0), InvalidArgument);
}

TEST_CASE("threshold never grows with alpha") {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> z;
  std::vector<double> null(537);
  for (auto& v : null) v = z(gen);
  double prev = std::numeric_limits<double>::infinity();
  for (double alpha = 0.001; alpha < 1.0; alpha += 0.013) {
    const double t = null_quantile(null, alpha);
    CHECK(t <= prev);
    prev = t;
  }
}

TEST_CASE("add-one p value") {
  const std::vector<double> null{0.1, 0.2, 0.3, 0.4};
  CHECK(permutation_p_value(null, 0.25) == doctest::Approx(3.0 / 5.0));
  CHECK(permutation_p_value(null, 1.0) == doctest::Approx(1.0 / 5.0));
  CHECK(permutation_p_value(null, 0.4) == doctest::Approx(2.0 / 5.0));
  CHECK(permutation_p_value(null, -1.0) == 1.0);
}

TEST_CASE("bootstrap permutes labels, keeps class sizes and redraws seeds") {
  std::mt19937_64 gen(3);
  const SampleSet s = testing::random_set(gen, 7, 12, 2);
  std::mutex mu;
  std::set<std::uint64_t> seeds;
  std::set<std::vector<Label>> labelings;
  const Estimator spy = [&](const SampleSet& t, std::uint64_t seed) {
    CHECK(t.count(Label::first) == 7);
    CHECK(t.count(Label::second) == 12);
    CHECK(t.points() == s.points());
    std::lock_guard lock(mu);
    seeds.insert(seed);
    labelings.insert(t.labels());
    return MmdEstimate{};
  };
  const auto null = bootstrap_null(s, spy, 50, 11, Parallelism{2});
  CHECK(null.size() == 50);
  CHECK(seeds.size() == 50);
  CHECK(labelings.size() > 40);
  CHECK_THROWS_AS(bootstrap_null(s, spy, 0, 1), InvalidArgument);
}

TEST_CASE("estimator failures name the shuffle") {
  std::mt19937_64 gen(4);
  const SampleSet s = testing::random_set(gen, 5, 5, 2);
  int calls = 0;
  const Estimator failing = [&](const SampleSet&, std::uint64_t) -> MmdEstimate {
    if (++calls == 4) throw NumericalError("bad value");
    return {};
  };
  try {
    bootstrap_null(s, failing, 10, 1);
    FAIL("expected an exception");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("shuffle 3") != std::string::npos);
  }
}

TEST_CASE("observed labeling is not forced into the null") {
  // With a perfectly separated pair, a null that contained the observed
  // labeling would make the p value at least 2 / (B + 1).
  Eigen::MatrixXd x(1, 6), y(1, 6);
  x << 0, 0.1, 0.2, 0.3, 0.4, 0.5;
  y << 50, 50.1, 50.2, 50.3, 50.4, 50.5;
  const SampleSet s = SampleSet::from_groups(x, y);
  EstimatorConfig c;
  c.method = Method::exact;
  const TestResult r = two_sample_test(s, make_estimator(c), 0.05, 99, 2);
  CHECK(r.reject);
  CHECK(r.p_value <= 2.0 / 100.0);
}

TEST_CASE("two sample test result is deterministic and consistent") {
  const SampleSet s = synth_blob_pair(BlobSpec{5.0, 4.0, 150}, 3);
  EstimatorConfig c;
  c.basis = 64;
  const Estimator est = make_estimator(c);
  const TestResult a = two_sample_test(s, est, 0.05, 200, 17);
  const TestResult b = two_sample_test(s, est, 0.05, 200, 17, Parallelism{3});
  CHECK(a.statistic == b.statistic);
  CHECK(a.threshold == b.threshold);
  CHECK(a.p_value == b.p_value);
  CHECK(a.reject == (a.statistic > a.threshold));
  CHECK(a.p_value > 0.0);
  CHECK(a.p_value <= 1.0);
  CHECK(a.shuffles == 200);
  CHECK(a.method == Method::fourier);
  CHECK(a.basis == 64);
  CHECK_THROWS_AS(two_sample_test(s, est, 0.0, 10, 1), InvalidArgument);
}

TEST_CASE("null of the unbiased statistic is centered at zero") {
  const SampleSet s = synth_blob_pair(BlobSpec{5.0, 1.0, 100}, 5);
  EstimatorConfig c;
  c.method = Method::exact;
  const auto null = bootstrap_null(s, make_estimator(c), 1000, 8);
  const auto mo = testing::moments(null);
  CHECK(std::abs(mo.mean) < 3.0 * mo.stderr_);
}

TEST_CASE("geometric bandwidth grid") {
  const auto g = geometric_grid(0.1, 100.0, 5);
  REQUIRE(g.size() == 16);
  for (int k = 0; k < 16; ++k) CHECK(g[static_cast<std::size_t>(k)] == doctest::Approx(0.1 * std::pow(10.0, k / 5.0)));
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
  CHECK_THROWS_AS(geometric_grid(1.0, 1.0, 5), InvalidArgument);
  CHECK_THROWS_AS(geometric_grid(1.0, 2.0, 0), InvalidArgument);
}

TEST_CASE("bandwidth sweep statistics and argmax") {
  const SampleSet s = synth_ring(60, 4);
  EstimatorConfig c;
  c.method = Method::fourier;
  c.basis = 128;
  const SweepResult r = bandwidth_sweep(s, KernelFamily::gaussian, 0.1, 100.0, 5, c, 3, 9);
  REQUIRE(r.points.size() == 16);
  double best = -1e300;
  for (const auto& p : r.points) {
    CHECK(p.estimates.size() == 3);
    CHECK(p.stddev >= 0.0);
    double m = 0;
    for (const auto& e : p.estimates) m += e.value_sq;
    CHECK(p.mean == doctest::Approx(m / 3.0));
    if (p.mean > best) best = p.mean;
  }
  for (const auto& p : r.points)
    if (p.sigma == r.argmax_sigma) CHECK(p.mean == best);
  CHECK(r.sigmas().front() == doctest::Approx(0.1));
  std::ostringstream out;
  write_sweep_csv(r, out);
  const std::string text = out.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 16 * 3);
  CHECK_THROWS_AS(bandwidth_sweep(s, KernelFamily::gaussian, 0.1, 100.0, 5, c, 0, 9), InvalidArgument);
}

TEST_CASE("type two table shape") {
  Type2Config c;
  c.epsilons = {1.0, 6.0};
  c.bases = {8, 32};
  c.samples_per_set = 60;
  c.trials = 4;
  c.shuffles = 49;
  c.estimator.method = Method::fourier;
  const auto cells = type2_experiment(c, 3);
  REQUIRE(cells.size() == 4);
  CHECK(cells[0].epsilon == 1.0);
  CHECK(cells[1].basis == 32);
  for (const auto& cell : cells) {
    CHECK(cell.trials == 4);
    CHECK(cell.rejections <= 4);
    CHECK(cell.type2_error() == doctest::Approx(1.0 - cell.rejection_rate()));
  }
  std::ostringstream out;
  write_type2_csv(cells, out);
  CHECK(out.str().rfind("epsilon,basis,trials,rejections,rejection_rate,type2_error\n", 0) == 0);
  c.trials = 0;
  CHECK_THROWS_AS(type2_experiment(c, 1), InvalidArgument);
}
