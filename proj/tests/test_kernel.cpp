#include "fastmmd/kernel.hpp"

#include "support.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>

using namespace fastmmd;

TEST_CASE("analytic kernel values") {
  const Eigen::Vector2d x(0.3, -1.2);
  CHECK(evaluate(ShiftInvariantKernel::gaussian(1.0, 2.5), x, x) == 2.5);

  const double r = std::sqrt(2.0 * std::log(2.0));
  const Eigen::Vector2d y = x + Eigen::Vector2d(r, 0.0);
  CHECK(evaluate(ShiftInvariantKernel::gaussian(1.0), x, y) == doctest::Approx(0.5).epsilon(1e-14));

  const Eigen::Vector3d a(0, 0, 0);
  const Eigen::Vector3d b(std::log(4.0) / 2, -std::log(4.0) / 4, std::log(4.0) / 4);
  CHECK(evaluate(ShiftInvariantKernel::laplacian(1.0), a, b) == doctest::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("kernel evaluation rejects mismatched dimensions and bad parameters") {
  CHECK_THROWS_AS(evaluate(ShiftInvariantKernel::gaussian(1.0), Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(3)),
                  InvalidArgument);
  CHECK_THROWS_AS(ShiftInvariantKernel::gaussian(0.0), InvalidArgument);
  CHECK_THROWS_AS(ShiftInvariantKernel::laplacian(1.0, -1.0), InvalidArgument);
  CHECK_THROWS_AS(parse_kernel_family("polynomial"), InvalidArgument);
  CHECK(parse_kernel_family("laplacian") == KernelFamily::laplacian);
}

TEST_CASE("kernels are symmetric and bounded by k0") {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> z(0.0, 3.0);
  for (auto family : {KernelFamily::gaussian, KernelFamily::laplacian}) {
    const ShiftInvariantKernel k(family, 0.7, 1.3);
    for (int t = 0; t < 200; ++t) {
      Eigen::VectorXd x(5), y(5);
      for (Index j = 0; j < 5; ++j) {
        x(j) = z(gen);
        y(j) = z(gen);
      }
      const double kxy = evaluate(k, x, y);
      CHECK(kxy == evaluate(k, y, x));
      CHECK(kxy <= 1.3);
      CHECK(kxy >= 0.0);
      CHECK(kxy == doctest::Approx(testing::naive_kernel(k, x, y)).epsilon(1e-14));
    }
  }
}

TEST_CASE("kernel templates work in single precision") {
  const Eigen::Vector2f x(0.f, 0.f), y(1.f, 1.f);
  const float v = evaluate(ShiftInvariantKernel::gaussian(1.0), x, y);
  CHECK(v == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
}

TEST_CASE("gram matrices are positive semidefinite") {
  std::mt19937_64 gen(2);
  for (auto family : {KernelFamily::gaussian, KernelFamily::laplacian}) {
    for (int t = 0; t < 10; ++t) {
      const SampleSet s = testing::random_set(gen, 12, 13, 3);
      const ShiftInvariantKernel k(family, 0.5 + t * 0.3, 2.0);
      const Eigen::MatrixXd g = gram_matrix(k, s.points());
      CHECK(g.isApprox(g.transpose()));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
      CHECK(eig.eigenvalues().minCoeff() >= -1e-8 * 2.0);
    }
  }
}

TEST_CASE("gaussian spectral samples have variance 1/sigma^2") {
  for (double sigma : {1.0, 2.0}) {
    const FrequencyBank bank = sample_spectral(ShiftInvariantKernel::gaussian(sigma), 100000, 2, 17);
    CHECK(bank.size() == 100000);
    CHECK(bank.dim() == 2);
    CHECK(bank.provenance == BankProvenance::iid_spectral);
    for (Index j = 0; j < 2; ++j) {
      const double var = bank.omegas.col(j).squaredNorm() / bank.size();
      const double want = 1.0 / (sigma * sigma);
      CHECK(var / want >= 0.98);
      CHECK(var / want <= 1.02);
    }
  }
}

TEST_CASE("laplacian spectral samples are Cauchy with scale 1/sigma") {
  const double sigma = 0.5;
  const FrequencyBank bank = sample_spectral(ShiftInvariantKernel::laplacian(sigma), 50000, 2, 3);
  std::vector<double> col(bank.omegas.col(0).data(), bank.omegas.col(0).data() + bank.size());
  std::sort(col.begin(), col.end());
  // Quartiles of Cauchy(0, s) are -s and +s.
  const double q1 = col[col.size() / 4];
  const double q3 = col[3 * col.size() / 4];
  CHECK(q1 == doctest::Approx(-1.0 / sigma).epsilon(0.04));
  CHECK(q3 == doctest::Approx(1.0 / sigma).epsilon(0.04));
}

TEST_CASE("spectral sampling is deterministic under the seed") {
  const auto k = ShiftInvariantKernel::gaussian(1.0);
  CHECK(sample_spectral(k, 50, 3, 5).omegas == sample_spectral(k, 50, 3, 5).omegas);
  CHECK(sample_spectral(k, 50, 3, 5).omegas != sample_spectral(k, 50, 3, 6).omegas);
  // Leading rows do not depend on how many are drawn.
  CHECK(sample_spectral(k, 10, 3, 5).omegas == sample_spectral(k, 50, 3, 5).omegas.topRows(10));
  CHECK_THROWS_AS(sample_spectral(k, 0, 3, 5), InvalidArgument);
}

TEST_CASE("spectral second moment") {
  CHECK(spectral_second_moment(ShiftInvariantKernel::gaussian(1.0), 2) == 2.0);
  CHECK(spectral_second_moment(ShiftInvariantKernel::gaussian(2.0), 8) == 2.0);
  CHECK(std::isinf(spectral_second_moment(ShiftInvariantKernel::laplacian(1.0), 3)));
}

TEST_CASE("Monte Carlo cosine average reproduces the kernel") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> z;
  for (auto family : {KernelFamily::gaussian, KernelFamily::laplacian}) {
    const ShiftInvariantKernel k(family, 1.5);
    const FrequencyBank bank = sample_spectral(k, 100000, 3, 99);
    for (int t = 0; t < 5; ++t) {
      const Eigen::Vector3d x(z(gen), z(gen), z(gen)), y(z(gen), z(gen), z(gen));
      const double approx = (bank.omegas * (x - y)).array().cos().mean() * k.k0();
      CHECK(std::abs(approx - evaluate(k, x, y)) < 0.02);
    }
  }
}

TEST_CASE("bank dump has one row per frequency") {
  const FrequencyBank bank = sample_spectral(ShiftInvariantKernel::gaussian(1.0), 3, 2, 1);
  std::ostringstream out;
  write_bank_csv(bank, out);
  const std::string text = out.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  CHECK(text.rfind("k,w0,w1\n", 0) == 0);
}
