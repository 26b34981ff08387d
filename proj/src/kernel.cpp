#include "fastmmd/kernel.hpp"

#include "fastmmd/random.hpp"

#include <charconv>
#include <limits>
#include <ostream>
#include <string>

namespace fastmmd {

std::string_view to_string(KernelFamily family) {
  return family == KernelFamily::gaussian ? "gaussian" : "laplacian";
}

KernelFamily parse_kernel_family(std::string_view text) {
  if (text == "gaussian") return KernelFamily::gaussian;
  if (text == "laplacian") return KernelFamily::laplacian;
  throw InvalidArgument("unknown kernel family '" + std::string(text) + "'");
}

std::string_view to_string(BankProvenance provenance) {
  return provenance == BankProvenance::iid_spectral ? "iid-spectral" : "fastfood";
}

ShiftInvariantKernel::ShiftInvariantKernel(KernelFamily family, double sigma, double k0)
    : family_(family), sigma_(sigma), k0_(k0) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("kernel: sigma must be positive");
  if (!(k0 > 0.0) || !std::isfinite(k0)) throw InvalidArgument("kernel: k0 must be positive");
}

Eigen::MatrixXd gram_matrix(const ShiftInvariantKernel& kernel, const Eigen::MatrixXd& points) {
  const Index n = points.cols();
  Eigen::MatrixXd gram(n, n);
  for (Index i = 0; i < n; ++i) {
    gram(i, i) = kernel.k0();
    for (Index j = i + 1; j < n; ++j) gram(i, j) = gram(j, i) = kernel(points.col(i), points.col(j));
  }
  return gram;
}

FrequencyBank sample_spectral(const ShiftInvariantKernel& kernel, Index basis, Index dim,
                              std::uint64_t seed) {
  if (basis < 1) throw InvalidArgument("sample_spectral: basis count must be >= 1");
  if (dim < 1) throw InvalidArgument("sample_spectral: dimension must be >= 1");
  const CounterRng rng(seed);
  const double scale = 1.0 / kernel.sigma();
  FrequencyBank bank{Eigen::MatrixXd(basis, dim), seed, BankProvenance::iid_spectral};
  for (Index k = 0; k < basis; ++k) {
    for (Index j = 0; j < dim; ++j) {
      const auto index = static_cast<std::uint64_t>(k * dim + j);
      bank.omegas(k, j) = scale * (kernel.family() == KernelFamily::gaussian ? rng.normal_at(index)
                                                                             : rng.cauchy_at(index));
    }
  }
  return bank;
}

double spectral_second_moment(const ShiftInvariantKernel& kernel, Index dim) {
  if (kernel.family() == KernelFamily::laplacian) return std::numeric_limits<double>::infinity();
  return static_cast<double>(dim) / (kernel.sigma() * kernel.sigma());
}

void write_bank_csv(const FrequencyBank& bank, std::ostream& out) {
  out << 'k';
  for (Index j = 0; j < bank.dim(); ++j) out << ",w" << j;
  out << '\n';
  char buf[32];
  for (Index k = 0; k < bank.size(); ++k) {
    out << k;
    for (Index j = 0; j < bank.dim(); ++j) {
      const auto res = std::to_chars(buf, buf + sizeof buf, bank.omegas(k, j));
      out << ',';
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

}  // namespace fastmmd
