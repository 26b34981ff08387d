#pragma once

#include "fastmmd/error.hpp"

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <string_view>

namespace fastmmd {

using Eigen::Index;

enum class KernelFamily { gaussian, laplacian };

std::string_view to_string(KernelFamily family);
KernelFamily parse_kernel_family(std::string_view text);

/// Shift-invariant kernel K(x, y) = k0 * profile(x - y).
///
///   gaussian:  k0 * exp(-|x - y|_2^2 / (2 sigma^2))
///   laplacian: k0 * exp(-|x - y|_1 / sigma)
class ShiftInvariantKernel {
 public:
  ShiftInvariantKernel(KernelFamily family, double sigma, double k0 = 1.0);

  static ShiftInvariantKernel gaussian(double sigma, double k0 = 1.0) {
    return {KernelFamily::gaussian, sigma, k0};
  }
  static ShiftInvariantKernel laplacian(double sigma, double k0 = 1.0) {
    return {KernelFamily::laplacian, sigma, k0};
  }

  KernelFamily family() const { return family_; }
  double sigma() const { return sigma_; }
  double k0() const { return k0_; }

  /// Kernel value for a difference vector.
  template <typename Derived>
  typename Derived::Scalar at_offset(const Eigen::MatrixBase<Derived>& delta) const {
    using Scalar = typename Derived::Scalar;
    if (family_ == KernelFamily::gaussian)
      return Scalar(k0_) * std::exp(-delta.squaredNorm() / Scalar(2.0 * sigma_ * sigma_));
    return Scalar(k0_) * std::exp(-delta.template lpNorm<1>() / Scalar(sigma_));
  }

  template <typename DerivedX, typename DerivedY>
  typename DerivedX::Scalar operator()(const Eigen::MatrixBase<DerivedX>& x,
                                       const Eigen::MatrixBase<DerivedY>& y) const {
    return at_offset(x - y);
  }

 private:
  KernelFamily family_;
  double sigma_;
  double k0_;
};

/// K(x, y) with a dimension check.
template <typename DerivedX, typename DerivedY>
typename DerivedX::Scalar evaluate(const ShiftInvariantKernel& kernel,
                                   const Eigen::MatrixBase<DerivedX>& x,
                                   const Eigen::MatrixBase<DerivedY>& y) {
  if (x.size() != y.size())
    throw InvalidArgument("kernel evaluate: dimension mismatch");
  return kernel(x.derived().reshaped(), y.derived().reshaped());
}

/// Gram matrix over the columns of `points`.
Eigen::MatrixXd gram_matrix(const ShiftInvariantKernel& kernel, const Eigen::MatrixXd& points);

enum class BankProvenance { iid_spectral, fastfood };

std::string_view to_string(BankProvenance provenance);

/// L frequency vectors, one per row.
struct FrequencyBank {
  Eigen::MatrixXd omegas;
  std::uint64_t seed = 0;
  BankProvenance provenance = BankProvenance::iid_spectral;

  Index size() const { return omegas.rows(); }
  Index dim() const { return omegas.cols(); }
};

/// Draws L frequencies from the kernel's normalized spectral law:
/// N(0, I / sigma^2) for gaussian, i.i.d. Cauchy(0, 1 / sigma) coordinates
/// for laplacian. Entry (k, j) depends only on (seed, k * d + j).
FrequencyBank sample_spectral(const ShiftInvariantKernel& kernel, Index basis, Index dim,
                              std::uint64_t seed);

/// E|omega|^2 under the spectral law: d / sigma^2 for gaussian, +infinity for
/// laplacian (the Cauchy law has no second moment).
double spectral_second_moment(const ShiftInvariantKernel& kernel, Index dim);

/// Writes one row per frequency: `k,w0,w1,...`.
void write_bank_csv(const FrequencyBank& bank, std::ostream& out);

}  // namespace fastmmd
