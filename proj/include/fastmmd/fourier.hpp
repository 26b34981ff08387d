#pragma once

#include "fastmmd/dataset.hpp"
#include "fastmmd/estimate.hpp"
#include "fastmmd/kernel.hpp"
#include "fastmmd/parallel.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace fastmmd {

/// Running sums for a weighted combination of equal-frequency sinusoids
///
///   sum_i a_i sin(t - phi_i) = A sin(t - theta)
///
/// with A^2 = cos_sum^2 + sin_sum^2 and theta = atan2(sin_sum, cos_sum).
/// Sums are additive, so partial accumulators over disjoint sample ranges
/// merge exactly (up to reassociation).
template <typename Scalar>
struct SinusoidAccumulator {
  Scalar cos_sum = Scalar(0);
  Scalar sin_sum = Scalar(0);
  Eigen::Index count = 0;

  void absorb(Scalar weight, Scalar phase) {
    cos_sum += weight * std::cos(phase);
    sin_sum += weight * std::sin(phase);
    ++count;
  }
  void merge(const SinusoidAccumulator& other) {
    cos_sum += other.cos_sum;
    sin_sum += other.sin_sum;
    count += other.count;
  }

  Scalar amplitude_sq() const { return cos_sum * cos_sum + sin_sum * sin_sum; }
  Scalar amplitude() const { return std::hypot(cos_sum, sin_sum); }
  /// In (-pi, pi]; 0 when the amplitude vanishes.
  Scalar phase() const {
    if (cos_sum == Scalar(0) && sin_sum == Scalar(0)) return Scalar(0);
    const Scalar theta = std::atan2(sin_sum, cos_sum);
    return theta <= -Scalar(EIGEN_PI) ? Scalar(EIGEN_PI) : theta;
  }
};

template <typename Scalar>
struct AmplitudePhase {
  Scalar amplitude;
  Scalar phase;
};

/// Amplitude and phase of sum_i a_i sin(t - omega' x_i) in one sequential
/// pass.  `points` holds one x_i per column.
template <typename DerivedW, typename DerivedA, typename DerivedX>
AmplitudePhase<typename DerivedX::Scalar> amplitude_phase(const Eigen::MatrixBase<DerivedW>& omega,
                                                          const Eigen::MatrixBase<DerivedA>& weights,
                                                          const Eigen::MatrixBase<DerivedX>& points) {
  using Scalar = typename DerivedX::Scalar;
  if (points.cols() < 1) throw InvalidArgument("amplitude_phase: needs at least one point");
  if (weights.size() != points.cols() || omega.size() != points.rows())
    throw InvalidArgument("amplitude_phase: size mismatch");
  SinusoidAccumulator<Scalar> acc;
  for (Eigen::Index i = 0; i < points.cols(); ++i)
    acc.absorb(weights(i), omega.reshaped().dot(points.col(i)));
  return {acc.amplitude(), acc.phase()};
}

/// Per-frequency amplitudes of the two class-mean sinusoids and of their
/// difference (Algorithm-1 form A^2 = A1^2 + A2^2 - 2 A1 A2 cos(theta1 - theta2)).
struct FrequencyAmplitudes {
  Eigen::VectorXd amp_first;
  Eigen::VectorXd phase_first;
  Eigen::VectorXd amp_second;
  Eigen::VectorXd phase_second;
  Eigen::VectorXd combined_sq;
};

/// Computes omega_k' x for a group of consecutive frequencies.
///
/// Frequencies are split into groups of `group_size` (the last may be
/// short).  `project(g, points, out)` fills `out` (samples x frequencies of
/// group g) for the d x b block `points`.
struct Projector {
  Index basis = 0;
  Index group_size = 0;
  std::function<void(Index group, const Eigen::Ref<const Eigen::MatrixXd>& points, Eigen::MatrixXd& out)>
      project;

  Index groups() const { return (basis + group_size - 1) / group_size; }
  Index group_begin(Index g) const { return g * group_size; }
  Index group_length(Index g) const { return std::min(group_size, basis - g * group_size); }
};

/// Projector over the rows of a dense frequency bank.
Projector dense_projector(const FrequencyBank& bank);

/// Streaming per-frequency sinusoid sums for both classes.
///
/// Samples are absorbed with unit weight; class weights 1/|I_c| are applied
/// when amplitudes are read out, so samples can arrive one at a time in any
/// order.
class FourierAccumulator {
 public:
  explicit FourierAccumulator(Index basis);

  Index basis() const { return static_cast<Index>(first_.size()); }
  Index count(Label label) const;

  /// One sample given its projections omega_k' x (length L).
  void absorb(Label label, const Eigen::Ref<const Eigen::VectorXd>& projections);
  /// A block of samples: `projections` is samples x frequencies for the
  /// frequencies [offset, offset + cols).  Per-frequency sums are pairwise.
  void absorb_block(Label label, Index offset, const Eigen::Ref<const Eigen::MatrixXd>& projections);
  void merge(const FourierAccumulator& other);

  const SinusoidAccumulator<double>& at(Label label, Index k) const;

  FrequencyAmplitudes amplitudes() const;

  /// Squared-MMD estimates from the absorbed samples; `method`/`seed` are
  /// recorded in the result.
  EstimatePair estimates(double k0, Method method, std::optional<std::uint64_t> seed) const;

 private:
  std::vector<SinusoidAccumulator<double>> first_;
  std::vector<SinusoidAccumulator<double>> second_;
};

/// Absorbs every sample of `samples` through `projector`.  Frequency groups
/// run in parallel; the result does not depend on the thread count.
FourierAccumulator accumulate(const SampleSet& samples, const Projector& projector, Parallelism par = {});

/// Biased and unbiased FastMMD estimates from a frequency bank (Algorithm-1
/// amplitude/phase route):
///   biased   = k0/L sum_k A^2(omega_k)
///   unbiased = k0/L [sum A^2 + sum A1^2/(m-1) + sum A2^2/(n-1)]
///              - (m+n-2) k0 / ((m-1)(n-1))
EstimatePair fastmmd_fourier(const SampleSet& samples, const ShiftInvariantKernel& kernel,
                             const FrequencyBank& bank, Parallelism par = {});

/// Random Fourier feature of one point:
///   sqrt(k0/L) [cos(omega_1'x) .. cos(omega_L'x), sin(omega_1'x) .. sin(omega_L'x)].
Eigen::VectorXd feature_vector(const FrequencyBank& bank, double k0, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Same estimates through explicit feature means z1, z2:
///   biased = |z1 - z2|^2,
///   unbiased = biased + |z1|^2/(m-1) + |z2|^2/(n-1) - (m+n-2) k0 / ((m-1)(n-1)).
EstimatePair fastmmd_features(const SampleSet& samples, const ShiftInvariantKernel& kernel,
                              const FrequencyBank& bank);

/// Diagnostic table `k,amp_first,phase_first,amp_second,phase_second,amp_sq`.
void write_amplitudes_csv(const FrequencyAmplitudes& amps, std::ostream& out);

}  // namespace fastmmd
