#pragma once

#include "fastmmd/dataset.hpp"
#include "fastmmd/estimate.hpp"
#include "fastmmd/kernel.hpp"

#include <Eigen/Core>

#include <iosfwd>
#include <utility>
#include <vector>

namespace fastmmd {

/// Weighted point masses on the unit circle, angles in [0, 2 pi).
struct CircularSample {
  std::vector<double> angles;
  std::vector<double> weights;
};

struct DiscrepancyResult {
  double eta = 0.0;             ///< circular discrepancy, >= 0
  double phase = 0.0;           ///< atan2(sum a_i sin x_i, sum a_i cos x_i) in (-pi, pi]
  double decision_angle = 0.0;  ///< maximizing y in (-pi, pi], phase + pi/2; 0 when degenerate
  bool degenerate = false;      ///< eta at rounding level, any angle is optimal
};

/// Representative of `value` mod 2 pi in [0, 2 pi).
double wrap_angle(double value);

/// Wraps omega' x_i onto the circle for each class, with weights 1/|I_c|.
std::pair<CircularSample, CircularSample> wrap(const Eigen::Ref<const Eigen::VectorXd>& omega,
                                               const SampleSet& samples);

/// Objective of the sup over decision angles:
///   f(y) = sum_i a_i sin(y - x_i), a_i = +w on c1, -w on c2.
double margin_objective(const CircularSample& first, const CircularSample& second, double y);

/// sup_y f(y) in closed form: eta = [sum_ij a_i a_j cos(x_i - x_j)]^(1/2).
/// Since f(y) = eta sin(y - phase), the supremum is attained at
/// y = phase + pi/2, not at the phase itself.
DiscrepancyResult circular_discrepancy(const CircularSample& first, const CircularSample& second);

/// k0/L sum_k eta^2(omega_k), one wrap per frequency.  Biased estimate.
MmdEstimate ensemble_discrepancy(const SampleSet& samples, const ShiftInvariantKernel& kernel,
                                 const FrequencyBank& bank);

/// Tidy per-point dump:
/// `k,label,angle,weight,eta,phase,decision_angle`, one row per wrapped sample.
void write_circle_csv(const SampleSet& samples, const FrequencyBank& bank, std::ostream& out);

}  // namespace fastmmd
