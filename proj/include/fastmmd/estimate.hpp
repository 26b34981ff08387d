#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <optional>
#include <string_view>

namespace fastmmd {

enum class EstimateKind { biased, unbiased };

enum class Method { exact, linear, btest, fourier, fastfood, circular };

std::string_view to_string(EstimateKind kind);
std::string_view to_string(Method method);
EstimateKind parse_estimate_kind(std::string_view text);
Method parse_method(std::string_view text);

/// A squared-MMD estimate and where it came from.
///
/// Unbiased values may be slightly negative; `value()` clamps before the
/// square root.  `basis` is the number of frequencies (0 for the exact and
/// subsampling estimators) and `seed` is set for randomized methods.
struct MmdEstimate {
  double value_sq = 0.0;
  EstimateKind kind = EstimateKind::biased;
  Method method = Method::exact;
  Eigen::Index basis = 0;
  std::optional<std::uint64_t> seed;

  double value() const { return std::sqrt(value_sq > 0.0 ? value_sq : 0.0); }
};

/// Both estimates from one pass. `unbiased` is empty when a class has fewer
/// than two samples.
struct EstimatePair {
  MmdEstimate biased;
  std::optional<MmdEstimate> unbiased;
};

}  // namespace fastmmd
