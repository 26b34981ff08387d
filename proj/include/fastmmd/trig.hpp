#pragma once

#include <span>

namespace fastmmd {

/// Elementwise sin and cos of `angles`. All three spans must have equal size.
/// Vectorized; accurate to a few ulp.
void sincos(std::span<const double> angles, std::span<double> sines,
            std::span<double> cosines);

}  // namespace fastmmd
