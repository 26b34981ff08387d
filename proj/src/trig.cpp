#include "fastmmd/trig.hpp"

#include <cassert>
#include <cmath>
#include <cstddef>

namespace fastmmd {

void sincos(std::span<const double> angles, std::span<double> sines,
            std::span<double> cosines) {
  assert(sines.size() == angles.size() && cosines.size() == angles.size());
  const std::size_t n = angles.size();
  const double* __restrict in = angles.data();
  double* __restrict s = sines.data();
  double* __restrict c = cosines.data();
#pragma omp simd
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = std::sin(in[i]);
    c[i] = std::cos(in[i]);
  }
}

}  // namespace fastmmd
