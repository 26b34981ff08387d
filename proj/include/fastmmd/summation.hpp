#pragma once

#include <cstddef>
#include <span>

namespace fastmmd {

/// Pairwise (cascade) summation; rounding error grows as O(log n).
template <typename Scalar>
Scalar pairwise_sum(std::span<const Scalar> values) {
  constexpr std::size_t kLeaf = 64;
  if (values.size() <= kLeaf) {
    // Four interleaved partial sums; vectorizes without reassociation flags.
    Scalar lane[4] = {Scalar(0), Scalar(0), Scalar(0), Scalar(0)};
    std::size_t i = 0;
    for (; i + 4 <= values.size(); i += 4)
      for (std::size_t j = 0; j < 4; ++j) lane[j] += values[i + j];
    for (; i < values.size(); ++i) lane[0] += values[i];
    return (lane[0] + lane[1]) + (lane[2] + lane[3]);
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace fastmmd
