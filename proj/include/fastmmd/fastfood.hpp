#pragma once

#include "fastmmd/dataset.hpp"
#include "fastmmd/estimate.hpp"
#include "fastmmd/fourier.hpp"
#include "fastmmd/kernel.hpp"
#include "fastmmd/parallel.hpp"

#include <Eigen/Core>

#include <bit>
#include <cstdint>
#include <vector>

namespace fastmmd {

inline bool is_power_of_two(Index n) { return n > 0 && std::has_single_bit(static_cast<std::uint64_t>(n)); }

/// In-place unnormalized Walsh-Hadamard transform of a vector whose length is
/// a power of two.  H H = n I.
template <typename Derived>
void fwht(Eigen::DenseBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  const Index n = v.size();
  if (!is_power_of_two(n)) throw InvalidArgument("fwht: length must be a power of two");
  Scalar* data = v.derived().data();
  for (Index h = 1; h < n; h *= 2) {
    for (Index i = 0; i < n; i += 2 * h) {
      Scalar* lo = data + i;
      Scalar* hi = lo + h;
      for (Index j = 0; j < h; ++j) {
        const Scalar a = lo[j];
        const Scalar b = hi[j];
        lo[j] = a + b;
        hi[j] = a - b;
      }
    }
  }
}

template <typename Derived>
void fwht(Eigen::DenseBase<Derived>&& v) {
  fwht(v);
}

/// Copying overload.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> fwht_copy(const Eigen::MatrixBase<Derived>& x) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> v = x.reshaped();
  fwht(v);
  return v;
}

/// One d' x d' structured block V = S H G P H B / (sigma sqrt(d')).
///
///   B: random signs, P: permutation, G: standard normal diagonal,
///   S: s_i / |G|_2 with s_i ~ chi(d'), so every row of V has the norm of a
///   d'-dimensional N(0, I / sigma^2) vector.
struct FastfoodBlock {
  Eigen::VectorXd signs;
  std::vector<Index> permutation;  ///< output i takes input permutation[i]
  Eigen::VectorXd gaussian;
  Eigen::VectorXd scaling;
};

struct FastfoodStack {
  std::vector<FastfoodBlock> blocks;
  Index input_dim = 0;
  Index padded_dim = 0;
  Index basis = 0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
};

/// ceil(L / d') independent blocks, d' the next power of two >= dim.
/// Block b draws from derive_seed(seed, b).
FastfoodStack make_fastfood_stack(double sigma, Index dim, Index basis, std::uint64_t seed);

/// omega_k' x for k < L.  `x` is zero-padded to d'.
Eigen::VectorXd fastfood_project(const FastfoodStack& stack, const Eigen::Ref<const Eigen::VectorXd>& x);

/// Projections of the columns of `points` through block `b`:
/// output is samples x min(d', L - b d').
void fastfood_project_block(const FastfoodStack& stack, Index block,
                            const Eigen::Ref<const Eigen::MatrixXd>& points, Eigen::MatrixXd& out);

/// The implied L x d frequency matrix (projections of the unit vectors).
FrequencyBank materialize(const FastfoodStack& stack);

/// Projector feeding the Fourier accumulator, one group per block.
Projector fastfood_projector(const FastfoodStack& stack);

/// FastMMD with Fastfood frequencies.  Gaussian kernels only.
EstimatePair fastmmd_fastfood(const SampleSet& samples, const ShiftInvariantKernel& kernel, Index basis,
                              std::uint64_t seed, Parallelism par = {});

}  // namespace fastmmd
