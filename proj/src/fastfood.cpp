#include "fastmmd/fastfood.hpp"

#include "fastmmd/random.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace fastmmd {

FastfoodStack make_fastfood_stack(double sigma, Index dim, Index basis, std::uint64_t seed) {
  if (!(sigma > 0.0)) throw InvalidArgument("fastfood: sigma must be positive");
  if (dim < 1) throw InvalidArgument("fastfood: dimension must be >= 1");
  if (basis < 1) throw InvalidArgument("fastfood: basis must be >= 1");

  FastfoodStack stack;
  stack.input_dim = dim;
  stack.padded_dim = static_cast<Index>(std::bit_ceil(static_cast<std::uint64_t>(dim)));
  stack.basis = basis;
  stack.sigma = sigma;
  stack.seed = seed;

  const Index width = stack.padded_dim;
  const Index count = (basis + width - 1) / width;
  stack.blocks.reserve(static_cast<std::size_t>(count));
  for (Index b = 0; b < count; ++b) {
    CounterRng rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
    FastfoodBlock block;
    block.signs.resize(width);
    for (Index i = 0; i < width; ++i) block.signs(i) = (rng.next_bits() >> 63) ? 1.0 : -1.0;
    block.permutation.resize(static_cast<std::size_t>(width));
    std::iota(block.permutation.begin(), block.permutation.end(), Index{0});
    shuffle(block.permutation.begin(), block.permutation.end(), rng);
    block.gaussian.resize(width);
    for (Index i = 0; i < width; ++i) block.gaussian(i) = rng.normal();
    const double g_norm = block.gaussian.norm();
    block.scaling.resize(width);
    // chi^2(d') = 2 Gamma(d'/2, 1)
    for (Index i = 0; i < width; ++i)
      block.scaling(i) = std::sqrt(2.0 * rng.gamma(0.5 * static_cast<double>(width))) / g_norm;
    stack.blocks.push_back(std::move(block));
  }
  return stack;
}

void fastfood_project_block(const FastfoodStack& stack, Index block,
                            const Eigen::Ref<const Eigen::MatrixXd>& points, Eigen::MatrixXd& out) {
  if (points.rows() > stack.padded_dim)
    throw InvalidArgument("fastfood: input dimension " + std::to_string(points.rows()) + " exceeds padded dimension " +
                          std::to_string(stack.padded_dim));
  const FastfoodBlock& ff = stack.blocks.at(static_cast<std::size_t>(block));
  const Index width = stack.padded_dim;
  const Index keep = std::min(width, stack.basis - block * width);
  const double norm = 1.0 / (stack.sigma * std::sqrt(static_cast<double>(width)));

  out.resize(points.cols(), keep);
  Eigen::VectorXd v(width), w(width);
  for (Index s = 0; s < points.cols(); ++s) {
    v.setZero();
    v.head(points.rows()) = ff.signs.head(points.rows()).cwiseProduct(points.col(s));
    fwht(v);
    for (Index i = 0; i < width; ++i) w(i) = ff.gaussian(i) * v(ff.permutation[static_cast<std::size_t>(i)]);
    fwht(w);
    out.row(s) = (norm * ff.scaling.head(keep).cwiseProduct(w.head(keep))).transpose();
  }
}

Eigen::VectorXd fastfood_project(const FastfoodStack& stack, const Eigen::Ref<const Eigen::VectorXd>& x) {
  Eigen::VectorXd out(stack.basis);
  Eigen::MatrixXd part;
  for (Index b = 0; b < static_cast<Index>(stack.blocks.size()); ++b) {
    fastfood_project_block(stack, b, x, part);
    out.segment(b * stack.padded_dim, part.cols()) = part.row(0).transpose();
  }
  return out;
}

FrequencyBank materialize(const FastfoodStack& stack) {
  FrequencyBank bank{Eigen::MatrixXd(stack.basis, stack.input_dim), stack.seed, BankProvenance::fastfood};
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(stack.input_dim, stack.input_dim);
  Eigen::MatrixXd part;
  for (Index b = 0; b < static_cast<Index>(stack.blocks.size()); ++b) {
    fastfood_project_block(stack, b, identity, part);  // row j = projections of e_j
    bank.omegas.middleRows(b * stack.padded_dim, part.cols()) = part.transpose();
  }
  return bank;
}

Projector fastfood_projector(const FastfoodStack& stack) {
  Projector p;
  p.basis = stack.basis;
  p.group_size = stack.padded_dim;
  const FastfoodStack* ff = &stack;
  p.project = [ff](Index g, const Eigen::Ref<const Eigen::MatrixXd>& points, Eigen::MatrixXd& out) {
    fastfood_project_block(*ff, g, points, out);
  };
  return p;
}

EstimatePair fastmmd_fastfood(const SampleSet& samples, const ShiftInvariantKernel& kernel, Index basis,
                              std::uint64_t seed, Parallelism par) {
  if (kernel.family() != KernelFamily::gaussian)
    throw InvalidArgument("fastmmd_fastfood: Fastfood projections require a gaussian kernel");
  const FastfoodStack stack = make_fastfood_stack(kernel.sigma(), samples.dim(), basis, seed);
  return accumulate(samples, fastfood_projector(stack), par).estimates(kernel.k0(), Method::fastfood, seed);
}

}  // namespace fastmmd
