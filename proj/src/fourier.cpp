#include "fastmmd/fourier.hpp"

#include "fastmmd/summation.hpp"
#include "fastmmd/trig.hpp"

#include <charconv>
#include <ostream>
#include <span>
#include <vector>
#include <string>

namespace fastmmd {

namespace {

constexpr Index kDenseGroup = 64;
constexpr Index kSampleChunk = 2048;

void check_bank(const SampleSet& samples, const FrequencyBank& bank, const char* what) {
  if (bank.size() < 1) throw InvalidArgument(std::string(what) + ": empty frequency bank");
  if (bank.dim() != samples.dim())
    throw InvalidArgument(std::string(what) + ": bank dimension " + std::to_string(bank.dim()) +
                          " does not match data dimension " + std::to_string(samples.dim()));
}

double unbiased_offset(Index m, Index n, double k0) {
  const double mm = static_cast<double>(m), nn = static_cast<double>(n);
  return (mm + nn - 2.0) * k0 / ((mm - 1.0) * (nn - 1.0));
}

}  // namespace

Projector dense_projector(const FrequencyBank& bank) {
  Projector p;
  p.basis = bank.size();
  p.group_size = kDenseGroup;
  const Eigen::MatrixXd* omegas = &bank.omegas;
  p.project = [omegas](Index g, const Eigen::Ref<const Eigen::MatrixXd>& points, Eigen::MatrixXd& out) {
    const Index begin = g * kDenseGroup;
    const Index len = std::min(kDenseGroup, omegas->rows() - begin);
    out.resize(points.cols(), len);
    out.noalias() = points.transpose() * omegas->middleRows(begin, len).transpose();
  };
  return p;
}

FourierAccumulator::FourierAccumulator(Index basis)
    : first_(static_cast<std::size_t>(basis)), second_(static_cast<std::size_t>(basis)) {
  if (basis < 1) throw InvalidArgument("FourierAccumulator: basis must be >= 1");
}

Index FourierAccumulator::count(Label label) const {
  return (label == Label::first ? first_ : second_).front().count;
}

const SinusoidAccumulator<double>& FourierAccumulator::at(Label label, Index k) const {
  return (label == Label::first ? first_ : second_)[static_cast<std::size_t>(k)];
}

void FourierAccumulator::absorb(Label label, const Eigen::Ref<const Eigen::VectorXd>& projections) {
  if (projections.size() != basis()) throw InvalidArgument("FourierAccumulator: projection length mismatch");
  auto& accs = label == Label::first ? first_ : second_;
  for (Index k = 0; k < basis(); ++k) accs[static_cast<std::size_t>(k)].absorb(1.0, projections(k));
}

void FourierAccumulator::absorb_block(Label label, Index offset,
                                      const Eigen::Ref<const Eigen::MatrixXd>& projections) {
  if (offset < 0 || offset + projections.cols() > basis())
    throw InvalidArgument("FourierAccumulator: frequency range out of bounds");
  const Index rows = projections.rows();
  if (rows == 0) return;
  const auto total = static_cast<std::size_t>(rows * projections.cols());
  // Per-thread scratch: fresh megabyte-sized buffers on every call would
  // page-fault on each use.
  thread_local std::vector<double> angles, sines, cosines;
  if (angles.size() < total) {
    angles.resize(total);
    sines.resize(total);
    cosines.resize(total);
  }
  Eigen::Map<Eigen::MatrixXd>(angles.data(), rows, projections.cols()) = projections;
  sincos(std::span<const double>(angles.data(), total), std::span<double>(sines.data(), total),
         std::span<double>(cosines.data(), total));
  auto& accs = label == Label::first ? first_ : second_;
  const auto len = static_cast<std::size_t>(rows);
  for (Index c = 0; c < projections.cols(); ++c) {
    const std::size_t at = static_cast<std::size_t>(c) * len;
    SinusoidAccumulator<double> part;
    part.cos_sum = pairwise_sum<double>({cosines.data() + at, len});
    part.sin_sum = pairwise_sum<double>({sines.data() + at, len});
    part.count = rows;
    accs[static_cast<std::size_t>(offset + c)].merge(part);
  }
}

void FourierAccumulator::merge(const FourierAccumulator& other) {
  if (other.basis() != basis()) throw InvalidArgument("FourierAccumulator: basis mismatch in merge");
  for (std::size_t k = 0; k < first_.size(); ++k) {
    first_[k].merge(other.first_[k]);
    second_[k].merge(other.second_[k]);
  }
}

FrequencyAmplitudes FourierAccumulator::amplitudes() const {
  const Index m = count(Label::first), n = count(Label::second);
  if (m < 1 || n < 1) throw InvalidArgument("FourierAccumulator: both classes need samples");
  const Index basis_count = basis();
  FrequencyAmplitudes a{Eigen::VectorXd(basis_count), Eigen::VectorXd(basis_count), Eigen::VectorXd(basis_count),
                        Eigen::VectorXd(basis_count), Eigen::VectorXd(basis_count)};
  for (Index k = 0; k < basis_count; ++k) {
    const auto& f = first_[static_cast<std::size_t>(k)];
    const auto& s = second_[static_cast<std::size_t>(k)];
    const double a1 = f.amplitude() / static_cast<double>(m);
    const double a2 = s.amplitude() / static_cast<double>(n);
    const double t1 = f.phase(), t2 = s.phase();
    a.amp_first(k) = a1;
    a.phase_first(k) = t1;
    a.amp_second(k) = a2;
    a.phase_second(k) = t2;
    a.combined_sq(k) = std::max(0.0, a1 * a1 + a2 * a2 - 2.0 * a1 * a2 * std::cos(t1 - t2));
  }
  return a;
}

EstimatePair FourierAccumulator::estimates(double k0, Method method, std::optional<std::uint64_t> seed) const {
  const FrequencyAmplitudes a = amplitudes();
  const Index basis_count = basis();
  const double scale = k0 / static_cast<double>(basis_count);
  const double combined = pairwise_sum<double>({a.combined_sq.data(), static_cast<std::size_t>(basis_count)});

  EstimatePair out;
  out.biased = {scale * combined, EstimateKind::biased, method, basis_count, seed};
  if (!std::isfinite(out.biased.value_sq)) throw NumericalError("FastMMD: non-finite estimate");

  const Index m = count(Label::first), n = count(Label::second);
  if (m >= 2 && n >= 2) {
    const Eigen::VectorXd sq1 = a.amp_first.array().square();
    const Eigen::VectorXd sq2 = a.amp_second.array().square();
    const double s1 = pairwise_sum<double>({sq1.data(), static_cast<std::size_t>(basis_count)});
    const double s2 = pairwise_sum<double>({sq2.data(), static_cast<std::size_t>(basis_count)});
    const double value = scale * (combined + s1 / static_cast<double>(m - 1) + s2 / static_cast<double>(n - 1)) -
                         unbiased_offset(m, n, k0);
    out.unbiased = MmdEstimate{value, EstimateKind::unbiased, method, basis_count, seed};
  }
  return out;
}

FourierAccumulator accumulate(const SampleSet& samples, const Projector& projector, Parallelism par) {
  FourierAccumulator acc(projector.basis);
  parallel_for(projector.groups(), par, [&](std::ptrdiff_t begin, std::ptrdiff_t end) {
    Eigen::MatrixXd block;
    for (Index g = begin; g < end; ++g) {
      for (Label label : {Label::first, Label::second}) {
        const auto& points = samples.group(label);
        for (Index start = 0; start < points.cols(); start += kSampleChunk) {
          const Index len = std::min(kSampleChunk, points.cols() - start);
          projector.project(g, points.middleCols(start, len), block);
          acc.absorb_block(label, projector.group_begin(g), block);
        }
      }
    }
  });
  return acc;
}

EstimatePair fastmmd_fourier(const SampleSet& samples, const ShiftInvariantKernel& kernel,
                             const FrequencyBank& bank, Parallelism par) {
  check_bank(samples, bank, "fastmmd_fourier");
  return accumulate(samples, dense_projector(bank), par).estimates(kernel.k0(), Method::fourier, bank.seed);
}

Eigen::VectorXd feature_vector(const FrequencyBank& bank, double k0, const Eigen::Ref<const Eigen::VectorXd>& x) {
  if (x.size() != bank.dim()) throw InvalidArgument("feature_vector: dimension mismatch");
  const Eigen::ArrayXd p = bank.omegas * x;
  Eigen::VectorXd z(2 * bank.size());
  z << p.cos(), p.sin();
  return std::sqrt(k0 / static_cast<double>(bank.size())) * z;
}

EstimatePair fastmmd_features(const SampleSet& samples, const ShiftInvariantKernel& kernel,
                              const FrequencyBank& bank) {
  check_bank(samples, bank, "fastmmd_features");
  const Index basis_count = bank.size();
  const double norm = std::sqrt(kernel.k0() / static_cast<double>(basis_count));

  auto mean_feature = [&](const Eigen::MatrixXd& points) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(2 * basis_count);
    for (Index start = 0; start < points.cols(); start += kSampleChunk) {
      const Index len = std::min(kSampleChunk, points.cols() - start);
      const Eigen::ArrayXXd p = bank.omegas * points.middleCols(start, len);  // L x len
      sum.head(basis_count) += p.cos().rowwise().sum().matrix();
      sum.tail(basis_count) += p.sin().rowwise().sum().matrix();
    }
    return Eigen::VectorXd(norm * sum / static_cast<double>(points.cols()));
  };

  const Eigen::VectorXd z1 = mean_feature(samples.group(Label::first));
  const Eigen::VectorXd z2 = mean_feature(samples.group(Label::second));
  const double biased = (z1 - z2).squaredNorm();

  EstimatePair out;
  out.biased = {biased, EstimateKind::biased, Method::fourier, basis_count, bank.seed};
  const Index m = samples.count(Label::first), n = samples.count(Label::second);
  if (m >= 2 && n >= 2) {
    const double value = biased + z1.squaredNorm() / static_cast<double>(m - 1) +
                         z2.squaredNorm() / static_cast<double>(n - 1) - unbiased_offset(m, n, kernel.k0());
    out.unbiased = MmdEstimate{value, EstimateKind::unbiased, Method::fourier, basis_count, bank.seed};
  }
  return out;
}

void write_amplitudes_csv(const FrequencyAmplitudes& amps, std::ostream& out) {
  out << "k,amp_first,phase_first,amp_second,phase_second,amp_sq\n";
  char buf[32];
  auto put = [&](double v) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out << ',';
    out.write(buf, res.ptr - buf);
  };
  for (Index k = 0; k < amps.combined_sq.size(); ++k) {
    out << k;
    put(amps.amp_first(k));
    put(amps.phase_first(k));
    put(amps.amp_second(k));
    put(amps.phase_second(k));
    put(amps.combined_sq(k));
    out << '\n';
  }
}

}  // namespace fastmmd
