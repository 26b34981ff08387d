#include "fastmmd/circular.hpp"

#include "fastmmd/summation.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

namespace fastmmd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

CircularSample wrap_group(const Eigen::Ref<const Eigen::VectorXd>& omega, const Eigen::MatrixXd& points) {
  const Eigen::VectorXd proj = points.transpose() * omega;
  CircularSample c;
  c.angles.resize(static_cast<std::size_t>(proj.size()));
  c.weights.assign(static_cast<std::size_t>(proj.size()), 1.0 / static_cast<double>(proj.size()));
  for (Index i = 0; i < proj.size(); ++i) c.angles[static_cast<std::size_t>(i)] = wrap_angle(proj(i));
  return c;
}

}  // namespace

double wrap_angle(double value) {
  double r = std::fmod(value, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

std::pair<CircularSample, CircularSample> wrap(const Eigen::Ref<const Eigen::VectorXd>& omega,
                                               const SampleSet& samples) {
  if (omega.size() != samples.dim()) throw InvalidArgument("wrap: dimension mismatch");
  return {wrap_group(omega, samples.group(Label::first)), wrap_group(omega, samples.group(Label::second))};
}

namespace {

// Representative in (-pi, pi].
double to_half_open(double angle) {
  if (angle > std::numbers::pi) angle -= 2.0 * std::numbers::pi;
  if (angle <= -std::numbers::pi) angle += 2.0 * std::numbers::pi;
  return angle;
}

}  // namespace

double margin_objective(const CircularSample& first, const CircularSample& second, double y) {
  double f = 0.0;
  for (std::size_t i = 0; i < first.angles.size(); ++i) f += first.weights[i] * std::sin(y - first.angles[i]);
  for (std::size_t i = 0; i < second.angles.size(); ++i) f -= second.weights[i] * std::sin(y - second.angles[i]);
  return f;
}

DiscrepancyResult circular_discrepancy(const CircularSample& first, const CircularSample& second) {
  if (first.angles.size() != first.weights.size() || second.angles.size() != second.weights.size())
    throw InvalidArgument("circular_discrepancy: angles and weights differ in length");
  std::vector<double> c, s;
  c.reserve(first.angles.size() + second.angles.size());
  s.reserve(c.capacity());
  for (std::size_t i = 0; i < first.angles.size(); ++i) {
    c.push_back(first.weights[i] * std::cos(first.angles[i]));
    s.push_back(first.weights[i] * std::sin(first.angles[i]));
  }
  for (std::size_t i = 0; i < second.angles.size(); ++i) {
    c.push_back(-second.weights[i] * std::cos(second.angles[i]));
    s.push_back(-second.weights[i] * std::sin(second.angles[i]));
  }
  const double cos_sum = pairwise_sum<double>(c);
  const double sin_sum = pairwise_sum<double>(s);
  DiscrepancyResult r;
  r.eta = std::sqrt(cos_sum * cos_sum + sin_sum * sin_sum);
  // Below rounding level of the total mass the phase carries no information.
  double mass = 0.0;
  for (double w : first.weights) mass += std::abs(w);
  for (double w : second.weights) mass += std::abs(w);
  r.degenerate = r.eta <= 64.0 * std::numeric_limits<double>::epsilon() * mass;
  if (r.degenerate) return r;
  r.phase = to_half_open(std::atan2(sin_sum, cos_sum));
  // sum_i a_i sin(y - x_i) = eta sin(y - phase) peaks a quarter turn past the phase.
  r.decision_angle = to_half_open(r.phase + std::numbers::pi / 2.0);
  return r;
}

MmdEstimate ensemble_discrepancy(const SampleSet& samples, const ShiftInvariantKernel& kernel,
                                 const FrequencyBank& bank) {
  if (bank.size() < 1) throw InvalidArgument("ensemble_discrepancy: empty frequency bank");
  if (bank.dim() != samples.dim()) throw InvalidArgument("ensemble_discrepancy: bank dimension mismatch");
  std::vector<double> eta_sq(static_cast<std::size_t>(bank.size()));
  for (Index k = 0; k < bank.size(); ++k) {
    const auto [c1, c2] = wrap(bank.omegas.row(k).transpose(), samples);
    const double eta = circular_discrepancy(c1, c2).eta;
    eta_sq[static_cast<std::size_t>(k)] = eta * eta;
  }
  const double value = kernel.k0() / static_cast<double>(bank.size()) * pairwise_sum<double>(eta_sq);
  return {value, EstimateKind::biased, Method::circular, bank.size(), bank.seed};
}

void write_circle_csv(const SampleSet& samples, const FrequencyBank& bank, std::ostream& out) {
  if (bank.dim() != samples.dim()) throw InvalidArgument("write_circle_csv: bank dimension mismatch");
  out << "k,label,angle,weight,eta,phase,decision_angle\n";
  char buf[32];
  auto num = [&](double v) {
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.write(buf, res.ptr - buf);
  };
  for (Index k = 0; k < bank.size(); ++k) {
    const auto [c1, c2] = wrap(bank.omegas.row(k).transpose(), samples);
    const DiscrepancyResult r = circular_discrepancy(c1, c2);
    for (int label = 1; label <= 2; ++label) {
      const CircularSample& c = label == 1 ? c1 : c2;
      for (std::size_t i = 0; i < c.angles.size(); ++i) {
        out << k << ',' << label << ',';
        num(c.angles[i]);
        out << ',';
        num(c.weights[i]);
        out << ',';
        num(r.eta);
        out << ',';
        num(r.phase);
        out << ',';
        num(r.decision_angle);
        out << '\n';
      }
    }
  }
}

}  // namespace fastmmd
