#include "fastmmd/dataset.hpp"

#include "fastmmd/random.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string_view>

namespace fastmmd {

namespace {

Eigen::MatrixXd gather(const Eigen::MatrixXd& points, const std::vector<Index>& columns) {
  Eigen::MatrixXd out(points.rows(), static_cast<Index>(columns.size()));
  for (Index j = 0; j < out.cols(); ++j) out.col(j) = points.col(columns[static_cast<std::size_t>(j)]);
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool parse_double(std::string_view text, double& value) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  return ec == std::errc() && ptr == end && !text.empty();
}

}  // namespace

SampleSet::SampleSet(Eigen::MatrixXd points, std::vector<Label> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
  if (static_cast<Index>(labels_.size()) != points_.cols())
    throw InvalidArgument("SampleSet: " + std::to_string(labels_.size()) + " labels for " +
                          std::to_string(points_.cols()) + " points");
  if (points_.rows() < 1) throw InvalidArgument("SampleSet: dimension must be at least 1");
  if (!points_.allFinite()) throw InvalidArgument("SampleSet: non-finite feature value");
  for (Index i = 0; i < points_.cols(); ++i) {
    switch (labels_[static_cast<std::size_t>(i)]) {
      case Label::first: first_index_.push_back(i); break;
      case Label::second: second_index_.push_back(i); break;
      default: throw InvalidArgument("SampleSet: label outside {1, 2} at sample " + std::to_string(i));
    }
  }
  if (first_index_.empty() || second_index_.empty())
    throw InvalidArgument("SampleSet: each label needs at least one sample");
  first_ = gather(points_, first_index_);
  second_ = gather(points_, second_index_);
}

SampleSet SampleSet::from_groups(const Eigen::MatrixXd& first, const Eigen::MatrixXd& second) {
  if (first.rows() != second.rows()) throw InvalidArgument("SampleSet: groups differ in dimension");
  Eigen::MatrixXd points(first.rows(), first.cols() + second.cols());
  points << first, second;
  std::vector<Label> labels(static_cast<std::size_t>(first.cols()), Label::first);
  labels.resize(static_cast<std::size_t>(points.cols()), Label::second);
  return SampleSet(std::move(points), std::move(labels));
}

SampleSet SampleSet::relabeled(std::vector<Label> labels) const {
  return SampleSet(points_, std::move(labels));
}

SampleSet read_csv(std::istream& in, const ColumnRef& label_column) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("csv: empty input (missing header row)");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  std::vector<std::string> header;  // owned: `line` is reused for the data rows
  for (const auto field : split_fields(line)) header.emplace_back(field);
  const auto columns = static_cast<Index>(header.size());

  Index label_at = -1;
  if (const auto* name = std::get_if<std::string>(&label_column)) {
    for (Index c = 0; c < columns; ++c)
      if (header[static_cast<std::size_t>(c)] == *name) label_at = c;
    if (label_at < 0) throw ParseError("csv: no column named '" + *name + "'");
  } else {
    label_at = std::get<Index>(label_column);
    if (label_at < 0 || label_at >= columns)
      throw ParseError("csv: label column index " + std::to_string(label_at) + " out of range");
  }
  if (columns < 2) throw ParseError("csv: need at least one feature column besides the label");

  std::vector<double> values;
  std::vector<Label> labels;
  Index row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto fields = split_fields(line);
    if (static_cast<Index>(fields.size()) != columns)
      throw ParseError("csv: row " + std::to_string(row) + " has " + std::to_string(fields.size()) +
                       " fields, expected " + std::to_string(columns));
    for (Index c = 0; c < columns; ++c) {
      const auto field = fields[static_cast<std::size_t>(c)];
      double v = 0.0;
      const bool ok = parse_double(field, v);
      if (c == label_at) {
        if (!ok || (v != 1.0 && v != 2.0))
          throw ParseError("csv: row " + std::to_string(row) + ": label '" + std::string(field) +
                           "' is not 1 or 2");
        labels.push_back(v == 1.0 ? Label::first : Label::second);
      } else {
        if (!ok || !std::isfinite(v))
          throw ParseError("csv: row " + std::to_string(row) + ", column '" +
                           header[static_cast<std::size_t>(c)] + "': '" + std::string(field) +
                           "' is not a finite number");
        values.push_back(v);
      }
    }
  }
  if (row == 0) throw ParseError("csv: no data rows");
  const Index dim = columns - 1;
  Eigen::MatrixXd points = Eigen::Map<Eigen::MatrixXd>(values.data(), dim, row);
  try {
    return SampleSet(std::move(points), std::move(labels));
  } catch (const InvalidArgument& e) {
    throw ParseError(std::string("csv: ") + e.what());
  }
}

SampleSet load_csv(const std::filesystem::path& path, const ColumnRef& label_column) {
  std::ifstream in(path);
  if (!in) throw ParseError("csv: cannot open '" + path.string() + "'");
  return read_csv(in, label_column);
}

void write_csv(const SampleSet& samples, std::ostream& out) {
  for (Index j = 0; j < samples.dim(); ++j) out << 'x' << j << ',';
  out << "label\n";
  char buf[32];
  for (Index i = 0; i < samples.size(); ++i) {
    for (Index j = 0; j < samples.dim(); ++j) {
      const auto res = std::to_chars(buf, buf + sizeof buf, samples.points()(j, i));
      out.write(buf, res.ptr - buf);
      out << ',';
    }
    out << static_cast<int>(samples.labels()[static_cast<std::size_t>(i)]) << '\n';
  }
}

void save_csv(const SampleSet& samples, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("csv: cannot write '" + path.string() + "'");
  write_csv(samples, out);
}

Eigen::MatrixXd synth_blobs(const BlobSpec& spec, BlobDistribution which, std::uint64_t seed,
                            std::vector<int>& blob_of_sample) {
  if (!(spec.epsilon >= 1.0)) throw InvalidArgument("synth_blobs: epsilon must be >= 1");
  if (spec.samples_per_set < 1) throw InvalidArgument("synth_blobs: samples_per_set must be >= 1");

  const double major = which == BlobDistribution::q ? std::sqrt(spec.epsilon) : 1.0;
  const double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  CounterRng rng(seed);
  Eigen::MatrixXd out(2, spec.samples_per_set);
  blob_of_sample.resize(static_cast<std::size_t>(spec.samples_per_set));
  for (Index i = 0; i < out.cols(); ++i) {
    const int blob = static_cast<int>(rng.below(kBlobGrid * kBlobGrid));
    blob_of_sample[static_cast<std::size_t>(i)] = blob;
    const double a = major * rng.normal();
    const double b = rng.normal();
    out(0, i) = spec.spacing * (blob / kBlobGrid) + inv_sqrt2 * (a + b);
    out(1, i) = spec.spacing * (blob % kBlobGrid) + inv_sqrt2 * (a - b);
  }
  return out;
}

Eigen::MatrixXd synth_blobs(const BlobSpec& spec, BlobDistribution which, std::uint64_t seed) {
  std::vector<int> unused;
  return synth_blobs(spec, which, seed, unused);
}

SampleSet synth_blob_pair(const BlobSpec& spec, std::uint64_t seed) {
  return SampleSet::from_groups(synth_blobs(spec, BlobDistribution::p, derive_seed(seed, 1)),
                                synth_blobs(spec, BlobDistribution::q, derive_seed(seed, 2)));
}

SampleSet synth_ring(Index n_per_class, std::uint64_t seed) {
  if (n_per_class < 1) throw InvalidArgument("synth_ring: n_per_class must be >= 1");
  constexpr long kMaxAttemptsPerPoint = 1'000'000;
  CounterRng rng(seed);
  Eigen::MatrixXd inside(2, n_per_class), outside(2, n_per_class);
  Index n_in = 0, n_out = 0;
  long since_accept = 0;
  while (n_in < n_per_class || n_out < n_per_class) {
    if (++since_accept > kMaxAttemptsPerPoint)
      throw NumericalError("synth_ring: rejection sampling exceeded its attempt cap");
    const double x = rng.uniform(-5.0, 5.0);
    const double y = rng.uniform(-5.0, 5.0);
    const double r2 = x * x + y * y;
    if (r2 >= 1.0 && r2 <= 16.0) {
      if (n_in < n_per_class) {
        inside.col(n_in++) << x, y;
        since_accept = 0;
      }
    } else if (n_out < n_per_class) {
      outside.col(n_out++) << x, y;
      since_accept = 0;
    }
  }
  return SampleSet::from_groups(inside, outside);
}

SampleSet synth_hypercube(Index n_per_class, Index dim, std::uint64_t seed) {
  if (n_per_class < 1) throw InvalidArgument("synth_hypercube: n_per_class must be >= 1");
  if (dim < 1) throw InvalidArgument("synth_hypercube: dim must be >= 1");
  CounterRng rng(seed);
  Eigen::MatrixXd low(dim, n_per_class), high(dim, n_per_class);
  for (Index i = 0; i < n_per_class; ++i)
    for (Index j = 0; j < dim; ++j) low(j, i) = rng.uniform(0.0, 0.95);
  for (Index i = 0; i < n_per_class; ++i)
    for (Index j = 0; j < dim; ++j) high(j, i) = rng.uniform(0.95, 1.0);
  return SampleSet::from_groups(low, high);
}

}  // namespace fastmmd
