#pragma once

#include "fastmmd/error.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace fastmmd {

using Eigen::Index;

/// Which of the two compared distributions a sample came from.
enum class Label : std::uint8_t { first = 1, second = 2 };

/// N labeled d-dimensional observations.
///
/// Points are stored column-wise (d x N).  Construction validates the data
/// (finite entries, both labels present) and caches each class as its own
/// contiguous d x |I_c| block.  Immutable afterwards.
class SampleSet {
 public:
  SampleSet(Eigen::MatrixXd points, std::vector<Label> labels);

  /// Concatenates two d x m and d x n blocks as class 1 then class 2.
  static SampleSet from_groups(const Eigen::MatrixXd& first, const Eigen::MatrixXd& second);

  Index size() const { return points_.cols(); }
  Index dim() const { return points_.rows(); }
  Index count(Label label) const { return group(label).cols(); }

  const Eigen::MatrixXd& points() const { return points_; }
  const std::vector<Label>& labels() const { return labels_; }
  const Eigen::MatrixXd& group(Label label) const {
    return label == Label::first ? first_ : second_;
  }
  /// Positions in `points()` of the samples carrying `label`, in order.
  const std::vector<Index>& indices(Label label) const {
    return label == Label::first ? first_index_ : second_index_;
  }

  /// Same points under a different labeling.
  SampleSet relabeled(std::vector<Label> labels) const;

 private:
  Eigen::MatrixXd points_;
  std::vector<Label> labels_;
  Eigen::MatrixXd first_, second_;
  std::vector<Index> first_index_, second_index_;
};

/// Label column selector: header name or zero-based column index.
using ColumnRef = std::variant<std::string, Index>;

/// Reads a comma-separated file with a header row.  Every non-label column is
/// a feature; labels must be 1 or 2.  Errors name the offending row/column
/// (rows are 1-based data rows, not counting the header).
SampleSet load_csv(const std::filesystem::path& path, const ColumnRef& label_column = std::string("label"));
SampleSet read_csv(std::istream& in, const ColumnRef& label_column = std::string("label"));

/// Writes `x0,...,x{d-1},label` with shortest round-trip formatting.
void write_csv(const SampleSet& samples, std::ostream& out);
void save_csv(const SampleSet& samples, const std::filesystem::path& path);

/// 5 x 5 grid of 2-D Gaussian blobs with centers {0, s, 2s, 3s, 4s}^2.
///
/// P blobs have identity covariance.  Q blobs have eigenvalues (epsilon, 1)
/// along the diagonals (1, 1)/sqrt(2) and (1, -1)/sqrt(2).
struct BlobSpec {
  double spacing = 5.0;
  double epsilon = 1.0;
  Index samples_per_set = 1000;
};

enum class BlobDistribution { p, q };

inline constexpr int kBlobGrid = 5;

/// Draws `spec.samples_per_set` points (2 x n) from P or Q.
Eigen::MatrixXd synth_blobs(const BlobSpec& spec, BlobDistribution which, std::uint64_t seed);

/// As above, also reporting the blob (0..24, row-major over the grid) of each point.
Eigen::MatrixXd synth_blobs(const BlobSpec& spec, BlobDistribution which, std::uint64_t seed,
                            std::vector<int>& blob_of_sample);

/// P samples as class 1 and Q samples as class 2, from independent sub-seeds.
SampleSet synth_blob_pair(const BlobSpec& spec, std::uint64_t seed);

/// Uniform points on [-5, 5]^2; class 1 inside the ring 1 <= r^2 <= 16,
/// class 2 outside it.  Exactly `n_per_class` of each.
SampleSet synth_ring(Index n_per_class, std::uint64_t seed);

/// Class 1 uniform on [0, 0.95]^d, class 2 uniform on [0.95, 1]^d.
SampleSet synth_hypercube(Index n_per_class, Index dim, std::uint64_t seed);

}  // namespace fastmmd
