#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sonclust {

// A collection of n observations in R^d, stored column-major: column i is
// observation a_i. Ground-truth labels, when present, take values in {1..K}
// with every class nonempty.
struct Dataset {
  Eigen::MatrixXd points;            // d x n
  std::optional<std::vector<int>> labels;
  std::string name;

  Eigen::Index dim() const { return points.rows(); }
  Eigen::Index size() const { return points.cols(); }
  int num_classes() const;

  // Throws std::invalid_argument if any invariant is broken.
  void validate() const;
};

enum class SyntheticKind {
  two_half_moons,
  gaussian_blobs,
  unbalanced_gaussian,
  semi_spherical_shells,
};

struct SyntheticSpec {
  SyntheticKind kind = SyntheticKind::two_half_moons;
  int n = 1000;
  std::uint64_t seed = 0;

  // two_half_moons
  double noise = 0.1;

  // gaussian_blobs: explicit centers (d x K) with per-cluster stddev and
  // sizes; when centers is empty, `blob_count` centers are drawn uniformly
  // in [-blob_box, blob_box]^2 and sizes are split evenly.
  Eigen::MatrixXd centers;
  std::vector<int> sizes;
  double blob_stddev = 0.3;
  int blob_count = 5;
  double blob_box = 3.0;

  // semi_spherical_shells: two concentric hemispherical shells in R^3.
  double inner_lo = 1.0, inner_hi = 1.4;
  double outer_lo = 1.6, outer_hi = 2.0;
};

// CSV parse failure with a row/column location.
struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Reads a numeric CSV. Rows are observations by default; set
// `columns_are_points` when the file is already in d x n orientation. If
// `has_labels`, the column named "label" (or the last column when there is
// no header) carries integer class ids.
Dataset load_csv(const std::string& path, bool has_labels = false,
                 bool columns_are_points = false);

void save_csv(const Dataset& data, const std::string& path);

// Per-feature affine map onto [0,1]; a constant feature maps to 0.5.
Dataset scale_unit_box(const Dataset& data);

// Seeded synthetic generators; same spec always yields the same matrix.
Dataset generate(const SyntheticSpec& spec);

// The 8-blob stand-in for the unbalanced Gaussian benchmark:
// sizes 2000/2000/2000/100/100/100/100/100 scaled by n/6500.
SyntheticSpec unbalanced_gaussian_spec(int n, std::uint64_t seed);

// Well-separated 5-cluster instance used by the recovery experiments.
SyntheticSpec five_blob_spec(int n, std::uint64_t seed);

}  // namespace sonclust
