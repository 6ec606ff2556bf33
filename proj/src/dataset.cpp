#include "sonclust/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "sonclust/rng.hpp"

namespace sonclust {

int Dataset::num_classes() const {
  if (!labels) return 0;
  int k = 0;
  for (int l : *labels) k = std::max(k, l);
  return k;
}

void Dataset::validate() const {
  if (points.rows() < 1 || points.cols() < 1)
    throw std::invalid_argument("dataset: need d >= 1 and n >= 1");
  if (!points.allFinite())
    throw std::invalid_argument("dataset: non-finite entry");
  if (labels) {
    if (static_cast<Eigen::Index>(labels->size()) != points.cols())
      throw std::invalid_argument("dataset: label length mismatch");
    const int k = num_classes();
    std::vector<int> counts(k, 0);
    for (int l : *labels) {
      if (l < 1 || l > k) throw std::invalid_argument("dataset: label out of range");
      ++counts[l - 1];
    }
    for (int c : counts)
      if (c == 0) throw std::invalid_argument("dataset: empty class");
  }
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

bool parse_double(const std::string& s, double& out) {
  try {
    size_t pos = 0;
    out = std::stod(s, &pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

}  // namespace

Dataset load_csv(const std::string& path, bool has_labels, bool columns_are_points) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open file: " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  int lineno = 0;
  int label_col = -1;
  bool first_content_line = true;
  size_t width = 0;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_line(line);

    if (first_content_line) {
      // Header detection: any non-numeric field makes this a header row.
      bool numeric = true;
      double tmp;
      for (const auto& f : fields)
        if (!parse_double(f, tmp)) { numeric = false; break; }
      if (!numeric) {
        for (size_t c = 0; c < fields.size(); ++c)
          if (fields[c] == "label") label_col = static_cast<int>(c);
        width = fields.size();
        first_content_line = false;
        continue;
      }
      width = fields.size();
      first_content_line = false;
    }

    if (fields.size() != width)
      throw CsvError("row " + std::to_string(lineno) + ": expected " +
                     std::to_string(width) + " fields, got " +
                     std::to_string(fields.size()));
    std::vector<double> row(fields.size());
    for (size_t c = 0; c < fields.size(); ++c) {
      double v;
      if (!parse_double(fields[c], v))
        throw CsvError("row " + std::to_string(lineno) + ", column " +
                       std::to_string(c + 1) + ": cannot parse '" + fields[c] + "'");
      if (!std::isfinite(v))
        throw CsvError("row " + std::to_string(lineno) + ", column " +
                       std::to_string(c + 1) + ": non-finite value");
      row[c] = v;
    }
    rows.push_back(std::move(row));
  }

  if (rows.empty()) throw CsvError("no rows in " + path);

  if (has_labels && label_col < 0) label_col = static_cast<int>(width) - 1;
  if (!has_labels) label_col = -1;

  Dataset data;
  data.name = path;
  const size_t ncols = rows[0].size();
  if (columns_are_points) {
    if (label_col >= 0)
      throw CsvError("labels not supported with column-major CSV input");
    data.points.resize(static_cast<Eigen::Index>(rows.size()),
                       static_cast<Eigen::Index>(ncols));
    for (size_t r = 0; r < rows.size(); ++r)
      for (size_t c = 0; c < ncols; ++c)
        data.points(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  } else {
    const size_t d = ncols - (label_col >= 0 ? 1 : 0);
    if (d == 0) throw CsvError("no feature columns");
    data.points.resize(static_cast<Eigen::Index>(d),
                       static_cast<Eigen::Index>(rows.size()));
    std::vector<int> labels;
    for (size_t r = 0; r < rows.size(); ++r) {
      size_t fc = 0;
      for (size_t c = 0; c < ncols; ++c) {
        if (static_cast<int>(c) == label_col) continue;
        data.points(static_cast<Eigen::Index>(fc++), static_cast<Eigen::Index>(r)) = rows[r][c];
      }
      if (label_col >= 0) labels.push_back(static_cast<int>(std::lround(rows[r][static_cast<size_t>(label_col)])));
    }
    if (label_col >= 0) {
      // Remap arbitrary ids onto {1..K} preserving order of first appearance.
      std::vector<int> remap;
      for (int& l : labels) {
        auto it = std::find(remap.begin(), remap.end(), l);
        if (it == remap.end()) {
          remap.push_back(l);
          l = static_cast<int>(remap.size());
        } else {
          l = static_cast<int>(it - remap.begin()) + 1;
        }
      }
      data.labels = std::move(labels);
    }
  }
  data.validate();
  return data;
}

void save_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw CsvError("cannot write file: " + path);
  out.precision(17);
  for (Eigen::Index f = 0; f < data.dim(); ++f)
    out << "x" << f + 1 << (f + 1 < data.dim() || data.labels ? "," : "");
  if (data.labels) out << "label";
  out << "\n";
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    for (Eigen::Index f = 0; f < data.dim(); ++f)
      out << data.points(f, i) << (f + 1 < data.dim() || data.labels ? "," : "");
    if (data.labels) out << (*data.labels)[static_cast<size_t>(i)];
    out << "\n";
  }
}

Dataset scale_unit_box(const Dataset& data) {
  Dataset out = data;
  for (Eigen::Index f = 0; f < data.dim(); ++f) {
    const double lo = data.points.row(f).minCoeff();
    const double hi = data.points.row(f).maxCoeff();
    if (hi > lo)
      out.points.row(f) = (data.points.row(f).array() - lo) / (hi - lo);
    else
      out.points.row(f).setConstant(0.5);
  }
  return out;
}

namespace {

Dataset make_half_moons(const SyntheticSpec& spec) {
  Rng rng(spec.seed);
  const int n = spec.n;
  const int n1 = n / 2, n2 = n - n1;
  Dataset data;
  data.name = "two_half_moons";
  data.points.resize(2, n);
  std::vector<int> labels(static_cast<size_t>(n));
  const double pi = 3.14159265358979323846;
  // Two unit semicircles; the second is mirrored and offset by (1, -0.5).
  for (int i = 0; i < n1; ++i) {
    const double t = pi * static_cast<double>(i) / std::max(1, n1 - 1);
    data.points(0, i) = std::cos(t) + spec.noise * rng.normal();
    data.points(1, i) = std::sin(t) + spec.noise * rng.normal();
    labels[static_cast<size_t>(i)] = 1;
  }
  for (int i = 0; i < n2; ++i) {
    const double t = pi * static_cast<double>(i) / std::max(1, n2 - 1);
    data.points(0, n1 + i) = 1.0 - std::cos(t) + spec.noise * rng.normal();
    data.points(1, n1 + i) = 0.5 - std::sin(t) + spec.noise * rng.normal();
    labels[static_cast<size_t>(n1 + i)] = 2;
  }
  data.labels = std::move(labels);
  return data;
}

Dataset make_blobs(const SyntheticSpec& spec) {
  Rng rng(spec.seed);
  Eigen::MatrixXd centers = spec.centers;
  std::vector<int> sizes = spec.sizes;
  if (centers.size() == 0) {
    centers.resize(2, spec.blob_count);
    for (Eigen::Index k = 0; k < centers.cols(); ++k)
      for (Eigen::Index f = 0; f < 2; ++f)
        centers(f, k) = rng.uniform(-spec.blob_box, spec.blob_box);
  }
  const int K = static_cast<int>(centers.cols());
  if (sizes.empty()) {
    sizes.assign(static_cast<size_t>(K), spec.n / K);
    for (int i = 0; i < spec.n % K; ++i) ++sizes[static_cast<size_t>(i)];
  }
  int n = 0;
  for (int s : sizes) n += s;

  Dataset data;
  data.name = spec.kind == SyntheticKind::unbalanced_gaussian ? "unbalanced_gaussian"
                                                              : "gaussian_blobs";
  data.points.resize(centers.rows(), n);
  std::vector<int> labels(static_cast<size_t>(n));
  int i = 0;
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < sizes[static_cast<size_t>(k)]; ++j, ++i) {
      for (Eigen::Index f = 0; f < centers.rows(); ++f)
        data.points(f, i) = centers(f, k) + spec.blob_stddev * rng.normal();
      labels[static_cast<size_t>(i)] = k + 1;
    }
  }
  data.labels = std::move(labels);
  return data;
}

Dataset make_shells(const SyntheticSpec& spec) {
  Rng rng(spec.seed);
  const int n = spec.n;
  const int n1 = n / 2, n2 = n - n1;
  Dataset data;
  data.name = "semi_spherical_shells";
  data.points.resize(3, n);
  std::vector<int> labels(static_cast<size_t>(n));
  auto sample_shell = [&](double r_lo, double r_hi, Eigen::Index col) {
    // Uniform over the hemispherical shell volume: direction uniform on the
    // upper hemisphere, radius with density proportional to r^2.
    double x, y, z, s;
    do {
      x = rng.normal();
      y = rng.normal();
      z = rng.normal();
      s = std::sqrt(x * x + y * y + z * z);
    } while (s < 1e-12);
    z = std::abs(z);
    const double u = rng.uniform();
    const double r3 = r_lo * r_lo * r_lo + u * (r_hi * r_hi * r_hi - r_lo * r_lo * r_lo);
    const double r = std::cbrt(r3);
    data.points(0, col) = r * x / s;
    data.points(1, col) = r * y / s;
    data.points(2, col) = r * z / s;
  };
  for (int i = 0; i < n1; ++i) {
    sample_shell(spec.inner_lo, spec.inner_hi, i);
    labels[static_cast<size_t>(i)] = 1;
  }
  for (int i = 0; i < n2; ++i) {
    sample_shell(spec.outer_lo, spec.outer_hi, n1 + i);
    labels[static_cast<size_t>(n1 + i)] = 2;
  }
  data.labels = std::move(labels);
  return data;
}

}  // namespace

Dataset generate(const SyntheticSpec& spec) {
  if (spec.n < 1) throw std::invalid_argument("generate: n must be positive");
  Dataset data;
  switch (spec.kind) {
    case SyntheticKind::two_half_moons:
      if (spec.n < 2) throw std::invalid_argument("generate: half-moons need n >= 2");
      data = make_half_moons(spec);
      break;
    case SyntheticKind::gaussian_blobs:
    case SyntheticKind::unbalanced_gaussian:
      data = make_blobs(spec);
      break;
    case SyntheticKind::semi_spherical_shells:
      if (spec.n < 2) throw std::invalid_argument("generate: shells need n >= 2");
      if (!(spec.inner_lo < spec.inner_hi && spec.inner_hi < spec.outer_lo &&
            spec.outer_lo < spec.outer_hi))
        throw std::invalid_argument("generate: shell radii must be ordered");
      data = make_shells(spec);
      break;
  }
  data.validate();
  return data;
}

SyntheticSpec unbalanced_gaussian_spec(int n, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::unbalanced_gaussian;
  spec.seed = seed;
  spec.centers.resize(2, 8);
  spec.centers << -6, -6, -6, 4, 5, 6, 5, 6,
                   0,  5, 10, 2, 4, 6, 8, 10;
  const int base[8] = {2000, 2000, 2000, 100, 100, 100, 100, 100};
  spec.sizes.resize(8);
  int total = 0;
  for (int k = 0; k < 8; ++k) {
    spec.sizes[static_cast<size_t>(k)] = std::max(1, base[k] * n / 6500);
    total += spec.sizes[static_cast<size_t>(k)];
  }
  spec.sizes[0] += n - total;
  spec.blob_stddev = 0.6;
  spec.n = n;
  return spec;
}

SyntheticSpec five_blob_spec(int n, std::uint64_t seed) {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::gaussian_blobs;
  spec.seed = seed;
  spec.n = n;
  spec.centers.resize(2, 5);
  const double pi = 3.14159265358979323846;
  for (int k = 0; k < 5; ++k) {
    const double t = 2.0 * pi * k / 5.0;
    spec.centers(0, k) = 1.4 * std::cos(t);
    spec.centers(1, k) = 1.4 * std::sin(t);
  }
  spec.blob_stddev = 0.25;
  return spec;
}

}  // namespace sonclust
