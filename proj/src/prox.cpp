#include "sonclust/prox.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace sonclust {

NormKind conjugate_norm(NormKind kind) {
  switch (kind) {
    case NormKind::one: return NormKind::inf;
    case NormKind::two: return NormKind::two;
    case NormKind::inf: return NormKind::one;
  }
  return NormKind::two;
}

double norm_value(NormKind kind, const Eigen::VectorXd& x) {
  switch (kind) {
    case NormKind::one: return x.lpNorm<1>();
    case NormKind::two: return x.norm();
    case NormKind::inf: return x.lpNorm<Eigen::Infinity>();
  }
  return 0.0;
}

Eigen::VectorXd project_l1_ball(double radius, const Eigen::VectorXd& x) {
  if (radius <= 0.0) throw std::invalid_argument("project_l1_ball: radius must be positive");
  if (x.lpNorm<1>() <= radius) return x;

  // Find the threshold theta with sum_l [|x_l| - theta]_+ = radius.
  std::vector<double> mags(static_cast<size_t>(x.size()));
  for (Eigen::Index l = 0; l < x.size(); ++l) mags[static_cast<size_t>(l)] = std::abs(x[l]);
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (size_t r = 0; r < mags.size(); ++r) {
    cumsum += mags[r];
    const double t = (cumsum - radius) / static_cast<double>(r + 1);
    if (r + 1 == mags.size() || mags[r + 1] <= t) {
      theta = t;
      break;
    }
  }
  Eigen::VectorXd out(x.size());
  for (Eigen::Index l = 0; l < x.size(); ++l) {
    const double m = std::abs(x[l]) - theta;
    out[l] = m > 0.0 ? (x[l] > 0.0 ? m : -m) : 0.0;
  }
  return out;
}

Eigen::VectorXd prox_norm(NormKind kind, double t, const Eigen::VectorXd& x) {
  if (t <= 0.0) throw std::invalid_argument("prox_norm: t must be positive");
  switch (kind) {
    case NormKind::one: {
      Eigen::VectorXd out(x.size());
      for (Eigen::Index l = 0; l < x.size(); ++l) {
        const double m = std::abs(x[l]) - t;
        out[l] = m > 0.0 ? (x[l] > 0.0 ? m : -m) : 0.0;
      }
      return out;
    }
    case NormKind::two: {
      const double nx = x.norm();
      if (nx <= t) return Eigen::VectorXd::Zero(x.size());
      return (1.0 - t / nx) * x;
    }
    case NormKind::inf:
      return x - project_l1_ball(t, x);
  }
  return x;
}

Eigen::VectorXd prox_conjugate(NormKind kind, double t, const Eigen::VectorXd& x) {
  return x - prox_norm(kind, t, x);
}

Eigen::MatrixXd prox_block(NormKind kind, const Eigen::MatrixXd& U,
                           const Eigen::VectorXd& per_column_thresholds) {
  if (U.cols() != per_column_thresholds.size())
    throw std::invalid_argument("prox_block: shape mismatch");
  Eigen::MatrixXd out(U.rows(), U.cols());
  for (Eigen::Index l = 0; l < U.cols(); ++l)
    out.col(l) = prox_norm(kind, per_column_thresholds[l], U.col(l));
  return out;
}

}  // namespace sonclust
