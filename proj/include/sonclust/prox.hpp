#pragma once

#include <Eigen/Dense>

namespace sonclust {

// Regularizer norm h(v) = ||v||_p. The conjugate index q satisfies
// 1/p + 1/q = 1, so q = inf, 2, 1 for p = 1, 2, inf.
enum class NormKind { one, two, inf };

NormKind conjugate_norm(NormKind kind);

double norm_value(NormKind kind, const Eigen::VectorXd& x);

// Euclidean projection of x onto {y : ||y||_1 <= radius}; sort-based exact
// threshold search.
Eigen::VectorXd project_l1_ball(double radius, const Eigen::VectorXd& x);

// Prox_{t h}(x) for h = ||.||_p:
//   p = 1   elementwise soft-threshold
//   p = 2   blockwise soft-threshold
//   p = inf x - projection of x onto the l1 ball of radius t
Eigen::VectorXd prox_norm(NormKind kind, double t, const Eigen::VectorXd& x);

// x - prox_norm(kind, t, x); by the Moreau identity this is the projection
// of x onto the dual-norm ball {||.||_q <= t}.
Eigen::VectorXd prox_conjugate(NormKind kind, double t, const Eigen::VectorXd& x);

// Columnwise prox of the separable sum: column l gets threshold t_l.
Eigen::MatrixXd prox_block(NormKind kind, const Eigen::MatrixXd& U,
                           const Eigen::VectorXd& per_column_thresholds);

}  // namespace sonclust
