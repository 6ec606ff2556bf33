#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sonclust/problem.hpp"
#include "sonclust/ssnal.hpp"

namespace sonclust {

// Summed edge weights between points and clusters (treating the weights as
// symmetric with w_ii = 0):
//   point_cluster(i, beta)      = sum_{j in I_beta} w_ij
//   cluster_cluster(alpha,beta) = sum_{i in I_alpha} sum_{j in I_beta} w_ij
struct CouplingSums {
  Eigen::MatrixXd point_cluster;    // n x K
  Eigen::MatrixXd cluster_cluster;  // K x K, symmetric
};

CouplingSums cluster_couplings(const WeightGraph& graph,
                               const std::vector<int>& labels);

// Perfect-recovery interval for the weighted model: gamma_min is the largest
// within-cluster ratio ||a_i - a_j||_q / (n_a w_ij - mu_ij), gamma_max the
// smallest centroid-separation ratio, coarsening_upper the part-2 bound.
struct RecoveryBounds {
  double gamma_min = 0.0;
  double gamma_max = 0.0;
  double coarsening_upper = 0.0;
  bool feasible = false;

  // Binding witnesses (first in scan order on ties). Cluster witnesses are
  // 1-based label values; point witnesses are 0-based column indices.
  int min_cluster = -1, min_i = -1, min_j = -1;
  int max_alpha = -1, max_beta = -1;
};

// Raised when a within-cluster pair violates w_ij > 0 or n_a w_ij > mu_ij.
// `cluster` is the 1-based label value; i, j are 0-based point indices.
struct RecoveryAssumptionError : std::runtime_error {
  int cluster, i, j;
  RecoveryAssumptionError(const std::string& msg, int cluster_, int i_, int j_)
      : std::runtime_error(msg), cluster(cluster_), i(i_), j(j_) {}
};

RecoveryBounds recovery_bounds(const Dataset& data, const std::vector<int>& labels,
                               const WeightGraph& graph, NormKind q);

// The uniform-weight (w_ij = 1 for all pairs) specialization, coded from its
// own closed forms: gamma_min = max_a D_q(V_a)/n_a,
// gamma_max = min ||a^a - a^b||_q / (2n - n_a - n_b),
// coarsening = max ||c - a^a||_q / (n - n_a).
RecoveryBounds uniform_weight_bounds(const Dataset& data,
                                 const std::vector<int>& labels, NormKind q);

// q-norm diameter max ||x - y||_q over column pairs.
double diameter_q(const Eigen::MatrixXd& points, NormKind q);

// Column means per class, d x K.
Eigen::MatrixXd class_centroids(const Dataset& data, const std::vector<int>& labels);

// Solves the K-point centroid problem (fidelity weights n_a, edge weights
// w^{alpha,beta}); ssnal for p = 2, the ADMM path otherwise.
Eigen::MatrixXd solve_centroid_problem(const Dataset& data,
                                       const std::vector<int>& labels,
                                       const WeightGraph& graph, double gamma,
                                       NormKind norm, double kkt_tol = 1e-10);

struct RecoveryReport {
  double distance = 0.0;  // ||X* - Xhat||_F
  int K_found = 0;
  bool perfect = false;
  KktResiduals residuals;
};

// Solves the full model and the centroid problem, broadcasts the centroid
// solution to Xhat, and checks whether the extracted clusters equal the
// ground-truth partition.
RecoveryReport verify_recovery(const Dataset& data, const std::vector<int>& labels,
                               const WeightGraph& graph, double gamma,
                               NormKind norm, double kkt_tol);

}  // namespace sonclust
