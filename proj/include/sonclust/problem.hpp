#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "sonclust/dataset.hpp"
#include "sonclust/graph.hpp"
#include "sonclust/prox.hpp"

namespace sonclust {

// One instance of the weighted sum-of-norms clustering model
//   min_X  1/2 sum_i f_i ||x_i - a_i||^2 + gamma sum_{(i,j) in E} w_ij ||x_i - x_j||_p.
// The per-point fidelity weights f_i default to 1; the centroid problem of
// the theory module sets them to the cluster sizes.
struct ClusterProblem {
  Dataset data;
  WeightGraph graph;
  double gamma = 1.0;
  NormKind norm = NormKind::two;
  Eigen::VectorXd fidelity;  // empty means all ones

  Eigen::Index dim() const { return data.dim(); }
  Eigen::Index size() const { return data.size(); }

  bool has_fidelity() const { return fidelity.size() > 0; }
  double fidelity_at(Eigen::Index i) const {
    return has_fidelity() ? fidelity[i] : 1.0;
  }

  // Per-edge prox thresholds scale * gamma * w_ij.
  Eigen::VectorXd edge_thresholds(double scale = 1.0) const {
    return (scale * gamma) * graph.weights();
  }

  void validate() const;
};

struct PrimalDualState {
  Eigen::MatrixXd X;  // d x n centroids
  Eigen::MatrixXd U;  // d x |E| edge differences
  Eigen::MatrixXd Z;  // d x |E| multipliers
  Eigen::MatrixXd V;  // d x n dual variable, V = -diag(f)(X - A) at optimality
};

PrimalDualState initial_state(const ClusterProblem& prob);

struct KktResiduals {
  double eta_P = 0.0;
  double eta_D = 0.0;
  double eta = 0.0;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double gap = 0.0;

  double max_residual() const { return std::max(eta_P, std::max(eta_D, eta)); }
};

struct ClusterAssignment {
  std::vector<int> labels;    // values in {1..K}
  int num_clusters = 0;
  Eigen::MatrixXd centroids;  // d x K
  std::vector<int> sizes;
};

double primal_objective(const ClusterProblem& prob, const Eigen::MatrixXd& X);

// <A, B*(Z)> - 1/2 sum_i ||(B*(Z))_i||^2 / f_i. Infeasibility of Z is not
// enforced here; it is measured by eta_D.
double dual_objective(const ClusterProblem& prob, const Eigen::MatrixXd& Z);

KktResiduals kkt_residuals(const ClusterProblem& prob, const PrimalDualState& state);

// Connected components of the subgraph of E whose edges satisfy
// ||x_i - x_j|| <= tol * max(1, ||x_i||, ||x_j||). Labels are canonicalized
// by smallest member index; centroid k is the mean of member columns of X.
ClusterAssignment extract_clusters(const ClusterProblem& prob,
                                   const Eigen::MatrixXd& X, double tol = 1e-5);

// Fraction of the n(n-1)/2 point pairs on which the two partitions agree.
double rand_index(const std::vector<int>& a, const std::vector<int>& b);

// Lloyd iterations from k-means++ seeding; best of 10 restarts by objective.
ClusterAssignment kmeans_lloyd(const Dataset& data, int K, std::uint64_t seed,
                               int restarts = 10, int max_iters = 300);

// True iff the two label vectors induce the same partition.
bool same_partition(const std::vector<int>& a, const std::vector<int>& b);

}  // namespace sonclust
