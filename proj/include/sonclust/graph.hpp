#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <utility>
#include <vector>

#include "sonclust/dataset.hpp"

namespace sonclust {

// Weighted edge set over n nodes with the node-arc incidence structure kept
// implicit: edges are (i,j) pairs with i < j, sorted lexicographically, and
// column l of any d x |E| matrix corresponds to edges[l].
class WeightGraph {
 public:
  WeightGraph() = default;

  // Edges are coalesced (max weight wins), self-loops dropped, zero weights
  // dropped, and the list is sorted with i < j.
  WeightGraph(Eigen::Index n, std::vector<std::pair<int, int>> edges,
              std::vector<double> weights);

  Eigen::Index num_nodes() const { return n_; }
  Eigen::Index num_edges() const { return static_cast<Eigen::Index>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const std::vector<int>& degrees() const { return degrees_; }
  int max_degree() const;

  // Weighted degree: sum of incident edge weights per node.
  Eigen::VectorXd weighted_degrees() const;

  // B(X): column l(i,j) = x_i - x_j.
  Eigen::MatrixXd apply_B(const Eigen::MatrixXd& X) const;

  // Adjoint of B: scatter +Z^l to node i, -Z^l to node j.
  Eigen::MatrixXd apply_Bstar(const Eigen::MatrixXd& Z) const;

  // Dense Laplacian diag(Ge) - G. Test and small-instance use only.
  Eigen::MatrixXd dense_laplacian() const;

  // Sparse Laplacian for direct factorizations.
  Eigen::SparseMatrix<double> sparse_laplacian() const;

  // lambda_max(L_G) to relative tolerance 1e-6 via power iteration, together
  // with the degree bound 2 * max weighted degree.
  struct LaplacianEig {
    double lambda_max;
    double degree_bound;
  };
  LaplacianEig laplacian_max_eigenvalue() const;

 private:
  Eigen::Index n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  Eigen::VectorXd weights_;
  std::vector<int> degrees_;
};

// E = union over i of {(i,j) : j among i's k nearest neighbors}, with
// Gaussian weights exp(-phi * ||a_i - a_j||^2); phi = 0 gives unit weights.
// Ties in the neighbor ranking are broken toward the smaller index.
WeightGraph build_knn_graph(const Dataset& data, int k, double phi);

// Union of the existing edge set with all same-label pairs, Gaussian weights
// on the new edges. Weights of already-present edges are kept.
WeightGraph add_within_cluster_edges(const WeightGraph& graph, const Dataset& data,
                                     const std::vector<int>& labels, double phi);

}  // namespace sonclust
