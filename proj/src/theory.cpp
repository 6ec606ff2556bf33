#include "sonclust/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

#include "sonclust/admm.hpp"

namespace sonclust {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int num_classes(const std::vector<int>& labels) {
  int K = 0;
  for (int l : labels) {
    if (l < 1) throw std::invalid_argument("labels must lie in {1..K}");
    K = std::max(K, l);
  }
  return K;
}

std::vector<std::vector<int>> class_members(const std::vector<int>& labels, int K) {
  std::vector<std::vector<int>> members(K);
  for (int i = 0; i < static_cast<int>(labels.size()); ++i)
    members[labels[i] - 1].push_back(i);
  for (int a = 0; a < K; ++a)
    if (members[a].empty())
      throw std::invalid_argument("empty class " + std::to_string(a + 1));
  return members;
}

}  // namespace

CouplingSums cluster_couplings(const WeightGraph& graph,
                               const std::vector<int>& labels) {
  const Eigen::Index n = graph.num_nodes();
  if (static_cast<Eigen::Index>(labels.size()) != n)
    throw std::invalid_argument("labels/graph size mismatch");
  const int K = num_classes(labels);

  CouplingSums sums;
  sums.point_cluster = Eigen::MatrixXd::Zero(n, K);
  sums.cluster_cluster = Eigen::MatrixXd::Zero(K, K);
  for (Eigen::Index l = 0; l < graph.num_edges(); ++l) {
    const auto [i, j] = graph.edges()[l];
    const double w = graph.weights()[l];
    const int a = labels[i] - 1, b = labels[j] - 1;
    sums.point_cluster(i, b) += w;
    sums.point_cluster(j, a) += w;
    sums.cluster_cluster(a, b) += w;
    if (a != b) sums.cluster_cluster(b, a) += w;
    // a == b contributes 2w to the diagonal: once for each endpoint's view.
    else sums.cluster_cluster(a, a) += w;
  }
  return sums;
}

double diameter_q(const Eigen::MatrixXd& points, NormKind q) {
  double diam = 0.0;
  for (Eigen::Index i = 0; i < points.cols(); ++i)
    for (Eigen::Index j = i + 1; j < points.cols(); ++j)
      diam = std::max(diam, norm_value(q, points.col(i) - points.col(j)));
  return diam;
}

Eigen::MatrixXd class_centroids(const Dataset& data, const std::vector<int>& labels) {
  const int K = num_classes(labels);
  Eigen::MatrixXd centroids = Eigen::MatrixXd::Zero(data.dim(), K);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(K);
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    centroids.col(labels[i] - 1) += data.points.col(i);
    counts[labels[i] - 1] += 1.0;
  }
  for (int a = 0; a < K; ++a) {
    if (counts[a] == 0.0)
      throw std::invalid_argument("empty class " + std::to_string(a + 1));
    centroids.col(a) /= counts[a];
  }
  return centroids;
}

RecoveryBounds recovery_bounds(const Dataset& data, const std::vector<int>& labels,
                               const WeightGraph& graph, NormKind q) {
  const Eigen::Index n = data.size();
  if (static_cast<Eigen::Index>(labels.size()) != n ||
      graph.num_nodes() != n)
    throw std::invalid_argument("data/labels/graph size mismatch");
  const int K = num_classes(labels);
  const auto members = class_members(labels, K);
  const CouplingSums sums = cluster_couplings(graph, labels);

  std::map<std::pair<int, int>, double> weight;
  for (Eigen::Index l = 0; l < graph.num_edges(); ++l)
    weight[graph.edges()[l]] = graph.weights()[l];

  RecoveryBounds out;

  // Within-cluster bound: every same-class pair must be coupled strongly
  // enough that n_a w_ij beats the cross-coupling imbalance mu_ij.
  for (int a = 0; a < K; ++a) {
    const double n_a = static_cast<double>(members[a].size());
    for (std::size_t s = 0; s < members[a].size(); ++s) {
      for (std::size_t t = s + 1; t < members[a].size(); ++t) {
        const int i = members[a][s], j = members[a][t];
        const auto it = weight.find({std::min(i, j), std::max(i, j)});
        const double w_ij = (it == weight.end()) ? 0.0 : it->second;
        if (w_ij <= 0.0)
          throw RecoveryAssumptionError(
              "pair (" + std::to_string(i) + "," + std::to_string(j) +
                  ") in class " + std::to_string(a + 1) + " has zero weight",
              a + 1, i, j);
        double mu = 0.0;
        for (int b = 0; b < K; ++b)
          if (b != a)
            mu += std::abs(sums.point_cluster(i, b) - sums.point_cluster(j, b));
        const double denom = n_a * w_ij - mu;
        if (denom <= 0.0)
          throw RecoveryAssumptionError(
              "pair (" + std::to_string(i) + "," + std::to_string(j) +
                  ") in class " + std::to_string(a + 1) +
                  " violates n_a w_ij > mu_ij",
              a + 1, i, j);
        const double ratio =
            norm_value(q, data.points.col(i) - data.points.col(j)) / denom;
        if (ratio > out.gamma_min) {
          out.gamma_min = ratio;
          out.min_cluster = a + 1;
          out.min_i = i;
          out.min_j = j;
        }
      }
    }
  }

  // Between-cluster bound: centroid separation over mean cross-couplings.
  const Eigen::MatrixXd centroids = class_centroids(data, labels);
  out.gamma_max = kInf;
  for (int a = 0; a < K; ++a) {
    for (int b = a + 1; b < K; ++b) {
      double denom = 0.0;
      for (int l = 0; l < K; ++l) {
        if (l != a) denom += sums.cluster_cluster(a, l) / members[a].size();
        if (l != b) denom += sums.cluster_cluster(b, l) / members[b].size();
      }
      const double dist = norm_value(q, centroids.col(a) - centroids.col(b));
      const double ratio = (denom > 0.0) ? dist / denom : kInf;
      if (ratio < out.gamma_max) {
        out.gamma_max = ratio;
        out.max_alpha = a + 1;
        out.max_beta = b + 1;
      }
    }
  }

  // Coalescence bound: past it, everything collapses to the grand mean.
  const Eigen::VectorXd grand = data.points.rowwise().mean();
  for (int a = 0; a < K; ++a) {
    double cross = 0.0;
    for (int b = 0; b < K; ++b)
      if (b != a) cross += sums.cluster_cluster(a, b);
    const double num = static_cast<double>(members[a].size()) *
                       norm_value(q, grand - centroids.col(a));
    const double bound = (cross > 0.0) ? num / cross : (num > 0.0 ? kInf : 0.0);
    out.coarsening_upper = std::max(out.coarsening_upper, bound);
  }

  out.feasible = K == 1 || out.gamma_min < out.gamma_max;
  return out;
}

RecoveryBounds uniform_weight_bounds(const Dataset& data,
                                 const std::vector<int>& labels, NormKind q) {
  const Eigen::Index n = data.size();
  if (static_cast<Eigen::Index>(labels.size()) != n)
    throw std::invalid_argument("data/labels size mismatch");
  const int K = num_classes(labels);
  const auto members = class_members(labels, K);
  const Eigen::MatrixXd centroids = class_centroids(data, labels);

  RecoveryBounds out;
  for (int a = 0; a < K; ++a) {
    Eigen::MatrixXd pts(data.dim(), members[a].size());
    for (std::size_t s = 0; s < members[a].size(); ++s)
      pts.col(s) = data.points.col(members[a][s]);
    out.gamma_min =
        std::max(out.gamma_min, diameter_q(pts, q) / members[a].size());
  }

  out.gamma_max = kInf;
  for (int a = 0; a < K; ++a) {
    for (int b = a + 1; b < K; ++b) {
      const double denom =
          static_cast<double>(2 * n - members[a].size() - members[b].size());
      const double ratio =
          norm_value(q, centroids.col(a) - centroids.col(b)) / denom;
      if (ratio < out.gamma_max) {
        out.gamma_max = ratio;
        out.max_alpha = a + 1;
        out.max_beta = b + 1;
      }
    }
  }

  const Eigen::VectorXd grand = data.points.rowwise().mean();
  for (int a = 0; a < K; ++a) {
    const double denom = static_cast<double>(n - members[a].size());
    if (denom > 0.0)
      out.coarsening_upper = std::max(
          out.coarsening_upper, norm_value(q, grand - centroids.col(a)) / denom);
  }

  out.feasible = K == 1 || out.gamma_min < out.gamma_max;
  return out;
}

Eigen::MatrixXd solve_centroid_problem(const Dataset& data,
                                       const std::vector<int>& labels,
                                       const WeightGraph& graph, double gamma,
                                       NormKind norm, double kkt_tol) {
  const int K = num_classes(labels);
  const auto members = class_members(labels, K);
  const Eigen::MatrixXd centroids = class_centroids(data, labels);
  if (K == 1 || gamma == 0.0) return centroids;

  const CouplingSums sums = cluster_couplings(graph, labels);

  ClusterProblem reduced;
  reduced.data.points = centroids;
  reduced.data.name = data.name + "-centroids";
  reduced.gamma = gamma;
  reduced.norm = norm;
  reduced.fidelity.resize(K);
  for (int a = 0; a < K; ++a)
    reduced.fidelity[a] = static_cast<double>(members[a].size());

  std::vector<std::pair<int, int>> edges;
  std::vector<double> weights;
  for (int a = 0; a < K; ++a)
    for (int b = a + 1; b < K; ++b)
      if (sums.cluster_cluster(a, b) > 0.0) {
        edges.emplace_back(a, b);
        weights.push_back(sums.cluster_cluster(a, b));
      }
  reduced.graph = WeightGraph(K, std::move(edges), std::move(weights));
  if (reduced.graph.num_edges() == 0) return centroids;

  SolveReport report;
  if (norm == NormKind::two) {
    SsnalConfig cfg;
    cfg.kkt_tol = kkt_tol;
    report = solve(reduced, std::nullopt, cfg);
  } else {
    IadmmConfig cfg;
    cfg.max_iters = 200000;
    report = solve_admm(reduced, cfg, kkt_tol);
  }
  return report.state.X;
}

RecoveryReport verify_recovery(const Dataset& data, const std::vector<int>& labels,
                               const WeightGraph& graph, double gamma,
                               NormKind norm, double kkt_tol) {
  ClusterProblem prob;
  prob.data = data;
  prob.graph = graph;
  prob.gamma = gamma;
  prob.norm = norm;

  SolveReport report;
  if (norm == NormKind::two) {
    SsnalConfig cfg;
    cfg.kkt_tol = kkt_tol;
    report = solve(prob, std::nullopt, cfg);
  } else {
    IadmmConfig cfg;
    cfg.max_iters = 200000;
    report = solve_admm(prob, cfg, kkt_tol);
  }

  const Eigen::MatrixXd Xbar =
      solve_centroid_problem(data, labels, graph, gamma, norm, kkt_tol);
  Eigen::MatrixXd Xhat(data.dim(), data.size());
  for (Eigen::Index i = 0; i < data.size(); ++i)
    Xhat.col(i) = Xbar.col(labels[i] - 1);

  const ClusterAssignment found = extract_clusters(prob, report.state.X);

  RecoveryReport out;
  out.distance = (report.state.X - Xhat).norm();
  out.K_found = found.num_clusters;
  out.perfect = same_partition(found.labels, labels);
  out.residuals = report.residuals;
  return out;
}

}  // namespace sonclust
