#include "sonclust/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "sonclust/rng.hpp"

namespace sonclust {

void ClusterProblem::validate() const {
  data.validate();
  if (graph.num_nodes() != data.size())
    throw std::invalid_argument("problem: graph node count != n");
  if (gamma < 0.0) throw std::invalid_argument("problem: gamma must be >= 0");
  if (has_fidelity()) {
    if (fidelity.size() != data.size())
      throw std::invalid_argument("problem: fidelity length mismatch");
    if (fidelity.minCoeff() <= 0.0)
      throw std::invalid_argument("problem: fidelity weights must be positive");
  }
}

PrimalDualState initial_state(const ClusterProblem& prob) {
  PrimalDualState s;
  s.X = prob.data.points;
  s.U = prob.graph.apply_B(s.X);
  s.Z = Eigen::MatrixXd::Zero(prob.dim(), prob.graph.num_edges());
  s.V = Eigen::MatrixXd::Zero(prob.dim(), prob.size());
  return s;
}

double primal_objective(const ClusterProblem& prob, const Eigen::MatrixXd& X) {
  if (X.rows() != prob.dim() || X.cols() != prob.size())
    throw std::invalid_argument("primal_objective: shape mismatch");
  double fid = 0.0;
  for (Eigen::Index i = 0; i < prob.size(); ++i)
    fid += prob.fidelity_at(i) * (X.col(i) - prob.data.points.col(i)).squaredNorm();
  double reg = 0.0;
  if (prob.gamma > 0.0) {
    const auto& edges = prob.graph.edges();
    const auto& w = prob.graph.weights();
    for (Eigen::Index l = 0; l < prob.graph.num_edges(); ++l) {
      const auto& [i, j] = edges[static_cast<size_t>(l)];
      reg += w[l] * norm_value(prob.norm, X.col(i) - X.col(j));
    }
  }
  return 0.5 * fid + prob.gamma * reg;
}

double dual_objective(const ClusterProblem& prob, const Eigen::MatrixXd& Z) {
  if (Z.rows() != prob.dim() || Z.cols() != prob.graph.num_edges())
    throw std::invalid_argument("dual_objective: shape mismatch");
  const Eigen::MatrixXd V = prob.graph.apply_Bstar(Z);
  double val = 0.0;
  for (Eigen::Index i = 0; i < prob.size(); ++i)
    val += prob.data.points.col(i).dot(V.col(i)) -
           0.5 * V.col(i).squaredNorm() / prob.fidelity_at(i);
  return val;
}

KktResiduals kkt_residuals(const ClusterProblem& prob, const PrimalDualState& state) {
  const Eigen::MatrixXd& A = prob.data.points;
  const double norm_A = A.norm();
  const double norm_U = state.U.norm();

  KktResiduals r;
  r.eta_P = (prob.graph.apply_B(state.X) - state.U).norm() / (1.0 + norm_U);

  // Dual feasibility: each multiplier column must lie in the q-norm ball of
  // radius gamma * w_ij.
  const NormKind q = conjugate_norm(prob.norm);
  const Eigen::VectorXd radii = prob.edge_thresholds();
  double viol = 0.0;
  for (Eigen::Index l = 0; l < prob.graph.num_edges(); ++l)
    viol += std::max(0.0, norm_value(q, state.Z.col(l)) - radii[l]);
  r.eta_D = viol / (1.0 + norm_A);

  // Stationarity and complementarity.
  Eigen::MatrixXd grad = prob.graph.apply_Bstar(state.Z);
  for (Eigen::Index i = 0; i < prob.size(); ++i)
    grad.col(i) += prob.fidelity_at(i) * (state.X.col(i) - A.col(i));
  const Eigen::MatrixXd prox_gap =
      state.U - prox_block(prob.norm, state.U + state.Z, radii);
  r.eta = (grad.norm() + prox_gap.norm()) / (1.0 + norm_A + norm_U);

  r.primal_obj = primal_objective(prob, state.X);
  r.dual_obj = dual_objective(prob, state.Z);
  r.gap = r.primal_obj - r.dual_obj;
  return r;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
  }
};

}  // namespace

ClusterAssignment extract_clusters(const ClusterProblem& prob,
                                   const Eigen::MatrixXd& X, double tol) {
  const int n = static_cast<int>(prob.size());
  UnionFind uf(n);
  const auto& edges = prob.graph.edges();
  for (const auto& [i, j] : edges) {
    const double scale = std::max({1.0, X.col(i).norm(), X.col(j).norm()});
    if ((X.col(i) - X.col(j)).norm() <= tol * scale) uf.unite(i, j);
  }

  // Canonical labels in order of smallest member index.
  std::map<int, int> root_to_label;
  ClusterAssignment out;
  out.labels.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int root = uf.find(i);
    auto [it, inserted] = root_to_label.emplace(root, static_cast<int>(root_to_label.size()) + 1);
    out.labels[static_cast<size_t>(i)] = it->second;
  }
  out.num_clusters = static_cast<int>(root_to_label.size());
  out.sizes.assign(static_cast<size_t>(out.num_clusters), 0);
  out.centroids = Eigen::MatrixXd::Zero(X.rows(), out.num_clusters);
  for (int i = 0; i < n; ++i) {
    const int k = out.labels[static_cast<size_t>(i)] - 1;
    ++out.sizes[static_cast<size_t>(k)];
    out.centroids.col(k) += X.col(i);
  }
  for (int k = 0; k < out.num_clusters; ++k)
    out.centroids.col(k) /= static_cast<double>(out.sizes[static_cast<size_t>(k)]);
  return out;
}

double rand_index(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("rand_index: length mismatch");
  const size_t n = a.size();
  if (n < 2) return 1.0;

  // Contingency counts; equivalent to enumerating all pairs.
  std::map<int, std::map<int, long long>> table;
  std::map<int, long long> row, col;
  for (size_t i = 0; i < n; ++i) {
    ++table[a[i]][b[i]];
    ++row[a[i]];
    ++col[b[i]];
  }
  auto choose2 = [](long long m) { return m * (m - 1) / 2; };
  long long same_a = 0, same_b = 0, same_both = 0;
  for (const auto& [k, m] : row) same_a += choose2(m);
  for (const auto& [k, m] : col) same_b += choose2(m);
  for (const auto& [k, inner] : table)
    for (const auto& [k2, m] : inner) same_both += choose2(m);
  const long long total = choose2(static_cast<long long>(n));
  const long long disagree = (same_a - same_both) + (same_b - same_both);
  // divide integers once; 1.0 - disagree/total loses an ulp
  return static_cast<double>(total - disagree) / static_cast<double>(total);
}

bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  return a.size() == b.size() && rand_index(a, b) == 1.0;
}

ClusterAssignment kmeans_lloyd(const Dataset& data, int K, std::uint64_t seed,
                               int restarts, int max_iters) {
  const int n = static_cast<int>(data.size());
  const Eigen::Index d = data.dim();
  if (K < 1 || K > n) throw std::invalid_argument("kmeans_lloyd: invalid K");
  Rng rng(seed);

  ClusterAssignment best;
  double best_obj = std::numeric_limits<double>::infinity();

  for (int r = 0; r < restarts; ++r) {
    // k-means++ seeding.
    Eigen::MatrixXd centers(d, K);
    std::vector<double> dist2(static_cast<size_t>(n),
                              std::numeric_limits<double>::infinity());
    centers.col(0) = data.points.col(static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(n))));
    for (int k = 1; k < K; ++k) {
      double total = 0.0;
      for (int i = 0; i < n; ++i) {
        const double d2 = (data.points.col(i) - centers.col(k - 1)).squaredNorm();
        dist2[static_cast<size_t>(i)] = std::min(dist2[static_cast<size_t>(i)], d2);
        total += dist2[static_cast<size_t>(i)];
      }
      Eigen::Index pick = 0;
      if (total > 0.0) {
        double target = rng.uniform() * total;
        for (int i = 0; i < n; ++i) {
          target -= dist2[static_cast<size_t>(i)];
          if (target <= 0.0) { pick = i; break; }
        }
      } else {
        pick = static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(n)));
      }
      centers.col(k) = data.points.col(pick);
    }

    std::vector<int> assign(static_cast<size_t>(n), 0);
    for (int it = 0; it < max_iters; ++it) {
      bool changed = false;
      for (int i = 0; i < n; ++i) {
        int arg = 0;
        double bestd = (data.points.col(i) - centers.col(0)).squaredNorm();
        for (int k = 1; k < K; ++k) {
          const double d2 = (data.points.col(i) - centers.col(k)).squaredNorm();
          if (d2 < bestd) { bestd = d2; arg = k; }
        }
        if (assign[static_cast<size_t>(i)] != arg) {
          assign[static_cast<size_t>(i)] = arg;
          changed = true;
        }
      }
      centers.setZero();
      std::vector<int> counts(static_cast<size_t>(K), 0);
      for (int i = 0; i < n; ++i) {
        centers.col(assign[static_cast<size_t>(i)]) += data.points.col(i);
        ++counts[static_cast<size_t>(assign[static_cast<size_t>(i)])];
      }
      for (int k = 0; k < K; ++k) {
        if (counts[static_cast<size_t>(k)] > 0) {
          centers.col(k) /= static_cast<double>(counts[static_cast<size_t>(k)]);
        } else {
          // Re-seed an empty cluster at the point farthest from its center.
          int far = 0;
          double fard = -1.0;
          for (int i = 0; i < n; ++i) {
            const double d2 = (data.points.col(i) -
                               centers.col(assign[static_cast<size_t>(i)]))
                                  .squaredNorm();
            if (d2 > fard) { fard = d2; far = i; }
          }
          centers.col(k) = data.points.col(far);
          changed = true;
        }
      }
      if (!changed) break;
    }

    double obj = 0.0;
    for (int i = 0; i < n; ++i)
      obj += (data.points.col(i) - centers.col(assign[static_cast<size_t>(i)])).squaredNorm();
    if (obj < best_obj) {
      best_obj = obj;
      best.labels.resize(static_cast<size_t>(n));
      // Relabel in order of first appearance so labels are {1..K'}.
      std::map<int, int> remap;
      for (int i = 0; i < n; ++i) {
        auto [it, ins] = remap.emplace(assign[static_cast<size_t>(i)],
                                       static_cast<int>(remap.size()) + 1);
        best.labels[static_cast<size_t>(i)] = it->second;
      }
      best.num_clusters = static_cast<int>(remap.size());
      best.sizes.assign(static_cast<size_t>(best.num_clusters), 0);
      best.centroids = Eigen::MatrixXd::Zero(d, best.num_clusters);
      for (int i = 0; i < n; ++i) {
        const int k = best.labels[static_cast<size_t>(i)] - 1;
        ++best.sizes[static_cast<size_t>(k)];
        best.centroids.col(k) += data.points.col(i);
      }
      for (int k = 0; k < best.num_clusters; ++k)
        best.centroids.col(k) /= static_cast<double>(best.sizes[static_cast<size_t>(k)]);
    }
  }
  return best;
}

}  // namespace sonclust
