#include "sonclust/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <limits>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

#include "sonclust/rng.hpp"

namespace sonclust {

WeightGraph::WeightGraph(Eigen::Index n, std::vector<std::pair<int, int>> edges,
                         std::vector<double> weights)
    : n_(n) {
  if (edges.size() != weights.size())
    throw std::invalid_argument("graph: edge/weight length mismatch");
  if (n < 1) throw std::invalid_argument("graph: need n >= 1");

  // Normalize orientation, drop self-loops and nonpositive weights, coalesce
  // duplicates with max weight.
  std::map<std::pair<int, int>, double> coalesced;
  for (size_t l = 0; l < edges.size(); ++l) {
    int i = edges[l].first, j = edges[l].second;
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n)
      throw std::invalid_argument("graph: edge endpoint out of range");
    if (weights[l] <= 0.0) continue;
    auto [it, inserted] = coalesced.emplace(std::make_pair(i, j), weights[l]);
    if (!inserted) it->second = std::max(it->second, weights[l]);
  }

  edges_.reserve(coalesced.size());
  weights_.resize(static_cast<Eigen::Index>(coalesced.size()));
  degrees_.assign(static_cast<size_t>(n), 0);
  Eigen::Index l = 0;
  for (const auto& [e, w] : coalesced) {
    edges_.push_back(e);
    weights_[l++] = w;
    ++degrees_[static_cast<size_t>(e.first)];
    ++degrees_[static_cast<size_t>(e.second)];
  }
}

int WeightGraph::max_degree() const {
  int m = 0;
  for (int d : degrees_) m = std::max(m, d);
  return m;
}

Eigen::VectorXd WeightGraph::weighted_degrees() const {
  Eigen::VectorXd deg = Eigen::VectorXd::Zero(n_);
  for (Eigen::Index l = 0; l < num_edges(); ++l) {
    deg[edges_[static_cast<size_t>(l)].first] += weights_[l];
    deg[edges_[static_cast<size_t>(l)].second] += weights_[l];
  }
  return deg;
}

Eigen::MatrixXd WeightGraph::apply_B(const Eigen::MatrixXd& X) const {
  if (X.cols() != n_) throw std::invalid_argument("apply_B: dimension mismatch");
  Eigen::MatrixXd out(X.rows(), num_edges());
  for (Eigen::Index l = 0; l < num_edges(); ++l) {
    const auto& [i, j] = edges_[static_cast<size_t>(l)];
    out.col(l) = X.col(i) - X.col(j);
  }
  return out;
}

Eigen::MatrixXd WeightGraph::apply_Bstar(const Eigen::MatrixXd& Z) const {
  if (Z.cols() != num_edges())
    throw std::invalid_argument("apply_Bstar: dimension mismatch");
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(Z.rows(), n_);
  for (Eigen::Index l = 0; l < num_edges(); ++l) {
    const auto& [i, j] = edges_[static_cast<size_t>(l)];
    out.col(i) += Z.col(l);
    out.col(j) -= Z.col(l);
  }
  return out;
}

Eigen::MatrixXd WeightGraph::dense_laplacian() const {
  // Laplacian of the 0/1 adjacency of E: weights scale the prox thresholds,
  // not the difference map B, so B*B(X) = X L_G needs the plain Laplacian.
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(n_, n_);
  for (Eigen::Index l = 0; l < num_edges(); ++l) {
    const auto& [i, j] = edges_[static_cast<size_t>(l)];
    G(i, j) = G(j, i) = 1.0;
  }
  Eigen::MatrixXd L = -G;
  L.diagonal() = G.rowwise().sum();
  return L;
}

Eigen::SparseMatrix<double> WeightGraph::sparse_laplacian() const {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<size_t>(num_edges()) * 2 + static_cast<size_t>(n_));
  for (Eigen::Index l = 0; l < num_edges(); ++l) {
    const auto& [i, j] = edges_[static_cast<size_t>(l)];
    trips.emplace_back(i, j, -1.0);
    trips.emplace_back(j, i, -1.0);
  }
  for (Eigen::Index i = 0; i < n_; ++i)
    trips.emplace_back(i, i, static_cast<double>(degrees_[static_cast<size_t>(i)]));
  Eigen::SparseMatrix<double> L(n_, n_);
  L.setFromTriplets(trips.begin(), trips.end());
  return L;
}

WeightGraph::LaplacianEig WeightGraph::laplacian_max_eigenvalue() const {
  if (n_ < 1) throw std::invalid_argument("laplacian_max_eigenvalue: empty graph");
  const double bound = 2.0 * max_degree();
  if (num_edges() == 0) return {0.0, 0.0};

  auto apply_L = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n_);
    for (Eigen::Index l = 0; l < num_edges(); ++l) {
      const auto& [i, j] = edges_[static_cast<size_t>(l)];
      const double diff = v[i] - v[j];
      w[i] += diff;
      w[j] -= diff;
    }
    return w;
  };

  Rng rng(0x5eed);
  Eigen::VectorXd v(n_);
  for (Eigen::Index i = 0; i < n_; ++i) v[i] = rng.normal();
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 100000; ++it) {
    Eigen::VectorXd w = apply_L(v);
    lambda = v.dot(w);
    const double nw = w.norm();
    if (nw == 0.0) return {0.0, bound};
    // the residual bounds the distance to the nearest eigenvalue, so this
    // certifies the advertised relative accuracy rather than just stalling
    if ((w - lambda * v).norm() <= 1e-7 * std::max(lambda, 1e-300)) break;
    v = w / nw;
  }
  return {lambda, bound};
}

namespace {

// Minimal kd-tree over the columns of a d x n matrix; exact k-NN with ties
// broken toward the smaller column index.
class KdTree {
 public:
  explicit KdTree(const Eigen::MatrixXd& pts) : pts_(pts) {
    idx_.resize(static_cast<size_t>(pts.cols()));
    std::iota(idx_.begin(), idx_.end(), 0);
    nodes_.reserve(idx_.size() * 2);
    root_ = build(0, static_cast<int>(idx_.size()));
  }

  // Returns the k nearest neighbors of column `query` (excluding itself),
  // ordered by (distance, index).
  std::vector<int> knn(int query, int k) const {
    // Max-heap keyed by (dist2, index); the worst candidate sits on top.
    using Cand = std::pair<double, int>;
    std::priority_queue<Cand> heap;
    search(root_, query, k, heap);
    std::vector<int> out(heap.size());
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
      *it = heap.top().second;
      heap.pop();
    }
    return out;
  }

 private:
  struct Node {
    int split_dim = -1;
    double split_val = 0.0;
    int left = -1, right = -1;
    int begin = 0, end = 0;  // leaf range into idx_
  };

  int build(int begin, int end) {
    Node node;
    node.begin = begin;
    node.end = end;
    if (end - begin <= 16) {
      nodes_.push_back(node);
      return static_cast<int>(nodes_.size()) - 1;
    }
    // Split on the widest dimension at the median.
    int dim = 0;
    double best_spread = -1.0;
    for (Eigen::Index f = 0; f < pts_.rows(); ++f) {
      double lo = pts_(f, idx_[static_cast<size_t>(begin)]);
      double hi = lo;
      for (int t = begin + 1; t < end; ++t) {
        const double v = pts_(f, idx_[static_cast<size_t>(t)]);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi - lo > best_spread) {
        best_spread = hi - lo;
        dim = static_cast<int>(f);
      }
    }
    const int mid = (begin + end) / 2;
    std::nth_element(idx_.begin() + begin, idx_.begin() + mid, idx_.begin() + end,
                     [&](int a, int b) {
                       const double va = pts_(dim, a), vb = pts_(dim, b);
                       return va < vb || (va == vb && a < b);
                     });
    node.split_dim = dim;
    node.split_val = pts_(dim, idx_[static_cast<size_t>(mid)]);
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[static_cast<size_t>(self)].left = left;
    nodes_[static_cast<size_t>(self)].right = right;
    return self;
  }

  void search(int node_id, int query, int k,
              std::priority_queue<std::pair<double, int>>& heap) const {
    const Node& node = nodes_[static_cast<size_t>(node_id)];
    if (node.split_dim < 0) {
      for (int t = node.begin; t < node.end; ++t) {
        const int c = idx_[static_cast<size_t>(t)];
        if (c == query) continue;
        const double d2 = (pts_.col(c) - pts_.col(query)).squaredNorm();
        const std::pair<double, int> cand{d2, c};
        if (static_cast<int>(heap.size()) < k) {
          heap.push(cand);
        } else if (cand < heap.top()) {
          heap.pop();
          heap.push(cand);
        }
      }
      return;
    }
    const double qv = pts_(node.split_dim, query);
    const int near = qv <= node.split_val ? node.left : node.right;
    const int far = qv <= node.split_val ? node.right : node.left;
    search(near, query, k, heap);
    const double gap = qv - node.split_val;
    if (static_cast<int>(heap.size()) < k || gap * gap <= heap.top().first)
      search(far, query, k, heap);
  }

  const Eigen::MatrixXd& pts_;
  std::vector<int> idx_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

double gaussian_weight(const Eigen::MatrixXd& pts, int i, int j, double phi) {
  if (phi == 0.0) return 1.0;
  return std::exp(-phi * (pts.col(i) - pts.col(j)).squaredNorm());
}

}  // namespace

WeightGraph build_knn_graph(const Dataset& data, int k, double phi) {
  const int n = static_cast<int>(data.size());
  if (k < 1 || k > n - 1)
    throw std::invalid_argument("build_knn_graph: need 1 <= k <= n-1");
  if (phi < 0.0) throw std::invalid_argument("build_knn_graph: phi must be >= 0");

  std::vector<std::pair<int, int>> edges;
  std::vector<double> weights;
  edges.reserve(static_cast<size_t>(n) * static_cast<size_t>(k));

  auto add_neighbors = [&](int i, const std::vector<int>& nbrs) {
    for (int j : nbrs) {
      const int a = std::min(i, j), b = std::max(i, j);
      edges.emplace_back(a, b);
      weights.push_back(gaussian_weight(data.points, a, b, phi));
    }
  };

  if (data.dim() <= 16 && n > 64) {
    KdTree tree(data.points);
    for (int i = 0; i < n; ++i) add_neighbors(i, tree.knn(i, k));
  } else {
    std::vector<std::pair<double, int>> cand(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j)
        cand[static_cast<size_t>(j)] = {
            (data.points.col(j) - data.points.col(i)).squaredNorm(), j};
      cand[static_cast<size_t>(i)] = {std::numeric_limits<double>::infinity(), i};
      std::partial_sort(cand.begin(), cand.begin() + k, cand.end());
      std::vector<int> nbrs(static_cast<size_t>(k));
      for (int t = 0; t < k; ++t) nbrs[static_cast<size_t>(t)] = cand[static_cast<size_t>(t)].second;
      add_neighbors(i, nbrs);
    }
  }
  return WeightGraph(n, std::move(edges), std::move(weights));
}

WeightGraph add_within_cluster_edges(const WeightGraph& graph, const Dataset& data,
                                     const std::vector<int>& labels, double phi) {
  if (static_cast<Eigen::Index>(labels.size()) != graph.num_nodes())
    throw std::invalid_argument("add_within_cluster_edges: label length mismatch");

  std::vector<std::pair<int, int>> edges = graph.edges();
  std::vector<double> weights(graph.weights().data(),
                              graph.weights().data() + graph.num_edges());
  // existing edges keep their weights, whatever they are
  std::set<std::pair<int, int>> present(edges.begin(), edges.end());

  int K = 0;
  for (int l : labels) K = std::max(K, l);
  std::vector<std::vector<int>> members(static_cast<size_t>(K));
  for (size_t i = 0; i < labels.size(); ++i)
    members[static_cast<size_t>(labels[i] - 1)].push_back(static_cast<int>(i));
  for (const auto& group : members) {
    for (size_t a = 0; a < group.size(); ++a) {
      for (size_t b = a + 1; b < group.size(); ++b) {
        if (present.count({group[a], group[b]})) continue;
        edges.emplace_back(group[a], group[b]);
        weights.push_back(gaussian_weight(data.points, group[a], group[b], phi));
      }
    }
  }
  return WeightGraph(graph.num_nodes(), std::move(edges), std::move(weights));
}

}  // namespace sonclust
