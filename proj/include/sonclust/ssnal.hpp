#pragma once

#include <optional>
#include <vector>

#include "sonclust/problem.hpp"
#include "sonclust/report.hpp"
#include "sonclust/ssncg.hpp"

namespace sonclust {

struct SsnalConfig {
  double sigma0 = 1.0;
  double sigma_growth = 3.0;         // applied when eta_P stalls
  double sigma_max = 1e6;
  double sigma_progress = 0.6;       // required eta_P decrease factor
  double eps0 = 1e-2;                // inner tolerances eps0 * eps_decay^k (summable)
  double eps_decay = 0.7;
  double kkt_tol = 1e-6;
  int max_outer = 100;
  // stop when the best residual has not improved by the given relative
  // factor within this many outer iterations
  int stagnation_window = 20;
  double stagnation_improvement = 1e-2;
  SsncgConfig inner;

  void validate() const;
};

// Inexact augmented Lagrangian outer loop. The subproblem is solved by
// minimize_phi to ||grad_phi|| <= eps_k / max(1, sqrt(sigma_k)); U is then
// the exact block prox and Z <- Z + sigma (B(X) - U). Only p = 2; the other
// norms go through solve_admm.
SolveReport solve(const ClusterProblem& prob,
                  const std::optional<PrimalDualState>& warm,
                  const SsnalConfig& cfg);

struct PathEntry {
  double gamma = 0.0;
  ClusterAssignment assignment;
  KktResiduals residuals;
  double primal_obj = 0.0;
  int outer_iters = 0, newton_iters = 0, cg_iters = 0;
  double wall_time = 0.0;
  Termination termination = Termination::max_iters;
  double rand_index_vs_truth = -1.0;  // -1 when ground truth is absent
};

struct ClusteringPath {
  std::vector<double> gammas;
  std::vector<PathEntry> entries;
  std::string dataset_name;
  std::uint64_t seed = 0;
  int knn_k = 0;
  double gaussian_phi = 0.0;
};

// Sequential gamma sweep. The first solve is warm-started by running the
// inexact ADMM for `admm_warm_iters` iterations; each later solve starts
// from the previous optimal state (disable with warm_start = false).
// p != 2 routes every solve to solve_admm.
ClusteringPath solve_path(const ClusterProblem& prob_template,
                          const std::vector<double>& gammas,
                          const SsnalConfig& cfg, bool warm_start = true,
                          int admm_warm_iters = 100, double cluster_tol = 1e-5);

}  // namespace sonclust
