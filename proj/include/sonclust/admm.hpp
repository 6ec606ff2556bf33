#pragma once

#include <Eigen/Dense>

#include "sonclust/problem.hpp"
#include "sonclust/report.hpp"

namespace sonclust {

struct IadmmConfig {
  double sigma = 1.0;
  double tau_step = 1.618;  // multiplier step, in (0, (1+sqrt(5))/2)
  double eps0 = 1e-4;       // summable X-subproblem tolerances eps0 * decay^k
  double eps_decay = 0.9;
  enum class LinearSolver { automatic, cholesky, cg } linear_solver =
      LinearSolver::automatic;
  int max_iters = 100000;

  void validate() const;
};

// One ADMM iteration from `state`:
//   X-update solves (diag(f) + sigma L_G) X^T = R^T with
//   R = A diag(f) + sigma B*(U - Z/sigma) to accuracy eps_k,
//   U-update is the exact block prox, Z-update uses step tau * sigma.
PrimalDualState iadmm_step(const ClusterProblem& prob, const PrimalDualState& state,
                           const IadmmConfig& cfg, double eps_k = 0.0);

// Exactly `iters` steps from the primal-feasible start X=A, U=B(A), Z=0.
PrimalDualState iadmm_warm_start(const ClusterProblem& prob, int iters,
                                 const IadmmConfig& cfg);

// Runs until max{eta_P, eta_D, eta} <= kkt_tol or the iteration cap. Works
// for any p in {1, 2, inf}; this is the solver of record for p != 2.
SolveReport solve_admm(const ClusterProblem& prob, const IadmmConfig& cfg,
                       double kkt_tol);

}  // namespace sonclust
