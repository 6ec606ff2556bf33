#pragma once

#include <Eigen/Dense>
#include <vector>

#include "sonclust/problem.hpp"

namespace sonclust {

struct SsncgConfig {
  double mu = 1e-4;      // Armijo constant, in (0, 1/2)
  double delta = 0.5;    // backtracking factor, in (0, 1)
  double tau = 0.5;      // inexactness exponent, in (0, 1]
  double eta_bar = 1e-2; // CG residual cap, in (0, 1)
  int max_newton = 200;
  int max_cg = 300;
  int max_backtracks = 50;
  bool trace = false;    // per-iteration CSV trace on stderr
};

// Value and gradient of the reduced augmented-Lagrangian objective
//   phi(X) = 1/2 ||X - A||_F(fid)^2 + p(Prox_{p/sigma}(D))
//            + 1/(2 sigma) ||Prox_{sigma p*}(sigma D)||^2 - 1/(2 sigma) ||Ztilde||^2
// with D = B(X) + Ztilde / sigma. Both are evaluated in one O(d|E|) pass.
struct PhiEval {
  double value = 0.0;
  Eigen::MatrixXd grad;  // d x n
  Eigen::MatrixXd D;     // d x |E|, reused by the Jacobian sketch
};

double phi_value(const ClusterProblem& prob, double sigma,
                 const Eigen::MatrixXd& Ztilde, const Eigen::MatrixXd& X);

PhiEval phi_with_grad(const ClusterProblem& prob, double sigma,
                      const Eigen::MatrixXd& Ztilde, const Eigen::MatrixXd& X);

Eigen::MatrixXd grad_phi(const ClusterProblem& prob, double sigma,
                         const Eigen::MatrixXd& Ztilde, const Eigen::MatrixXd& X);

// One element of the generalized Jacobian of grad_phi at X:
//   V = diag(f) + sigma B* (I - P) B,
// where P vanishes on edges with alpha >= 1. Only p = 2 is supported; the
// other norms are handled by the first-order solver.
struct JacobianSketch {
  Eigen::MatrixXd D;             // d x |E|
  Eigen::VectorXd alpha;         // per-edge, +inf when ||D_l|| = 0
  Eigen::VectorXd inv_norm2;     // 1 / ||D_l||^2 on active edges
  std::vector<char> active;      // alpha_l < 1
  Eigen::Index num_active = 0;
};

JacobianSketch build_jacobian_sketch(const ClusterProblem& prob, double sigma,
                                     const Eigen::MatrixXd& Ztilde,
                                     const Eigen::MatrixXd& X);

// Builds the sketch from an already-computed D = B(X) + Ztilde / sigma.
JacobianSketch build_jacobian_sketch_from_D(const ClusterProblem& prob,
                                            double sigma, Eigen::MatrixXd D);

// V(H); cost O(d(|E| + |E_active|)). `edge_work`, when given, accumulates
// |E| + |E_active| so callers can audit the per-matvec cost.
Eigen::MatrixXd jacobian_matvec(const JacobianSketch& sketch,
                                const ClusterProblem& prob, double sigma,
                                const Eigen::MatrixXd& H,
                                long long* edge_work = nullptr);

struct SsncgStats {
  int newton_iters = 0;
  int cg_iters = 0;
  long long edge_work = 0;   // summed |E| + |E_active| over all matvecs
  long long matvec_count = 0;
  double grad_norm = 0.0;
  double phi = 0.0;
  bool converged = false;
};

// Semismooth Newton-CG on grad_phi(X) = 0: inexact CG directions with the
// residual rule min(eta_bar, ||g||^{1+tau}), then Armijo backtracking.
// Returns the final iterate; throws on a failed line search.
Eigen::MatrixXd minimize_phi(const ClusterProblem& prob, double sigma,
                             const Eigen::MatrixXd& Ztilde,
                             const Eigen::MatrixXd& X0, double tol,
                             const SsncgConfig& cfg, SsncgStats& stats);

}  // namespace sonclust
