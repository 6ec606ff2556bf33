#include "sonclust/admm.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace sonclust {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::kkt_tol_met: return "kkt_tol_met";
    case Termination::max_iters: return "max_iters";
    case Termination::stagnation: return "stagnation";
  }
  return "unknown";
}

void IadmmConfig::validate() const {
  if (sigma <= 0.0) throw std::invalid_argument("iadmm: sigma must be positive");
  if (tau_step <= 0.0 || tau_step >= 0.5 * (1.0 + std::sqrt(5.0)))
    throw std::invalid_argument("iadmm: tau_step out of (0, (1+sqrt(5))/2)");
  if (eps_decay <= 0.0 || eps_decay >= 1.0)
    throw std::invalid_argument("iadmm: eps_decay out of (0, 1)");
}

namespace {

// Persistent X-update solver for diag(f) + sigma L_G; factorized once and
// reused across iterations.
class XUpdate {
 public:
  XUpdate(const ClusterProblem& prob, const IadmmConfig& cfg)
      : prob_(prob), sigma_(cfg.sigma) {
    M_ = prob.graph.sparse_laplacian() * sigma_;
    for (Eigen::Index i = 0; i < prob.size(); ++i)
      M_.coeffRef(i, i) += prob.fidelity_at(i);
    M_.makeCompressed();
    use_cholesky_ =
        cfg.linear_solver == IadmmConfig::LinearSolver::cholesky ||
        (cfg.linear_solver == IadmmConfig::LinearSolver::automatic &&
         prob.size() <= 50000);
    if (use_cholesky_) {
      llt_.compute(M_);
      if (llt_.info() != Eigen::Success)
        throw std::runtime_error("iadmm: Cholesky factorization failed");
    }
  }

  // Solves M X^T = R^T to residual norm <= eps_k (exact for Cholesky).
  Eigen::MatrixXd solve(const Eigen::MatrixXd& R, double eps_k) const {
    if (use_cholesky_) {
      return llt_.solve(R.transpose()).transpose();
    }
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>,
                             Eigen::Lower | Eigen::Upper>
        cg(M_);
    const double rnorm = R.norm();
    cg.setTolerance(rnorm > 0.0 ? std::max(1e-14, eps_k / rnorm) : 1e-14);
    const Eigen::MatrixXd Xt = cg.solve(R.transpose());
    if (cg.info() != Eigen::Success && cg.iterations() >= cg.maxIterations())
      throw std::runtime_error("iadmm: CG for the X-update did not converge");
    return Xt.transpose();
  }

 private:
  const ClusterProblem& prob_;
  double sigma_;
  Eigen::SparseMatrix<double> M_;
  bool use_cholesky_ = false;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt_;
};

void step_impl(const ClusterProblem& prob, const IadmmConfig& cfg,
               const XUpdate& xup, PrimalDualState& s, double eps_k) {
  const double sigma = cfg.sigma;
  Eigen::MatrixXd R = prob.graph.apply_Bstar(s.U - s.Z / sigma) * sigma;
  for (Eigen::Index i = 0; i < prob.size(); ++i)
    R.col(i) += prob.fidelity_at(i) * prob.data.points.col(i);
  s.X = xup.solve(R, eps_k);

  const Eigen::MatrixXd BX = prob.graph.apply_B(s.X);
  s.U = prox_block(prob.norm, BX + s.Z / sigma, prob.edge_thresholds(1.0 / sigma));
  s.Z += (cfg.tau_step * sigma) * (BX - s.U);
  if (!s.X.allFinite() || !s.Z.allFinite())
    throw std::runtime_error("iadmm: non-finite iterate");
  for (Eigen::Index i = 0; i < prob.size(); ++i)
    s.V.col(i) = prob.fidelity_at(i) * (prob.data.points.col(i) - s.X.col(i));
}

}  // namespace

PrimalDualState iadmm_step(const ClusterProblem& prob, const PrimalDualState& state,
                           const IadmmConfig& cfg, double eps_k) {
  cfg.validate();
  XUpdate xup(prob, cfg);
  PrimalDualState s = state;
  step_impl(prob, cfg, xup, s, eps_k);
  return s;
}

PrimalDualState iadmm_warm_start(const ClusterProblem& prob, int iters,
                                 const IadmmConfig& cfg) {
  if (iters < 0) throw std::invalid_argument("iadmm_warm_start: iters must be >= 0");
  cfg.validate();
  PrimalDualState s = initial_state(prob);
  if (iters == 0) return s;
  XUpdate xup(prob, cfg);
  double eps = cfg.eps0;
  for (int k = 0; k < iters; ++k) {
    step_impl(prob, cfg, xup, s, eps);
    eps *= cfg.eps_decay;
  }
  return s;
}

SolveReport solve_admm(const ClusterProblem& prob, const IadmmConfig& cfg,
                       double kkt_tol) {
  prob.validate();
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();

  SolveReport report;
  report.state = initial_state(prob);
  XUpdate xup(prob, cfg);
  double eps = cfg.eps0;
  report.termination = Termination::max_iters;
  for (int k = 0; k < cfg.max_iters; ++k) {
    report.residuals = kkt_residuals(prob, report.state);
    if (report.residuals.max_residual() <= kkt_tol) {
      report.termination = Termination::kkt_tol_met;
      break;
    }
    step_impl(prob, cfg, xup, report.state, eps);
    eps *= cfg.eps_decay;
    ++report.outer_iters;
  }
  report.residuals = kkt_residuals(prob, report.state);
  if (report.residuals.max_residual() <= kkt_tol)
    report.termination = Termination::kkt_tol_met;
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace sonclust
