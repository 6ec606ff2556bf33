#include "sonclust/ssnal.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "sonclust/admm.hpp"

namespace sonclust {

void SsnalConfig::validate() const {
  if (sigma0 <= 0.0) throw std::invalid_argument("ssnal: sigma0 must be positive");
  if (kkt_tol <= 0.0) throw std::invalid_argument("ssnal: kkt_tol must be positive");
  if (eps_decay <= 0.0 || eps_decay >= 1.0)
    throw std::invalid_argument("ssnal: eps_decay out of (0, 1)");
  if (inner.mu <= 0.0 || inner.mu >= 0.5)
    throw std::invalid_argument("ssnal: Armijo mu out of (0, 1/2)");
  if (inner.tau <= 0.0 || inner.tau > 1.0)
    throw std::invalid_argument("ssnal: tau out of (0, 1]");
}

SolveReport solve(const ClusterProblem& prob,
                  const std::optional<PrimalDualState>& warm,
                  const SsnalConfig& cfg) {
  prob.validate();
  cfg.validate();
  if (prob.norm != NormKind::two) {
    // the Newton operator is only available for p = 2; hand the other norms
    // to the first-order solver of record
    IadmmConfig icfg;
    return solve_admm(prob, icfg, cfg.kkt_tol);
  }
  const auto t0 = std::chrono::steady_clock::now();

  SolveReport report;
  if (warm) {
    if (warm->X.rows() != prob.dim() || warm->X.cols() != prob.size() ||
        warm->Z.cols() != prob.graph.num_edges())
      throw std::invalid_argument("ssnal: warm-start shape mismatch");
    report.state = *warm;
  } else {
    report.state = initial_state(prob);
  }

  double sigma = cfg.sigma0;
  double eps = cfg.eps0;
  double prev_eta_P = std::numeric_limits<double>::infinity();
  report.termination = Termination::max_iters;

  // Near degeneracies the residual jitters from one multiplier update to the
  // next, so progress is judged on the best iterate seen rather than on a
  // window of raw values, and the best iterate is what gets returned.
  double best_res = std::numeric_limits<double>::infinity();
  PrimalDualState best_state = report.state;
  int last_improvement = 0;

  for (int k = 0; k < cfg.max_outer; ++k) {
    report.residuals = kkt_residuals(prob, report.state);
    const double res = report.residuals.max_residual();
    if (res < best_res) {
      if (res <= (1.0 - cfg.stagnation_improvement) * best_res)
        last_improvement = k;
      best_res = res;
      best_state = report.state;
    }
    if (res <= cfg.kkt_tol) {
      report.termination = Termination::kkt_tol_met;
      break;
    }
    if (k - last_improvement > cfg.stagnation_window) {
      report.termination = Termination::stagnation;
      break;
    }

    // U is set to the exact prox given X below, so the subproblem
    // inexactness is controlled by ||grad_phi|| alone.
    const double tol_inner =
        std::max(eps / std::max(1.0, std::sqrt(sigma)), 1e-13);
    SsncgStats stats;
    report.state.X = minimize_phi(prob, sigma, report.state.Z, report.state.X,
                                  tol_inner, cfg.inner, stats);
    report.total_newton_iters += stats.newton_iters;
    report.total_cg_iters += stats.cg_iters;
    report.edge_work += stats.edge_work;
    report.matvec_count += stats.matvec_count;
    if (!report.state.X.allFinite())
      throw std::runtime_error("ssnal: inner solve diverged (non-finite iterate)");

    const Eigen::MatrixXd BX = prob.graph.apply_B(report.state.X);
    report.state.U = prox_block(prob.norm, BX + report.state.Z / sigma,
                                prob.edge_thresholds(1.0 / sigma));
    report.state.Z += sigma * (BX - report.state.U);
    ++report.outer_iters;

    const double eta_P_now =
        (BX - report.state.U).norm() / (1.0 + report.state.U.norm());
    if (eta_P_now > cfg.sigma_progress * prev_eta_P)
      sigma = std::min(cfg.sigma_max, cfg.sigma_growth * sigma);
    prev_eta_P = eta_P_now;
    eps *= cfg.eps_decay;
  }

  if (kkt_residuals(prob, report.state).max_residual() > best_res)
    report.state = best_state;
  for (Eigen::Index i = 0; i < prob.size(); ++i)
    report.state.V.col(i) =
        prob.fidelity_at(i) * (prob.data.points.col(i) - report.state.X.col(i));
  report.residuals = kkt_residuals(prob, report.state);
  if (report.residuals.max_residual() <= cfg.kkt_tol)
    report.termination = Termination::kkt_tol_met;
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

ClusteringPath solve_path(const ClusterProblem& prob_template,
                          const std::vector<double>& gammas,
                          const SsnalConfig& cfg, bool warm_start,
                          int admm_warm_iters, double cluster_tol) {
  if (gammas.empty()) throw std::invalid_argument("solve_path: empty gamma list");
  for (size_t i = 0; i < gammas.size(); ++i) {
    if (gammas[i] <= 0.0) throw std::invalid_argument("solve_path: gammas must be positive");
    if (i > 0 && gammas[i] <= gammas[i - 1])
      throw std::invalid_argument("solve_path: gammas must be increasing");
  }

  ClusteringPath path;
  path.gammas = gammas;
  path.dataset_name = prob_template.data.name;

  std::optional<PrimalDualState> carry;
  for (double gamma : gammas) {
    ClusterProblem prob = prob_template;
    prob.gamma = gamma;

    SolveReport report;
    if (prob.norm == NormKind::two) {
      if (warm_start && !carry) {
        IadmmConfig warm_cfg;
        carry = iadmm_warm_start(prob, admm_warm_iters, warm_cfg);
      }
      report = solve(prob, warm_start ? carry : std::nullopt, cfg);
    } else {
      IadmmConfig admm_cfg;
      admm_cfg.max_iters = 200000;
      report = solve_admm(prob, admm_cfg, cfg.kkt_tol);
    }
    if (warm_start) carry = report.state;

    PathEntry entry;
    entry.gamma = gamma;
    entry.assignment = extract_clusters(prob, report.state.X, cluster_tol);
    entry.residuals = report.residuals;
    entry.primal_obj = report.residuals.primal_obj;
    entry.outer_iters = report.outer_iters;
    entry.newton_iters = report.total_newton_iters;
    entry.cg_iters = report.total_cg_iters;
    entry.wall_time = report.wall_time;
    entry.termination = report.termination;
    if (prob.data.labels)
      entry.rand_index_vs_truth = rand_index(entry.assignment.labels, *prob.data.labels);
    path.entries.push_back(std::move(entry));
  }
  return path;
}

}  // namespace sonclust
