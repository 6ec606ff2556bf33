#include "sonclust/ssncg.hpp"

#include <cmath>
#include <limits>
#include <cstdio>
#include <stdexcept>

namespace sonclust {

namespace {

// Shared single pass over the edges: returns the prox columns of D and the
// conjugate-prox columns sigma*(D - prox), accumulating the phi terms.
struct EdgePass {
  Eigen::MatrixXd conj;  // d x |E|, = Prox_{sigma p*}(sigma D)
  double reg_term = 0.0; // p(Prox_{p/sigma}(D))
  double conj_sq = 0.0;  // ||conj||^2
};

EdgePass edge_pass(const ClusterProblem& prob, double sigma,
                   const Eigen::MatrixXd& D) {
  const Eigen::VectorXd thr = prob.edge_thresholds(1.0 / sigma);
  EdgePass out;
  out.conj.resize(D.rows(), D.cols());
  if (prob.norm == NormKind::two) {
    for (Eigen::Index l = 0; l < D.cols(); ++l) {
      const double nd = D.col(l).norm();
      if (nd <= thr[l]) {
        out.conj.col(l) = sigma * D.col(l);
        out.conj_sq += sigma * sigma * nd * nd;
      } else {
        const double shrink = 1.0 - thr[l] / nd;
        out.reg_term += prob.gamma * prob.graph.weights()[l] * shrink * nd;
        out.conj.col(l) = (sigma * thr[l] / nd) * D.col(l);
        out.conj_sq += sigma * sigma * thr[l] * thr[l];
      }
    }
  } else {
    for (Eigen::Index l = 0; l < D.cols(); ++l) {
      const Eigen::VectorXd p = prox_norm(prob.norm, thr[l], D.col(l));
      out.reg_term += prob.gamma * prob.graph.weights()[l] * norm_value(prob.norm, p);
      out.conj.col(l) = sigma * (D.col(l) - p);
      out.conj_sq += out.conj.col(l).squaredNorm();
    }
  }
  return out;
}

double fidelity_term(const ClusterProblem& prob, const Eigen::MatrixXd& X) {
  double fid = 0.0;
  for (Eigen::Index i = 0; i < prob.size(); ++i)
    fid += prob.fidelity_at(i) * (X.col(i) - prob.data.points.col(i)).squaredNorm();
  return 0.5 * fid;
}

}  // namespace

double phi_value(const ClusterProblem& prob, double sigma,
                 const Eigen::MatrixXd& Ztilde, const Eigen::MatrixXd& X) {
  const Eigen::MatrixXd D = prob.graph.apply_B(X) + Ztilde / sigma;
  const EdgePass pass = edge_pass(prob, sigma, D);
  return fidelity_term(prob, X) + pass.reg_term + pass.conj_sq / (2.0 * sigma) -
         Ztilde.squaredNorm() / (2.0 * sigma);
}

PhiEval phi_with_grad(const ClusterProblem& prob, double sigma,
                      const Eigen::MatrixXd& Ztilde, const Eigen::MatrixXd& X) {
  PhiEval out;
  out.D = prob.graph.apply_B(X) + Ztilde / sigma;
  const EdgePass pass = edge_pass(prob, sigma, out.D);
  out.value = fidelity_term(prob, X) + pass.reg_term +
              pass.conj_sq / (2.0 * sigma) - Ztilde.squaredNorm() / (2.0 * sigma);
  out.grad = prob.graph.apply_Bstar(pass.conj);
  for (Eigen::Index i = 0; i < prob.size(); ++i)
    out.grad.col(i) += prob.fidelity_at(i) * (X.col(i) - prob.data.points.col(i));
  return out;
}

Eigen::MatrixXd grad_phi(const ClusterProblem& prob, double sigma,
                         const Eigen::MatrixXd& Ztilde, const Eigen::MatrixXd& X) {
  return phi_with_grad(prob, sigma, Ztilde, X).grad;
}

JacobianSketch build_jacobian_sketch_from_D(const ClusterProblem& prob,
                                            double sigma, Eigen::MatrixXd D) {
  if (prob.norm != NormKind::two)
    throw std::invalid_argument("jacobian sketch: only the 2-norm is supported");
  JacobianSketch sk;
  const Eigen::VectorXd thr = prob.edge_thresholds(1.0 / sigma);
  const Eigen::Index m = D.cols();
  sk.D = std::move(D);
  sk.alpha.resize(m);
  sk.inv_norm2 = Eigen::VectorXd::Zero(m);
  sk.active.assign(static_cast<size_t>(m), 0);
  for (Eigen::Index l = 0; l < m; ++l) {
    const double nd2 = sk.D.col(l).squaredNorm();
    if (nd2 > 0.0) {
      sk.alpha[l] = thr[l] / std::sqrt(nd2);
      if (sk.alpha[l] < 1.0) {
        sk.active[static_cast<size_t>(l)] = 1;
        sk.inv_norm2[l] = 1.0 / nd2;
        ++sk.num_active;
      }
    } else {
      sk.alpha[l] = std::numeric_limits<double>::infinity();
    }
  }
  return sk;
}

JacobianSketch build_jacobian_sketch(const ClusterProblem& prob, double sigma,
                                     const Eigen::MatrixXd& Ztilde,
                                     const Eigen::MatrixXd& X) {
  return build_jacobian_sketch_from_D(prob, sigma,
                                      prob.graph.apply_B(X) + Ztilde / sigma);
}

Eigen::MatrixXd jacobian_matvec(const JacobianSketch& sketch,
                                const ClusterProblem& prob, double sigma,
                                const Eigen::MatrixXd& H, long long* edge_work) {
  if (H.rows() != prob.dim() || H.cols() != prob.size())
    throw std::invalid_argument("jacobian_matvec: shape mismatch");
  Eigen::MatrixXd G = prob.graph.apply_B(H);
  // (I - P) columnwise: identity on inactive edges, the shrunken deflection
  //   alpha (G - <D,G>/||D||^2 D) on the active set.
  for (Eigen::Index l = 0; l < G.cols(); ++l) {
    if (sketch.active[static_cast<size_t>(l)]) {
      const double coef = sketch.D.col(l).dot(G.col(l)) * sketch.inv_norm2[l];
      G.col(l) = sketch.alpha[l] * (G.col(l) - coef * sketch.D.col(l));
    }
  }
  Eigen::MatrixXd out = sigma * prob.graph.apply_Bstar(G);
  for (Eigen::Index i = 0; i < prob.size(); ++i)
    out.col(i) += prob.fidelity_at(i) * H.col(i);
  if (edge_work) *edge_work += prob.graph.num_edges() + sketch.num_active;
  return out;
}

Eigen::MatrixXd minimize_phi(const ClusterProblem& prob, double sigma,
                             const Eigen::MatrixXd& Ztilde,
                             const Eigen::MatrixXd& X0, double tol,
                             const SsncgConfig& cfg, SsncgStats& stats) {
  Eigen::MatrixXd X = X0;
  PhiEval eval = phi_with_grad(prob, sigma, Ztilde, X);

  for (int j = 0; j < cfg.max_newton; ++j) {
    const double gnorm = eval.grad.norm();
    if (gnorm <= tol) break;

    const JacobianSketch sketch = build_jacobian_sketch_from_D(prob, sigma, eval.D);

    // Inexact CG for V d = -grad, stopping at min(eta_bar, ||g||^{1+tau}).
    const double cg_tol = std::min(cfg.eta_bar, std::pow(gnorm, 1.0 + cfg.tau));
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(X.rows(), X.cols());
    Eigen::MatrixXd r = -eval.grad;
    Eigen::MatrixXd p = r;
    double rs = r.squaredNorm();
    int cg_it = 0;
    while (std::sqrt(rs) > cg_tol && cg_it < cfg.max_cg) {
      const Eigen::MatrixXd Vp =
          jacobian_matvec(sketch, prob, sigma, p, &stats.edge_work);
      ++stats.matvec_count;
      const double pVp = (p.array() * Vp.array()).sum();
      if (pVp <= 0.0)
        throw std::runtime_error("ssncg: CG operator not positive definite");
      const double step = rs / pVp;
      d += step * p;
      r -= step * Vp;
      const double rs_next = r.squaredNorm();
      p = r + (rs_next / rs) * p;
      rs = rs_next;
      ++cg_it;
    }
    stats.cg_iters += cg_it;
    if (cg_it == 0) d = r;  // gradient step when CG stops immediately

    const double gd = (eval.grad.array() * d.array()).sum();

    // Armijo backtracking.
    double step = 1.0;
    double phi_trial = 0.0;
    Eigen::MatrixXd X_trial;
    bool accepted = false;
    for (int m = 0; m <= cfg.max_backtracks; ++m) {
      X_trial = X + step * d;
      phi_trial = phi_value(prob, sigma, Ztilde, X_trial);
      if (phi_trial <= eval.value + cfg.mu * step * gd) {
        accepted = true;
        break;
      }
      step *= cfg.delta;
    }
    if (!accepted)
      throw std::runtime_error("ssncg: line search failed (gradient/Jacobian inconsistency)");

    X = std::move(X_trial);
    eval = phi_with_grad(prob, sigma, Ztilde, X);
    ++stats.newton_iters;

    if (cfg.trace)
      std::fprintf(stderr, "%d,%.6e,%.12e,%d,%lld,%.3e\n", j, eval.grad.norm(),
                   eval.value, cg_it, static_cast<long long>(sketch.num_active),
                   step);
  }

  stats.grad_norm = eval.grad.norm();
  stats.phi = eval.value;
  stats.converged = stats.grad_norm <= tol;
  return X;
}

}  // namespace sonclust
