#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "sonclust/admm.hpp"
#include "sonclust/dataset.hpp"
#include "sonclust/graph.hpp"
#include "sonclust/ssnal.hpp"

using namespace sonclust;

namespace {

ClusterProblem half_moons(int n, double gamma) {
  SyntheticSpec spec;
  spec.kind = SyntheticKind::two_half_moons;
  spec.n = n;
  spec.seed = 7;
  ClusterProblem prob;
  prob.data = generate(spec);
  prob.graph = build_knn_graph(prob.data, 10, 0.5);
  prob.gamma = gamma;
  return prob;
}

// Closed-form optimum of the two-point problem with weight w:
// with m = (a1+a2)/2 and delta = a1-a2, the optimal difference is
// u = (1 - 2 gamma w / ||delta||)_+ delta and x_{1,2} = m +- u/2.
struct TwoPoint {
  Eigen::MatrixXd A, X_opt;
  TwoPoint(double gamma, double w) {
    A.resize(2, 2);
    A << 1.0, -0.5,
         2.0, 0.0;
    Eigen::Vector2d m = 0.5 * (A.col(0) + A.col(1));
    Eigen::Vector2d delta = A.col(0) - A.col(1);
    double shrink = std::max(0.0, 1.0 - 2.0 * gamma * w / delta.norm());
    Eigen::Vector2d u = shrink * delta;
    X_opt.resize(2, 2);
    X_opt.col(0) = m + 0.5 * u;
    X_opt.col(1) = m - 0.5 * u;
  }
};

}  // namespace

TEST_CASE("two-point problems match the closed form") {
  for (double gamma : {0.1, 0.5, 1.0, 5.0}) {
    const double w = 0.8;
    ClusterProblem prob;
    TwoPoint oracle(gamma, w);
    prob.data.points = oracle.A;
    prob.graph = WeightGraph(2, {{0, 1}}, {w});
    prob.gamma = gamma;
    SsnalConfig cfg;
    cfg.kkt_tol = 1e-10;
    SolveReport rep = solve(prob, std::nullopt, cfg);
    REQUIRE(rep.converged());
    CHECK((rep.state.X - oracle.X_opt).norm() <= 1e-8);
  }
}

TEST_CASE("vanishing gamma returns the data") {
  ClusterProblem prob = half_moons(120, 1e-12);
  SsnalConfig cfg;
  SolveReport rep = solve(prob, std::nullopt, cfg);
  REQUIRE(rep.converged());
  CHECK((rep.state.X - prob.data.points).norm() <= 1e-8);
}

TEST_CASE("huge gamma on a connected graph gives the global mean") {
  ClusterProblem prob = half_moons(120, 1e4);
  SsnalConfig cfg;
  SolveReport rep = solve(prob, std::nullopt, cfg);
  REQUIRE(rep.converged());
  Eigen::VectorXd mean = prob.data.points.rowwise().mean();
  for (Eigen::Index i = 0; i < prob.size(); ++i)
    CHECK((rep.state.X.col(i) - mean).norm() <= 1e-6);
}

TEST_CASE("reported residuals are reproducible from the returned state") {
  ClusterProblem prob = half_moons(200, 3.0);
  SsnalConfig cfg;
  SolveReport rep = solve(prob, std::nullopt, cfg);
  REQUIRE(rep.converged());
  KktResiduals fresh = kkt_residuals(prob, rep.state);
  CHECK(fresh.eta_P == doctest::Approx(rep.residuals.eta_P).epsilon(1e-9));
  CHECK(fresh.eta_D == doctest::Approx(rep.residuals.eta_D).epsilon(1e-9));
  CHECK(fresh.eta == doctest::Approx(rep.residuals.eta).epsilon(1e-9));
  CHECK(fresh.primal_obj ==
        doctest::Approx(primal_objective(prob, rep.state.X)).epsilon(1e-12));
  CHECK(rep.residuals.gap <= 1e-5 * (1.0 + std::abs(fresh.primal_obj)));
}

TEST_CASE("a warm start from ADMM is accepted and converges") {
  ClusterProblem prob = half_moons(200, 3.0);
  IadmmConfig icfg;
  PrimalDualState warm = iadmm_warm_start(prob, 100, icfg);
  SsnalConfig cfg;
  SolveReport rep = solve(prob, warm, cfg);
  REQUIRE(rep.converged());
  CHECK(rep.residuals.max_residual() <= cfg.kkt_tol);
}

TEST_CASE("p != 2 requests route to the ADMM solver") {
  ClusterProblem prob = half_moons(80, 1.0);
  prob.norm = NormKind::one;
  SsnalConfig cfg;
  SolveReport rep = solve(prob, std::nullopt, cfg);
  REQUIRE(rep.converged());
  CHECK(rep.total_newton_iters == 0);
  CHECK(rep.residuals.max_residual() <= cfg.kkt_tol);
}

TEST_CASE("solve_path matches individual solves and warm starts pay off") {
  ClusterProblem prob = half_moons(300, 1.0);
  std::vector<double> gammas = {0.5, 1.0, 2.0, 4.0, 8.0};
  SsnalConfig cfg;
  cfg.kkt_tol = 1e-8;  // tight enough to compare objectives at 1e-6

  ClusteringPath warm = solve_path(prob, gammas, cfg, true, 100);
  ClusteringPath cold = solve_path(prob, gammas, cfg, false, 0);
  REQUIRE(warm.entries.size() == gammas.size());

  int warm_newton = 0, cold_newton = 0;
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    const PathEntry& e = warm.entries[k];
    CHECK(e.gamma == gammas[k]);
    CHECK(e.termination == Termination::kkt_tol_met);
    CHECK(e.residuals.max_residual() <= cfg.kkt_tol);

    ClusterProblem single = prob;
    single.gamma = gammas[k];
    SolveReport rep = solve(single, std::nullopt, cfg);
    REQUIRE(rep.converged());
    CHECK(std::abs(e.primal_obj - primal_objective(single, rep.state.X)) <=
          1e-6 * (1.0 + std::abs(e.primal_obj)));

    warm_newton += e.newton_iters;
    cold_newton += cold.entries[k].newton_iters;
  }
  CHECK(warm_newton <= cold_newton);

  // the half moons carry ground truth, so the path reports a rand index
  for (const PathEntry& e : warm.entries) {
    CHECK(e.rand_index_vs_truth >= 0.0);
    CHECK(e.rand_index_vs_truth <= 1.0);
  }
}

TEST_CASE("cluster counts along a path are sensible at the extremes") {
  ClusterProblem prob = half_moons(200, 1.0);
  std::vector<double> gammas = {1e-6, 50.0};
  SsnalConfig cfg;
  ClusteringPath path = solve_path(prob, gammas, cfg);
  CHECK(path.entries.front().assignment.num_clusters == 200);
  CHECK(path.entries.back().assignment.num_clusters == 1);
}

TEST_CASE("config validation rejects bad parameters") {
  SsnalConfig cfg;
  cfg.sigma0 = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SsnalConfig{};
  cfg.eps_decay = 1.5;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = SsnalConfig{};
  cfg.kkt_tol = -1e-6;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
