// sonclust: generate data, solve weighted sum-of-norms clustering instances,
// sweep regularization paths, compute recovery bounds, evaluate clusterings.
//
// Exit codes: 0 success, 1 usage, 2 I/O, 3 solver-not-converged.

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sonclust/admm.hpp"
#include "sonclust/dataset.hpp"
#include "sonclust/graph.hpp"
#include "sonclust/problem.hpp"
#include "sonclust/ssnal.hpp"
#include "sonclust/theory.hpp"

namespace {

using json = nlohmann::json;
using namespace sonclust;

constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitNotConverged = 3;

NormKind parse_norm(const std::string& p) {
  if (p == "1") return NormKind::one;
  if (p == "2") return NormKind::two;
  if (p == "inf") return NormKind::inf;
  throw CLI::ValidationError("--p must be one of 1, 2, inf");
}

SyntheticKind parse_kind(const std::string& kind) {
  if (kind == "two_half_moons") return SyntheticKind::two_half_moons;
  if (kind == "gaussian_blobs") return SyntheticKind::gaussian_blobs;
  if (kind == "unbalanced_gaussian") return SyntheticKind::unbalanced_gaussian;
  if (kind == "semi_spherical_shells") return SyntheticKind::semi_spherical_shells;
  throw CLI::ValidationError("unknown --kind " + kind);
}

// Accepts "start:step:stop" or a comma-separated list.
std::vector<double> parse_gammas(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double start, step, stop;
    char c1, c2;
    std::istringstream in(text);
    if (!(in >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':')
      throw CLI::ValidationError("--gammas expects start:step:stop or a list");
    if (step <= 0.0) throw CLI::ValidationError("--gammas step must be positive");
    for (double g = start; g <= stop + 1e-12 * step; g += step) out.push_back(g);
  } else {
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
      if (!tok.empty()) out.push_back(std::stod(tok));
    }
  }
  if (out.empty()) throw CLI::ValidationError("--gammas produced an empty list");
  return out;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << body;
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_json(const std::string& path, const json& j) {
  write_file(path, j.dump(2) + "\n");
}

std::string csv_matrix(const Eigen::MatrixXd& M) {
  std::ostringstream out;
  out.precision(17);
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
      if (c) out << ',';
      out << M(r, c);
    }
    out << '\n';
  }
  return out.str();
}

json report_json(const SolveReport& rep, const std::string& solver) {
  return json{{"schema", "v1"},
              {"solver", solver},
              {"eta_P", rep.residuals.eta_P},
              {"eta_D", rep.residuals.eta_D},
              {"eta", rep.residuals.eta},
              {"primal_obj", rep.residuals.primal_obj},
              {"dual_obj", rep.residuals.dual_obj},
              {"gap", rep.residuals.gap},
              {"outer_iters", rep.outer_iters},
              {"newton_iters", rep.total_newton_iters},
              {"cg_iters", rep.total_cg_iters},
              {"wall_time", rep.wall_time},
              {"termination", to_string(rep.termination)}};
}

struct GraphFlags {
  int k = 10;
  double phi = 0.5;

  void attach(CLI::App* cmd) {
    cmd->add_option("--k", k, "neighbors per point for the kNN graph")
        ->default_val(10);
    cmd->add_option("--phi", phi, "Gaussian weight decay exp(-phi d^2)")
        ->default_val(0.5);
  }
};

Dataset load_or_die(const std::string& path, bool has_labels) {
  try {
    return load_csv(path, has_labels);
  } catch (const std::exception& e) {
    std::cerr << "error reading " << path << ": " << e.what() << "\n";
    std::exit(kExitIo);
  }
}

int cmd_generate(const std::string& kind, int n, std::uint64_t seed,
                 double noise, const std::string& out_path) {
  SyntheticSpec spec;
  spec.kind = parse_kind(kind);
  spec.n = n;
  spec.seed = seed;
  spec.noise = noise;
  if (spec.kind == SyntheticKind::unbalanced_gaussian)
    spec = unbalanced_gaussian_spec(n, seed);
  else if (spec.kind == SyntheticKind::gaussian_blobs && spec.centers.size() == 0)
    spec = five_blob_spec(n, seed);

  Dataset data = generate(spec);
  save_csv(data, out_path);

  json desc{{"schema", "v1"}, {"kind", kind},        {"n", data.size()},
            {"d", data.dim()}, {"seed", seed},        {"noise", noise},
            {"file", out_path}, {"has_labels", data.labels.has_value()}};
  write_json(out_path + ".json", desc);
  return 0;
}

SolveReport run_solver(const ClusterProblem& prob, const std::string& solver,
                       double tol) {
  if (solver == "admm" || prob.norm != NormKind::two) {
    IadmmConfig cfg;
    cfg.max_iters = 200000;
    return solve_admm(prob, cfg, tol);
  }
  SsnalConfig cfg;
  cfg.kkt_tol = tol;
  return solve(prob, std::nullopt, cfg);
}

int cmd_solve(const std::string& input, bool has_labels, double gamma,
              const GraphFlags& gf, const std::string& p, double tol,
              const std::string& solver, const std::string& out_prefix) {
  Dataset data = load_or_die(input, has_labels);

  ClusterProblem prob;
  prob.data = data;
  prob.graph = build_knn_graph(data, gf.k, gf.phi);
  prob.gamma = gamma;
  prob.norm = parse_norm(p);

  SolveReport rep = run_solver(prob, solver, tol);
  ClusterAssignment assign = extract_clusters(prob, rep.state.X);

  std::ostringstream labels_csv;
  labels_csv << "index,label\n";
  for (std::size_t i = 0; i < assign.labels.size(); ++i)
    labels_csv << i << ',' << assign.labels[i] << '\n';
  write_file(out_prefix + "_labels.csv", labels_csv.str());
  write_file(out_prefix + "_centroids.csv", csv_matrix(rep.state.X));

  json j = report_json(rep, solver);
  j["gamma"] = gamma;
  j["k"] = gf.k;
  j["phi"] = gf.phi;
  j["p"] = p;
  j["num_clusters"] = assign.num_clusters;
  if (data.labels)
    j["rand_index"] = rand_index(assign.labels, *data.labels);
  write_json(out_prefix + "_report.json", j);

  std::cout << "K=" << assign.num_clusters << " eta=" << rep.residuals.max_residual()
            << " (" << to_string(rep.termination) << ")\n";
  return rep.converged() ? 0 : kExitNotConverged;
}

int cmd_path(const std::string& input, bool has_labels, const std::string& gammas_text,
             const GraphFlags& gf, const std::string& p, double tol,
             bool warm_start, const std::string& out_prefix) {
  Dataset data = load_or_die(input, has_labels);
  std::vector<double> gammas = parse_gammas(gammas_text);

  ClusterProblem prob;
  prob.data = data;
  prob.graph = build_knn_graph(data, gf.k, gf.phi);
  prob.norm = parse_norm(p);

  SsnalConfig cfg;
  cfg.kkt_tol = tol;
  ClusteringPath path = solve_path(prob, gammas, cfg, warm_start);
  path.dataset_name = data.name;
  path.knn_k = gf.k;
  path.gaussian_phi = gf.phi;

  std::ostringstream plot;
  plot.precision(17);
  plot << "gamma,K,primal_obj,wall_time,rand_index,eta\n";
  json entries = json::array();
  bool all_ok = true;
  for (const PathEntry& e : path.entries) {
    plot << e.gamma << ',' << e.assignment.num_clusters << ',' << e.primal_obj
         << ',' << e.wall_time << ',' << e.rand_index_vs_truth << ','
         << e.residuals.max_residual() << '\n';
    entries.push_back({{"gamma", e.gamma},
                       {"K", e.assignment.num_clusters},
                       {"primal_obj", e.primal_obj},
                       {"outer_iters", e.outer_iters},
                       {"newton_iters", e.newton_iters},
                       {"cg_iters", e.cg_iters},
                       {"wall_time", e.wall_time},
                       {"rand_index", e.rand_index_vs_truth},
                       {"eta", e.residuals.max_residual()},
                       {"termination", to_string(e.termination)}});
    all_ok = all_ok && e.termination == Termination::kkt_tol_met;

    std::ostringstream labels_csv;
    labels_csv << "index,label\n";
    for (std::size_t i = 0; i < e.assignment.labels.size(); ++i)
      labels_csv << i << ',' << e.assignment.labels[i] << '\n';
    std::ostringstream name;
    name << out_prefix << "_gamma" << e.gamma << "_labels.csv";
    write_file(name.str(), labels_csv.str());
  }
  write_file(out_prefix + "_path.csv", plot.str());
  write_json(out_prefix + "_path.json",
             json{{"schema", "v1"},
                  {"dataset", data.name},
                  {"k", gf.k},
                  {"phi", gf.phi},
                  {"p", p},
                  {"warm_start", warm_start},
                  {"entries", entries}});
  std::cout << path.entries.size() << " solves written to " << out_prefix
            << "_path.csv\n";
  return all_ok ? 0 : kExitNotConverged;
}

int cmd_bounds(const std::string& input, const GraphFlags& gf,
               const std::string& q, const std::string& out_path) {
  Dataset data = load_or_die(input, true);
  if (!data.labels) {
    std::cerr << "error: labels required\n";
    return kExitUsage;
  }
  WeightGraph graph = build_knn_graph(data, gf.k, gf.phi);
  graph = add_within_cluster_edges(graph, data, *data.labels, gf.phi);

  json j{{"schema", "v1"}, {"k", gf.k}, {"phi", gf.phi}, {"q", q}};
  try {
    RecoveryBounds b = recovery_bounds(data, *data.labels, graph, parse_norm(q));
    j["gamma_min"] = b.gamma_min;
    j["gamma_max"] = b.gamma_max;
    j["coarsening_upper"] = b.coarsening_upper;
    j["feasible"] = b.feasible;
    std::cout << "gamma_min=" << b.gamma_min << " gamma_max=" << b.gamma_max
              << " feasible=" << (b.feasible ? "true" : "false") << "\n";
  } catch (const RecoveryAssumptionError& e) {
    j["error"] = e.what();
    std::cerr << "assumption violated: " << e.what() << "\n";
    write_json(out_path, j);
    return kExitNotConverged;
  }
  write_json(out_path, j);
  return 0;
}

std::vector<int> load_label_column(const std::string& path) {
  Dataset d = load_or_die(path, true);
  if (d.labels) return *d.labels;
  // Single-column files parse as unlabeled 1-feature data; use the values.
  if (d.dim() == 1) {
    std::vector<int> labels(d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i)
      labels[i] = static_cast<int>(d.points(0, i));
    return labels;
  }
  std::cerr << "error: " << path << " has no label column\n";
  std::exit(kExitIo);
}

int cmd_eval(const std::string& pred_path, const std::string& truth_path,
             int kmeans_k, const std::string& data_path, std::uint64_t seed) {
  std::vector<int> truth = load_label_column(truth_path);
  std::vector<int> pred = load_label_column(pred_path);
  if (pred.size() != truth.size()) {
    std::cerr << "error: label length mismatch (" << pred.size() << " vs "
              << truth.size() << ")\n";
    return kExitUsage;
  }
  json j{{"schema", "v1"}, {"rand_index", rand_index(pred, truth)}};
  std::cout << "rand_index=" << rand_index(pred, truth) << "\n";
  if (kmeans_k > 0) {
    if (data_path.empty()) {
      std::cerr << "error: --kmeans requires --data\n";
      return kExitUsage;
    }
    Dataset data = load_or_die(data_path, false);
    ClusterAssignment km = kmeans_lloyd(data, kmeans_k, seed);
    j["kmeans_rand_index"] = rand_index(km.labels, truth);
    std::cout << "kmeans_rand_index=" << rand_index(km.labels, truth) << "\n";
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted sum-of-norms convex clustering"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "write a synthetic dataset CSV");
  std::string gen_kind, gen_out = "data.csv";
  int gen_n = 1000;
  std::uint64_t gen_seed = 0;
  double gen_noise = 0.1;
  gen->add_option("--kind", gen_kind,
                  "two_half_moons|gaussian_blobs|unbalanced_gaussian|"
                  "semi_spherical_shells")
      ->required();
  gen->add_option("--n", gen_n, "number of points")->default_val(1000);
  gen->add_option("--seed", gen_seed, "RNG seed")->default_val(0);
  gen->add_option("--noise", gen_noise, "noise stddev (half moons)")
      ->default_val(0.1);
  gen->add_option("--out", gen_out, "output CSV path")->default_val("data.csv");

  // solve
  auto* sol = app.add_subcommand("solve", "solve one instance");
  std::string sol_in, sol_p = "2", sol_solver = "ssnal", sol_out = "solve";
  bool sol_labels = false;
  double sol_gamma = 1.0, sol_tol = 1e-6;
  GraphFlags sol_gf;
  sol->add_option("--input", sol_in, "dataset CSV")->required();
  sol->add_flag("--labels", sol_labels, "last/'label' column is ground truth");
  sol->add_option("--gamma", sol_gamma, "regularization strength")->required();
  sol_gf.attach(sol);
  sol->add_option("--p", sol_p, "regularizer norm: 1, 2, or inf")->default_val("2");
  sol->add_option("--tol", sol_tol, "KKT tolerance")->default_val(1e-6);
  sol->add_option("--solver", sol_solver, "ssnal or admm")
      ->default_val("ssnal")
      ->check(CLI::IsMember({"ssnal", "admm"}));
  sol->add_option("--out", sol_out, "output file prefix")->default_val("solve");

  // path
  auto* pth = app.add_subcommand("path", "solve a gamma sweep");
  std::string pth_in, pth_gammas, pth_p = "2", pth_out = "path";
  bool pth_labels = false, pth_no_warm = false;
  double pth_tol = 1e-6;
  GraphFlags pth_gf;
  pth->add_option("--input", pth_in, "dataset CSV")->required();
  pth->add_flag("--labels", pth_labels, "last/'label' column is ground truth");
  pth->add_option("--gammas", pth_gammas, "start:step:stop or comma list")
      ->required();
  pth_gf.attach(pth);
  pth->add_option("--p", pth_p, "regularizer norm: 1, 2, or inf")->default_val("2");
  pth->add_option("--tol", pth_tol, "KKT tolerance")->default_val(1e-6);
  pth->add_flag("--no-warm-start", pth_no_warm, "solve each gamma cold");
  pth->add_option("--out", pth_out, "output file prefix")->default_val("path");

  // bounds
  auto* bnd = app.add_subcommand("bounds", "perfect-recovery interval");
  std::string bnd_in, bnd_q = "2", bnd_out = "bounds.json";
  GraphFlags bnd_gf;
  bnd->add_option("--input", bnd_in, "labeled dataset CSV")->required();
  bnd_gf.attach(bnd);
  bnd->add_option("--q", bnd_q, "dual norm: 1, 2, or inf")->default_val("2");
  bnd->add_option("--out", bnd_out, "output JSON path")->default_val("bounds.json");

  // eval
  auto* evl = app.add_subcommand("eval", "Rand index between two labelings");
  std::string evl_pred, evl_truth, evl_data;
  int evl_kmeans = 0;
  std::uint64_t evl_seed = 0;
  evl->add_option("--pred", evl_pred, "predicted labels CSV")->required();
  evl->add_option("--truth", evl_truth, "ground-truth labels CSV")->required();
  evl->add_option("--kmeans", evl_kmeans, "also run K-means with this K")
      ->default_val(0);
  evl->add_option("--data", evl_data, "dataset CSV for the K-means baseline");
  evl->add_option("--seed", evl_seed, "K-means seed")->default_val(0);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (gen->parsed())
      return cmd_generate(gen_kind, gen_n, gen_seed, gen_noise, gen_out);
    if (sol->parsed())
      return cmd_solve(sol_in, sol_labels, sol_gamma, sol_gf, sol_p, sol_tol,
                       sol_solver, sol_out);
    if (pth->parsed())
      return cmd_path(pth_in, pth_labels, pth_gammas, pth_gf, pth_p, pth_tol,
                      !pth_no_warm, pth_out);
    if (bnd->parsed()) return cmd_bounds(bnd_in, bnd_gf, bnd_q, bnd_out);
    if (evl->parsed())
      return cmd_eval(evl_pred, evl_truth, evl_kmeans, evl_data, evl_seed);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const CsvError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
