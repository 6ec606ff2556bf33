#pragma once

#include <string>

#include "sonclust/problem.hpp"

namespace sonclust {

enum class Termination { kkt_tol_met, max_iters, stagnation };

std::string to_string(Termination t);

struct SolveReport {
  PrimalDualState state;
  KktResiduals residuals;
  int outer_iters = 0;
  int total_newton_iters = 0;
  int total_cg_iters = 0;
  long long edge_work = 0;     // summed per-matvec |E| + |E_active|
  long long matvec_count = 0;
  double wall_time = 0.0;      // seconds
  Termination termination = Termination::max_iters;

  bool converged() const { return termination == Termination::kkt_tol_met; }
};

}  // namespace sonclust
