#pragma once

#include "dadmm/objective.hpp"
#include "dadmm/trace.hpp"
#include "dadmm/weights.hpp"

namespace dadmm {

struct AdmmParams {
  double rho = 1.0;  // penalty weight of the proximal term, > 0
  int B = 1;         // communication rounds per iteration, >= 1
  int max_iters = 1000;
  double stop_tol = 1e-8;  // on the relative primal residual
};

struct AdmmState {
  StackedVector x, y, a;
  int k = 0;
  long comm_rounds = 0;
};

// x = y = a = 0.
AdmmState make_admm_initial_state(const Objective& obj);

// One iteration: proximal x-update, B blockwise mixing rounds for the
// y-update (W applied repeatedly, never raised to a power), then the dual
// step a += rho (x - y).
void admm_step(AdmmState& state, const Objective& obj, const WeightMatrix& W,
               const AdmmParams& params);

// The exact-averaging y target that the B mixing rounds approximate:
// blockwise average of x + a/rho, replicated.
StackedVector exact_average_y_update(const StackedVector& x, const StackedVector& a,
                                     double rho, int n, int m);

// Runs until the relative primal residual reaches stop_tol, max_iters is hit,
// or divergence is detected. Checks the dual-mean and average-agreement
// conservation identities every iteration unless disabled.
ConvergenceTrace run_admm(const Objective& obj, const WeightMatrix& W,
                          const AdmmParams& params, const ReferenceSolution& ref,
                          const RunOptions& opts = {});

}  // namespace dadmm
