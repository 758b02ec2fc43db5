#pragma once

#include "dadmm/objective.hpp"
#include "dadmm/trace.hpp"
#include "dadmm/weights.hpp"

namespace dadmm {

// Dual ascent without a proximal term: the primal step minimizes
// f(x) + a'x block by block, one mixing round per iteration feeds a running
// average estimate with first-order iterate differences.
//
// The exact update rules here are as-implemented reconstructions for
// comparison purposes, not reference implementations of the published
// variants; step sizes are pure configuration.
struct PandaParams {
  double step = 1.0;  // dual step size c, > 0
  int max_iters = 1000;
  double stop_tol = 1e-8;
  // Ridge added to every block solve when > 0. The proximal-free primal step
  // needs each block to be strongly convex on its own; this keeps the method
  // runnable on instances where blocks are singular.
  double block_regularization = 0.0;
};

struct PandaState {
  StackedVector x, x_prev, y, a;
  int k = 0;
  long comm_rounds = 0;
};

PandaState make_panda_initial_state(const Objective& obj);
void panda_step(PandaState& state, const Objective& obj, const WeightMatrix& W,
                const PandaParams& params);
ConvergenceTrace run_panda(const Objective& obj, const WeightMatrix& W,
                           const PandaParams& params, const ReferenceSolution& ref,
                           const RunOptions& opts = {});

// Gradient tracking with push-sum debiasing over a column-stochastic mixing
// matrix; two vector exchanges per iteration.
struct PushDigingParams {
  double step = 0.01;  // gradient step size alpha, > 0
  int max_iters = 1000;
  double stop_tol = 1e-8;
};

struct PushDigingState {
  StackedVector u;    // consensus numerator
  StackedVector z;    // debiased iterate u_i / w_i
  StackedVector t;    // gradient tracker
  Eigen::VectorXd w;  // positive push-sum weights, one per agent
  int k = 0;
  long comm_rounds = 0;
};

// C_jj = C_ij = 1/(1 + out_degree(j)) for every receiver i of j, zero
// elsewhere; column-stochastic by construction.
Eigen::MatrixXd out_degree_mixing_matrix(const DiGraph& g);

// u = z = 0, w = 1, t = grad f(0).
PushDigingState make_pushdiging_initial_state(const Objective& obj);
void pushdiging_step(PushDigingState& state, const Objective& obj,
                     const Eigen::MatrixXd& C, double alpha);
ConvergenceTrace run_pushdiging(const Objective& obj, const Eigen::MatrixXd& C,
                                const PushDigingParams& params,
                                const ReferenceSolution& ref,
                                const RunOptions& opts = {});

}  // namespace dadmm
