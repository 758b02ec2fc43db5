#include "dadmm/baselines.hpp"

#include <cmath>

#include "dadmm/errors.hpp"
#include "runner_detail.hpp"

namespace dadmm {

PandaState make_panda_initial_state(const Objective& obj) {
  PandaState s;
  s.x = StackedVector::Zero(obj.stacked_dim());
  s.x_prev = StackedVector::Zero(obj.stacked_dim());
  s.y = StackedVector::Zero(obj.stacked_dim());
  s.a = StackedVector::Zero(obj.stacked_dim());
  return s;
}

void panda_step(PandaState& s, const Objective& obj, const WeightMatrix& W,
                const PandaParams& params) {
  if (!(params.step > 0.0)) throw InvalidArgument("panda_step: step must be > 0");
  if (W.n != obj.num_agents())
    throw DimensionMismatch("panda_step: weight matrix does not match the agent count");
  const int m = obj.block_dim();

  const StackedVector x_new = obj.x_update_unpenalized(s.a, params.block_regularization);
  // Running average estimate fed by the first-order difference of x.
  s.y = apply_blockwise(W.entries, s.y + x_new - s.x_prev, m);
  s.a += params.step * (x_new - s.y);
  s.x_prev = x_new;
  s.x = x_new;
  s.k += 1;
  s.comm_rounds += 1;
}

ConvergenceTrace run_panda(const Objective& obj, const WeightMatrix& W,
                           const PandaParams& params, const ReferenceSolution& ref,
                           const RunOptions& opts) {
  if (ref.x_star.size() != obj.stacked_dim() || ref.a_star.size() != obj.stacked_dim())
    throw DimensionMismatch("run_panda: reference solution has the wrong dimensions");
  const int n = obj.num_agents(), m = obj.block_dim();

  ConvergenceTrace tr;
  tr.algorithm = "panda";
  tr.params = {{"c", params.step}};

  PandaState s = make_panda_initial_state(obj);
  detail::ResidualMonitor monitor(ref, n, m, s.x);

  auto record = [&](const TraceRow& row, const PandaState& st) {
    tr.rows.push_back(row);
    if (opts.store_iterates) {
      tr.xs.push_back(st.x);
      tr.ys.push_back(st.y);
      tr.as.push_back(st.a);
    }
  };

  const TraceRow first = monitor.measure(0, 0, s.x, &s.a);
  record(first, s);
  if (first.primal_res <= params.stop_tol) {
    tr.reason = StopReason::tolerance;
    return tr;
  }

  tr.reason = StopReason::max_iters;
  for (int k = 1; k <= params.max_iters; ++k) {
    panda_step(s, obj, W, params);
    const TraceRow row = monitor.measure(s.k, s.comm_rounds, s.x, &s.a);
    if (!detail::row_finite(row)) {
      tr.reason = StopReason::diverged;
      break;
    }
    record(row, s);
    if (opts.check_invariants)
      detail::check_zero_block_mean(s.a, n, m, s.k, "panda", "a");
    if (detail::row_exploded(row, first, opts.divergence_factor)) {
      tr.reason = StopReason::diverged;
      break;
    }
    if (row.primal_res <= params.stop_tol) {
      tr.reason = StopReason::tolerance;
      break;
    }
  }
  return tr;
}

Eigen::MatrixXd out_degree_mixing_matrix(const DiGraph& g) {
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(g.n, g.n);
  for (int j = 0; j < g.n; ++j) C(j, j) = 1.0 / (1.0 + g.out_degree(j));
  for (const auto& [i, j] : g.edges) C(i, j) = 1.0 / (1.0 + g.out_degree(j));
  return C;
}

PushDigingState make_pushdiging_initial_state(const Objective& obj) {
  PushDigingState s;
  s.u = StackedVector::Zero(obj.stacked_dim());
  s.z = StackedVector::Zero(obj.stacked_dim());
  s.t = obj.gradient(s.z);
  s.w = Eigen::VectorXd::Ones(obj.num_agents());
  return s;
}

void pushdiging_step(PushDigingState& s, const Objective& obj, const Eigen::MatrixXd& C,
                     double alpha) {
  if (!(alpha > 0.0)) throw InvalidArgument("pushdiging_step: step must be > 0");
  if (C.rows() != obj.num_agents() || C.cols() != obj.num_agents())
    throw DimensionMismatch("pushdiging_step: mixing matrix does not match the agent count");
  const int n = obj.num_agents(), m = obj.block_dim();

  const StackedVector grad_old = obj.gradient(s.z);
  s.u = apply_blockwise(C, s.u - alpha * s.t, m);
  s.w = C * s.w;
  for (int i = 0; i < n; ++i) {
    if (!(s.w(i) > 0.0))
      throw InvariantViolation("pushdiging_step: push-sum weight " + std::to_string(i) +
                               " lost positivity at iteration " + std::to_string(s.k + 1));
    s.z.segment(i * m, m) = s.u.segment(i * m, m) / s.w(i);
  }
  s.t = apply_blockwise(C, s.t, m) + obj.gradient(s.z) - grad_old;
  s.k += 1;
  s.comm_rounds += 2;  // two vector quantities exchanged per iteration
}

ConvergenceTrace run_pushdiging(const Objective& obj, const Eigen::MatrixXd& C,
                                const PushDigingParams& params,
                                const ReferenceSolution& ref, const RunOptions& opts) {
  if (ref.x_star.size() != obj.stacked_dim())
    throw DimensionMismatch("run_pushdiging: reference solution has the wrong dimensions");
  const int n = obj.num_agents(), m = obj.block_dim();

  ConvergenceTrace tr;
  tr.algorithm = "push-diging";
  tr.params = {{"alpha", params.step}};

  PushDigingState s = make_pushdiging_initial_state(obj);
  detail::ResidualMonitor monitor(ref, n, m, s.z);

  auto record = [&](const TraceRow& row, const PushDigingState& st) {
    tr.rows.push_back(row);
    if (opts.store_iterates) {
      tr.xs.push_back(st.z);
      tr.ys.push_back(st.u);
      tr.as.push_back(st.t);
    }
  };

  const TraceRow first = monitor.measure(0, 0, s.z, nullptr);
  record(first, s);
  if (first.primal_res <= params.stop_tol) {
    tr.reason = StopReason::tolerance;
    return tr;
  }

  tr.reason = StopReason::max_iters;
  for (int k = 1; k <= params.max_iters; ++k) {
    pushdiging_step(s, obj, C, params.step);
    const TraceRow row = monitor.measure(s.k, s.comm_rounds, s.z, nullptr);
    if (!detail::row_finite(row) || !s.t.allFinite()) {
      tr.reason = StopReason::diverged;
      break;
    }
    record(row, s);
    if (opts.check_invariants) {
      const double mass_gap = std::abs(s.w.sum() - n);
      if (!(mass_gap <= 1e-10 * std::max(1.0, static_cast<double>(n))))
        throw InvariantViolation("push-diging: push-sum mass drifted by " +
                                 std::to_string(mass_gap) + " at iteration " +
                                 std::to_string(s.k));
      const double tracking_gap =
          (block_mean(s.t, n, m) - block_mean(obj.gradient(s.z), n, m)).norm();
      if (!(tracking_gap <= 1e-8 * (1.0 + s.t.norm())))
        throw InvariantViolation("push-diging: gradient tracker mean drifted by " +
                                 std::to_string(tracking_gap) + " at iteration " +
                                 std::to_string(s.k));
    }
    if (detail::row_exploded(row, first, opts.divergence_factor)) {
      tr.reason = StopReason::diverged;
      break;
    }
    if (row.primal_res <= params.stop_tol) {
      tr.reason = StopReason::tolerance;
      break;
    }
  }
  return tr;
}

}  // namespace dadmm
