#include "dadmm/admm.hpp"

#include "dadmm/errors.hpp"
#include "runner_detail.hpp"

namespace dadmm {

AdmmState make_admm_initial_state(const Objective& obj) {
  AdmmState s;
  s.x = StackedVector::Zero(obj.stacked_dim());
  s.y = StackedVector::Zero(obj.stacked_dim());
  s.a = StackedVector::Zero(obj.stacked_dim());
  return s;
}

void admm_step(AdmmState& s, const Objective& obj, const WeightMatrix& W,
               const AdmmParams& params) {
  if (!(params.rho > 0.0)) throw InvalidArgument("admm_step: rho must be > 0");
  if (params.B < 1) throw InvalidArgument("admm_step: B must be >= 1");
  if (W.n != obj.num_agents())
    throw DimensionMismatch("admm_step: weight matrix is " + std::to_string(W.n) +
                            "x" + std::to_string(W.n) + " but objective has " +
                            std::to_string(obj.num_agents()) + " agents");
  const int m = obj.block_dim();

  s.x = obj.x_update(s.a, s.y, params.rho);
  // B mixing rounds starting from the fresh x; W is applied repeatedly, its
  // power is never formed.
  s.y = s.x;
  for (int b = 0; b < params.B; ++b) s.y = apply_blockwise(W.entries, s.y, m);
  s.a += params.rho * (s.x - s.y);
  s.k += 1;
  s.comm_rounds += params.B;
}

StackedVector exact_average_y_update(const StackedVector& x, const StackedVector& a,
                                     double rho, int n, int m) {
  if (!(rho > 0.0)) throw InvalidArgument("exact_average_y_update: rho must be > 0");
  return consensus_average(x + a / rho, n, m);
}

ConvergenceTrace run_admm(const Objective& obj, const WeightMatrix& W,
                          const AdmmParams& params, const ReferenceSolution& ref,
                          const RunOptions& opts) {
  if (ref.x_star.size() != obj.stacked_dim() || ref.a_star.size() != obj.stacked_dim())
    throw DimensionMismatch("run_admm: reference solution has the wrong dimensions");
  const int n = obj.num_agents(), m = obj.block_dim();

  ConvergenceTrace tr;
  tr.algorithm = "admm";
  tr.params = {{"rho", params.rho}, {"B", static_cast<double>(params.B)}};

  AdmmState s = make_admm_initial_state(obj);
  detail::ResidualMonitor monitor(ref, n, m, s.x);

  auto record = [&](const TraceRow& row, const AdmmState& st) {
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
    admm_step(s, obj, W, params);
    const TraceRow row = monitor.measure(s.k, s.comm_rounds, s.x, &s.a);
    if (!detail::row_finite(row)) {
      tr.reason = StopReason::diverged;
      break;
    }
    record(row, s);
    if (opts.check_invariants) {
      detail::check_zero_block_mean(s.a, n, m, s.k, "admm", "a");
      detail::check_means_agree(s.x, s.y, n, m, s.k, "admm");
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
