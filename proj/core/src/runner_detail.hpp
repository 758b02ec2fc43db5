#pragma once

#include <cmath>
#include <string>

#include "dadmm/block_ops.hpp"
#include "dadmm/errors.hpp"
#include "dadmm/trace.hpp"

namespace dadmm::detail {

// Residual measurement shared by the run loops. The reference solution is
// read here and nowhere else.
struct ResidualMonitor {
  const ReferenceSolution& ref;
  int n, m;
  double denom;  // ||x^0 - x*||; zero means the run starts at the optimum

  ResidualMonitor(const ReferenceSolution& ref_, int n_, int m_, const StackedVector& x0)
      : ref(ref_), n(n_), m(m_), denom((x0 - ref_.x_star).norm()) {}

  TraceRow measure(int k, long rounds, const StackedVector& x, const StackedVector* a) const {
    TraceRow r;
    r.iter = k;
    r.comm_rounds = rounds;
    r.primal_res = denom > 0.0 ? (x - ref.x_star).norm() / denom : 0.0;
    r.dual_res = a ? (*a - ref.a_star).norm() : 0.0;
    r.consensus_res = (x - consensus_average(x, n, m)).norm();
    return r;
  }
};

inline bool row_finite(const TraceRow& r) {
  return std::isfinite(r.primal_res) && std::isfinite(r.dual_res) &&
         std::isfinite(r.consensus_res);
}

// True once any residual has grown `factor` times past its starting scale.
inline bool row_exploded(const TraceRow& r, const TraceRow& first, double factor) {
  auto blown = [factor](double now, double start) {
    return now > factor * std::max(1.0, start);
  };
  return blown(r.primal_res, first.primal_res) || blown(r.dual_res, first.dual_res) ||
         blown(r.consensus_res, first.consensus_res);
}

inline void check_zero_block_mean(const StackedVector& v, int n, int m, int k,
                                  const char* alg, const char* what) {
  const double drift = block_mean(v, n, m).norm();
  if (!(drift <= 1e-9 * (1.0 + v.norm())))
    throw InvariantViolation(std::string(alg) + ": blockwise mean of " + what +
                             " drifted to " + std::to_string(drift) + " at iteration " +
                             std::to_string(k));
}

inline void check_means_agree(const StackedVector& x, const StackedVector& y, int n, int m,
                              int k, const char* alg) {
  const double gap = (block_mean(y, n, m) - block_mean(x, n, m)).norm();
  if (!(gap <= 1e-9 * (1.0 + x.norm())))
    throw InvariantViolation(std::string(alg) +
                             ": blockwise means of x and y disagree by " +
                             std::to_string(gap) + " at iteration " + std::to_string(k));
}

}  // namespace dadmm::detail
