#pragma once

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace dadmm {

enum class StopReason { tolerance, max_iters, diverged };

const char* to_string(StopReason r);

struct TraceRow {
  int iter = 0;
  long comm_rounds = 0;
  double primal_res = 0.0;     // ||x^k - x*|| / ||x^0 - x*||
  double dual_res = 0.0;       // ||a^k - a*|| (zero for primal-only methods)
  double consensus_res = 0.0;  // ||x^k - blockwise average of x^k||
};

struct ConvergenceTrace {
  std::string algorithm;
  std::map<std::string, double> params;
  std::vector<TraceRow> rows;
  StopReason reason = StopReason::max_iters;

  // Full iterate history, populated only under RunOptions::store_iterates.
  std::vector<Eigen::VectorXd> xs, ys, as;

  long final_comm_rounds() const { return rows.empty() ? 0 : rows.back().comm_rounds; }
  double final_primal_res() const { return rows.empty() ? 0.0 : rows.back().primal_res; }
};

// Optimal points used for residual measurement only; no algorithm reads them.
struct ReferenceSolution {
  Eigen::VectorXd x_star;
  Eigen::VectorXd a_star;
};

struct RunOptions {
  bool check_invariants = true;  // conservation identities, throw on violation
  bool store_iterates = false;   // memory-heavy, needed only for diagnostics
  double divergence_factor = 1e12;  // abort when a residual grows this much
};

// Columns: iter,comm_rounds,primal_res,dual_res,consensus_res.
std::string trace_csv_string(const ConvergenceTrace& trace);
void write_trace_csv(const ConvergenceTrace& trace, const std::string& path);
std::vector<TraceRow> read_trace_csv(const std::string& path);
std::vector<TraceRow> parse_trace_csv(const std::string& text);

// 17 significant digits; round-trips IEEE doubles exactly.
std::string format_double(double v);

}  // namespace dadmm
