#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dadmm/admm.hpp"
#include "dadmm/baselines.hpp"
#include "dadmm/objective.hpp"
#include "dadmm/theory.hpp"

namespace dadmm {

struct GraphSpec {
  std::string file;  // takes precedence when non-empty
  int n = 0;
  double p = 0.0;
  std::optional<std::uint64_t> seed;
};

struct ObjectiveSpec {
  std::string file;
  int n = 0, m = 0, p_rows = 0;
  std::optional<std::uint64_t> seed;
};

struct AlgorithmConfig {
  std::string alg;  // "admm" | "panda" | "push-diging"
  // Fixed parameters, used when the matching grids are empty.
  double rho = 1.0;
  int B = 1;
  double step = 0.1;
  double block_regularization = 0.0;  // panda only
  // Sweep grids. Empty grids mean fixed parameters under compare() and the
  // documented defaults under sweep_algorithm().
  std::vector<double> rho_grid;
  std::vector<int> B_grid;
  std::vector<double> step_grid;
};

struct ExperimentConfig {
  GraphSpec graph;
  ObjectiveSpec objective;
  std::vector<AlgorithmConfig> algorithms;
  double stop_tol = 1e-6;
  int max_iters = 100000;
  long round_budget = 0;   // 0 = unbounded; otherwise caps comm rounds per run
  std::uint64_t seed = 0;  // fallback for generator specs without their own
  std::string out_dir = ".";
};

ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

// A fully materialized problem instance, shared verbatim by every algorithm.
struct Instance {
  DiGraph graph;
  std::uint64_t graph_seed_requested = 0, graph_seed_used = 0;
  WeightMatrix W;
  QuadraticObjective objective;
  ReferenceSolution ref;
  std::string instance_hash;  // over serialized graph + objective
  std::string w_hash;
};

Instance materialize(const ExperimentConfig& config);

std::vector<double> default_rho_grid();   // log-spaced 1e-3 .. 1e3, 13 points
std::vector<int> default_B_grid();        // {1, 2, 4, 8}
std::vector<double> default_step_grid();  // log-spaced 1e-6 .. 1, 13 points

struct SweepEntry {
  std::map<std::string, double> params;
  long rounds_to_tol = 0;  // LONG_MAX sentinel when the tolerance was not hit
  bool converged = false;
  StopReason reason = StopReason::max_iters;
};

struct SweepResult {
  std::string alg;
  std::vector<SweepEntry> entries;  // grid order by ascending parameter tuple
  SweepEntry best;
};

// Runs every grid point and returns the argmin of rounds-to-tolerance, ties
// broken toward the smallest parameter tuple. Throws AllDiverged when no
// point converges.
SweepResult sweep_algorithm(const Instance& inst, const AlgorithmConfig& alg,
                            double stop_tol, int max_iters, long round_budget = 0);
std::string sweep_csv_string(const SweepResult& r);
void write_sweep_csv(const SweepResult& r, const std::string& path);

struct ComparisonArm {
  std::string alg;
  std::map<std::string, double> params;
  ConvergenceTrace trace;
  std::string error;  // non-empty when this arm failed
  long rounds_to_tol = 0;
  bool converged = false;
};

struct ComparisonBundle {
  std::vector<ComparisonArm> arms;
  std::string instance_hash, w_hash;
};

// Tunes every arm that carries grids, runs all arms on the identical
// instance, and (when config.out_dir is non-empty) writes per-arm trace CSVs,
// the overlay chart, and meta.json. Per-arm failures are recorded in the arm
// rather than aborting the bundle. Requires at least two arms.
ComparisonBundle compare(const Instance& inst, const ExperimentConfig& config);

struct RateFit {
  double lambda_hat = 0.0;
  double fit_residual = 0.0;  // RMS of the log-space linear fit
  bool nongeometric = false;
};

// Least-squares slope of log primal residual against iteration over the
// final two thirds of the trace. Needs at least 10 usable rows.
RateFit fit_rate(const ConvergenceTrace& trace, double nongeometric_threshold = 0.02);

// comm_rounds of the first row at or below tol; LONG_MAX when never reached.
long rounds_to_tolerance(const ConvergenceTrace& trace, double tol);

std::string fnv1a_hex(std::string_view bytes);

// meta.json payload shared by the CLI commands; returns the JSON text.
std::string meta_json(const std::string& operation,
                      const std::map<std::string, std::string>& fields);

}  // namespace dadmm
