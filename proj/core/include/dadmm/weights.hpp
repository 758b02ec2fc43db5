#pragma once

#include <Eigen/Dense>
#include <string>

#include "dadmm/digraph.hpp"

namespace dadmm {

// Mixing matrix over a digraph: nonnegative, doubly stochastic, zero outside
// the graph support (self-loops always allowed), with contraction factor
// delta = ||W - 11^T/n||_2 < 1 toward the blockwise average. Immutable after
// construction.
struct WeightMatrix {
  int n = 0;
  Eigen::MatrixXd entries;
  double delta = 0.0;
  DiGraph support;
};

struct Assumption3Report {
  double max_off_support = 0.0;
  double max_row_sum_error = 0.0;
  double max_col_sum_error = 0.0;
  double min_entry = 0.0;
  double delta = 0.0;
  double spectral_norm = 0.0;
  bool support_ok = false;
  bool sums_ok = false;
  bool nonneg_ok = false;
  bool contraction_ok = false;  // delta < 1
  bool norm_ok = false;         // ||W||_2 <= 1 up to roundoff
  bool all_ok() const {
    return support_ok && sums_ok && nonneg_ok && contraction_ok && norm_ok;
  }
};

// Builds W by alternating row/column rescaling of I + adjacency restricted to
// the support, until the worst row/column sum deviation drops below tol.
// Requires strong connectivity.
WeightMatrix build_weight_matrix(const DiGraph& g, double tol = 1e-13,
                                 long max_sweeps = 1000000);

// Largest singular value of W - 11^T/n. Dense decomposition up to n = 200,
// power iteration beyond.
double compute_delta(const Eigen::MatrixXd& W);

// Induced 2-norm (largest singular value).
double spectral_norm_2(const Eigen::MatrixXd& M);

Assumption3Report validate_assumption3(const WeightMatrix& W, double tol = 1e-12);

Eigen::MatrixXd averaging_matrix(int n);  // 11^T / n

// Plain-text dense rows, 17 significant digits. Loading recomputes delta and
// infers the support from the nonzero off-diagonal pattern.
std::string to_matrix_text(const WeightMatrix& W);
void save_weight_matrix(const WeightMatrix& W, const std::string& path);
WeightMatrix load_weight_matrix(const std::string& path);

}  // namespace dadmm
