#include "dadmm/weights.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dadmm/errors.hpp"
#include "dadmm/rng.hpp"
#include "dadmm/trace.hpp"

namespace dadmm {

Eigen::MatrixXd averaging_matrix(int n) {
  return Eigen::MatrixXd::Constant(n, n, 1.0 / n);
}

double spectral_norm_2(const Eigen::MatrixXd& M) {
  if (M.rows() == 0) return 0.0;
  if (M.rows() <= 200 && M.cols() <= 200) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
    return svd.singularValues()(0);
  }
  // Power iteration on M'M for large matrices; deterministic start vector.
  Rng rng(0x5eedULL);
  Eigen::VectorXd v(M.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < 200000; ++it) {
    Eigen::VectorXd u = M * v;
    const double next = u.norm();
    v = M.transpose() * u;
    const double vn = v.norm();
    if (vn == 0.0) return 0.0;
    v /= vn;
    if (std::abs(next - sigma) <= 1e-13 * std::max(1.0, next) && it > 2) return next;
    sigma = next;
  }
  return sigma;
}

double compute_delta(const Eigen::MatrixXd& W) {
  if (W.rows() != W.cols()) throw DimensionMismatch("compute_delta: matrix must be square");
  const int n = static_cast<int>(W.rows());
  return spectral_norm_2(W - averaging_matrix(n));
}

WeightMatrix build_weight_matrix(const DiGraph& g, double tol, long max_sweeps) {
  if (tol <= 0.0) throw InvalidArgument("build_weight_matrix: tol must be > 0");
  if (!is_strongly_connected(g))
    throw NotStronglyConnected(
        "build_weight_matrix: a doubly stochastic support needs a strongly connected graph");

  const int n = g.n;
  Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
  for (const auto& [i, j] : g.edges) A(i, j) = 1.0;

  // Alternate row and column rescaling on the fixed support. Zero entries
  // stay exactly zero; all others stay positive.
  bool converged = false;
  for (long sweep = 0; sweep < max_sweeps; ++sweep) {
    for (int i = 0; i < n; ++i) A.row(i) /= A.row(i).sum();
    for (int j = 0; j < n; ++j) A.col(j) /= A.col(j).sum();
    double dev = 0.0;
    for (int i = 0; i < n; ++i) dev = std::max(dev, std::abs(A.row(i).sum() - 1.0));
    if (dev < tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw NoConvergence("build_weight_matrix: scaling did not reach tol = " +
                        std::to_string(tol) + " within " + std::to_string(max_sweeps) +
                        " sweeps (degenerate support?)");

  WeightMatrix W;
  W.n = n;
  W.entries = std::move(A);
  W.delta = compute_delta(W.entries);
  W.support = g;
  if (!(W.delta < 1.0))
    throw AssumptionViolated("build_weight_matrix: contraction factor delta = " +
                             std::to_string(W.delta) + " is not < 1");
  return W;
}

Assumption3Report validate_assumption3(const WeightMatrix& W, double tol) {
  Assumption3Report r;
  const int n = W.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i != j && !W.support.has_edge(i, j))
        r.max_off_support = std::max(r.max_off_support, std::abs(W.entries(i, j)));
    }
  for (int i = 0; i < n; ++i)
    r.max_row_sum_error = std::max(r.max_row_sum_error, std::abs(W.entries.row(i).sum() - 1.0));
  for (int j = 0; j < n; ++j)
    r.max_col_sum_error = std::max(r.max_col_sum_error, std::abs(W.entries.col(j).sum() - 1.0));
  r.min_entry = W.entries.minCoeff();
  r.delta = compute_delta(W.entries);
  r.spectral_norm = spectral_norm_2(W.entries);

  r.support_ok = r.max_off_support <= tol;
  r.sums_ok = r.max_row_sum_error <= tol && r.max_col_sum_error <= tol;
  r.nonneg_ok = r.min_entry >= -tol;
  r.contraction_ok = r.delta < 1.0;
  r.norm_ok = r.spectral_norm <= 1.0 + 1e-12;
  return r;
}

std::string to_matrix_text(const WeightMatrix& W) {
  std::ostringstream out;
  out << W.n << "\n";
  for (int i = 0; i < W.n; ++i) {
    for (int j = 0; j < W.n; ++j) {
      if (j) out << " ";
      out << format_double(W.entries(i, j));
    }
    out << "\n";
  }
  return out.str();
}

void save_weight_matrix(const WeightMatrix& W, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("save_weight_matrix: cannot open " + path);
  out << to_matrix_text(W);
  if (!out.good()) throw IoError("save_weight_matrix: write failed for " + path);
}

WeightMatrix load_weight_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("load_weight_matrix: cannot open " + path);
  int n = 0;
  if (!(in >> n) || n < 1) throw IoError("load_weight_matrix: bad dimension header in " + path);
  Eigen::MatrixXd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!(in >> M(i, j))) throw IoError("load_weight_matrix: truncated matrix in " + path);

  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && M(i, j) != 0.0) edges.emplace_back(i, j);

  WeightMatrix W;
  W.n = n;
  W.entries = std::move(M);
  W.delta = compute_delta(W.entries);
  W.support = make_digraph(n, std::move(edges));
  return W;
}

}  // namespace dadmm
