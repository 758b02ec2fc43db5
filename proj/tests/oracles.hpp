// Independent reference computations used only by tests. These deliberately
// avoid the code paths they check: reachability by Floyd-Warshall, spectra by
// closed forms or plain power iteration, minimizers by gradient descent, and
// subspace projection by a least-squares solve.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "dadmm/block_ops.hpp"
#include "dadmm/digraph.hpp"
#include "dadmm/objective.hpp"

namespace oracles {

// All-pairs reachability by Floyd-Warshall; true iff strongly connected.
inline bool strongly_connected_bruteforce(const dadmm::DiGraph& g) {
  const int n = g.n;
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (int v = 0; v < n; ++v) reach[v][v] = true;
  for (const auto& [i, j] : g.edges) reach[j][i] = true;  // j sends to i
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (!reach[i][j]) return false;
  return true;
}

// Eigenvalues of a symmetric 1x1, 2x2, or 3x3 matrix by closed form,
// ascending.
inline std::vector<double> symmetric_eigenvalues_closed_form(const Eigen::MatrixXd& M) {
  const int n = static_cast<int>(M.rows());
  if (n == 1) return {M(0, 0)};
  if (n == 2) {
    const double t = 0.5 * (M(0, 0) + M(1, 1));
    const double d = M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0);
    const double disc = std::sqrt(std::max(0.0, t * t - d));
    return {t - disc, t + disc};
  }
  // Trigonometric form for symmetric 3x3.
  const double p1 = M(0, 1) * M(0, 1) + M(0, 2) * M(0, 2) + M(1, 2) * M(1, 2);
  if (p1 == 0.0) {
    std::vector<double> eigs{M(0, 0), M(1, 1), M(2, 2)};
    std::sort(eigs.begin(), eigs.end());
    return eigs;
  }
  const double q = M.trace() / 3.0;
  const double p2 = (M(0, 0) - q) * (M(0, 0) - q) + (M(1, 1) - q) * (M(1, 1) - q) +
                    (M(2, 2) - q) * (M(2, 2) - q) + 2.0 * p1;
  const double p = std::sqrt(p2 / 6.0);
  Eigen::Matrix3d B = (M - q * Eigen::Matrix3d::Identity()) / p;
  const double det_b = B(0, 0) * (B(1, 1) * B(2, 2) - B(1, 2) * B(2, 1)) -
                       B(0, 1) * (B(1, 0) * B(2, 2) - B(1, 2) * B(2, 0)) +
                       B(0, 2) * (B(1, 0) * B(2, 1) - B(1, 1) * B(2, 0));
  const double r = std::clamp(det_b / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * 3.14159265358979323846 / 3.0);
  const double e2 = 3.0 * q - e1 - e3;
  std::vector<double> eigs{e1, e2, e3};
  std::sort(eigs.begin(), eigs.end());
  return eigs;
}

// Top singular value by plain power iteration on M'M.
inline double sigma_max_power_iteration(const Eigen::MatrixXd& M, int iters = 20000) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(M.cols());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) += 1e-3 * static_cast<double>(i + 1);
  v.normalize();
  double sigma = 0.0;
  for (int it = 0; it < iters; ++it) {
    const Eigen::VectorXd u = M * v;
    sigma = u.norm();
    v = M.transpose() * u;
    const double nv = v.norm();
    if (nv == 0.0) return 0.0;
    v /= nv;
  }
  return sigma;
}

// Contraction factor of the cycle-plus-self-loop mixing matrix (I + P)/2 on a
// directed n-cycle, from the circulant spectrum.
inline double cycle_half_mixing_delta(int n) {
  double best = 0.0;
  for (int k = 1; k < n; ++k) {
    const std::complex<double> omega =
        std::polar(1.0, 2.0 * 3.14159265358979323846 * k / n);
    best = std::max(best, std::abs((1.0 + omega) / 2.0));
  }
  return best;
}

// Central finite differences of the objective.
inline Eigen::VectorXd finite_difference_gradient(const dadmm::Objective& obj,
                                                  const Eigen::VectorXd& x,
                                                  double h = 1e-4) {
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe(i) = x(i) + h;
    const double up = obj.eval(probe);
    probe(i) = x(i) - h;
    const double down = obj.eval(probe);
    probe(i) = x(i);
    g(i) = (up - down) / (2.0 * h);
  }
  return g;
}

// Gradient descent to convergence on f(x) + a'x + (rho/2)||x - y||^2.
inline Eigen::VectorXd proximal_minimizer_gd(const dadmm::Objective& obj,
                                             const Eigen::VectorXd& a,
                                             const Eigen::VectorXd& y, double rho) {
  const auto [mu, L] = obj.constants();
  (void)mu;
  const double step = 1.0 / (L + rho);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(a.size());
  const double target = 1e-12 * (1.0 + a.norm() + rho * y.norm());
  for (int it = 0; it < 500000; ++it) {
    const Eigen::VectorXd grad = obj.gradient(x) + a + rho * (x - y);
    if (grad.norm() <= target) break;
    x -= step * grad;
  }
  return x;
}

// Projection of v onto {y : all blocks equal} by least squares against an
// explicit basis of the consensus subspace.
inline Eigen::VectorXd consensus_projection_least_squares(const Eigen::VectorXd& v,
                                                          int n, int m) {
  Eigen::MatrixXd basis = Eigen::MatrixXd::Zero(v.size(), m);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < m; ++l) basis(i * m + l, l) = 1.0;
  const Eigen::VectorXd coeffs = basis.colPivHouseholderQr().solve(v);
  return basis * coeffs;
}

}  // namespace oracles
