#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dadmm/block_ops.hpp"

namespace dadmm {

// Separable objective f(x) = sum_i f_i(x_i) over stacked agent blocks.
// Evaluation members are pure; implementations must be safe to call
// concurrently, and per-agent subproblems must stay independent.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual int num_agents() const = 0;
  virtual int block_dim() const = 0;
  int stacked_dim() const { return num_agents() * block_dim(); }

  virtual double eval(const StackedVector& x) const = 0;
  virtual StackedVector gradient(const StackedVector& x) const = 0;

  // argmin_x f(x) + a'x + (rho/2)||x - y||^2, solved exactly block by block.
  virtual StackedVector x_update(const StackedVector& a, const StackedVector& y,
                                 double rho) const = 0;

  // argmin_x f(x) + a'x, the proximal-free primal step of dual ascent. Needs
  // every block to be strongly convex on its own; regularization > 0 switches
  // to a ridge-stabilized solve instead of failing on singular blocks.
  virtual StackedVector x_update_unpenalized(const StackedVector& a,
                                             double regularization = 0.0) const = 0;

  // {mu, L}: strong-convexity modulus and gradient Lipschitz constant of f.
  virtual std::pair<double, double> constants() const = 0;
};

// f_i(x_i) = ||H_i x_i - g_i||^2 with H_i in R^{p x m}, g_i in R^p.
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(std::vector<Eigen::MatrixXd> H, std::vector<Eigen::VectorXd> g);

  int num_agents() const override { return n_; }
  int block_dim() const override { return m_; }
  int rows_per_agent() const { return p_; }
  const Eigen::MatrixXd& H(int i) const { return H_[static_cast<std::size_t>(i)]; }
  const Eigen::VectorXd& g(int i) const { return g_[static_cast<std::size_t>(i)]; }
  double mu() const { return mu_; }
  double L() const { return L_; }

  double eval(const StackedVector& x) const override;
  StackedVector gradient(const StackedVector& x) const override;
  StackedVector x_update(const StackedVector& a, const StackedVector& y,
                         double rho) const override;
  StackedVector x_update_unpenalized(const StackedVector& a,
                                     double regularization = 0.0) const override;
  std::pair<double, double> constants() const override { return {mu_, L_}; }

  struct CentralizedSolution {
    Eigen::VectorXd consensus;  // shared minimizer z* in R^m
    StackedVector x_star;       // z* replicated across agents
    StackedVector a_star;       // -grad f(x*); blockwise mean is zero
  };
  // Solves the aggregated normal equations. Requires sum_i H_i'H_i
  // nonsingular; individual blocks may be rank-deficient.
  CentralizedSolution centralized_solve() const;

 private:
  void check_dim(const StackedVector& v, const char* what) const;

  int n_ = 0, m_ = 0, p_ = 0;
  std::vector<Eigen::MatrixXd> H_;
  std::vector<Eigen::VectorXd> g_;
  std::vector<Eigen::MatrixXd> quad_;  // 2 H_i'H_i
  std::vector<Eigen::VectorXd> lin_;   // 2 H_i'g_i
  std::vector<double> block_eig_min_, block_eig_max_;  // spectra of 2 H_i'H_i
  double mu_ = 0.0, L_ = 0.0;
};

// Entries of every H_i and g_i are i.i.d. standard normal under the seeded
// generator; identical (n, m, p, seed) reproduce the identical instance.
QuadraticObjective generate_random_objective(int n, int m, int p, std::uint64_t seed);

// Single JSON document: n, m, p header plus per-agent H_i (row-major) and g_i.
std::string to_json_string(const QuadraticObjective& obj);
void save_objective(const QuadraticObjective& obj, const std::string& path);
QuadraticObjective load_objective(const std::string& path);

}  // namespace dadmm
