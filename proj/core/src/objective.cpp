#include "dadmm/objective.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "dadmm/errors.hpp"
#include "dadmm/fsio.hpp"
#include "dadmm/rng.hpp"

namespace dadmm {

QuadraticObjective::QuadraticObjective(std::vector<Eigen::MatrixXd> H,
                                       std::vector<Eigen::VectorXd> g)
    : H_(std::move(H)), g_(std::move(g)) {
  if (H_.empty() || H_.size() != g_.size())
    throw DimensionMismatch("objective: need one (H_i, g_i) pair per agent");
  n_ = static_cast<int>(H_.size());
  p_ = static_cast<int>(H_[0].rows());
  m_ = static_cast<int>(H_[0].cols());
  if (p_ < 1 || m_ < 1) throw DimensionMismatch("objective: H_1 must be nonempty");
  for (int i = 0; i < n_; ++i) {
    if (H_[i].rows() != p_ || H_[i].cols() != m_ || g_[i].size() != p_)
      throw DimensionMismatch("objective: inconsistent dimensions at agent " +
                              std::to_string(i));
  }

  quad_.reserve(n_);
  lin_.reserve(n_);
  block_eig_min_.reserve(n_);
  block_eig_max_.reserve(n_);
  double eig_min = 0.0, eig_max = 0.0;
  for (int i = 0; i < n_; ++i) {
    quad_.push_back(2.0 * H_[i].transpose() * H_[i]);
    lin_.push_back(2.0 * H_[i].transpose() * g_[i]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(quad_.back());
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    block_eig_min_.push_back(lo);
    block_eig_max_.push_back(hi);
    eig_min = i == 0 ? lo : std::min(eig_min, lo);
    eig_max = i == 0 ? hi : std::max(eig_max, hi);
  }
  L_ = eig_max;
  if (!(L_ > 0.0)) throw InvalidArgument("objective: all H_i are zero, no curvature");
  // Eigenvalues below the numerical noise floor count as exactly zero.
  mu_ = eig_min <= 1e-12 * L_ ? 0.0 : eig_min;
}

void QuadraticObjective::check_dim(const StackedVector& v, const char* what) const {
  if (v.size() != static_cast<Eigen::Index>(n_) * m_)
    throw DimensionMismatch(std::string(what) + ": expected stacked length " +
                            std::to_string(n_ * m_) + ", got " + std::to_string(v.size()));
}

double QuadraticObjective::eval(const StackedVector& x) const {
  check_dim(x, "eval");
  double total = 0.0;
  for (int i = 0; i < n_; ++i)
    total += (H_[i] * x.segment(i * m_, m_) - g_[i]).squaredNorm();
  return total;
}

StackedVector QuadraticObjective::gradient(const StackedVector& x) const {
  check_dim(x, "gradient");
  StackedVector out(n_ * m_);
  for (int i = 0; i < n_; ++i)
    out.segment(i * m_, m_) = quad_[i] * x.segment(i * m_, m_) - lin_[i];
  return out;
}

StackedVector QuadraticObjective::x_update(const StackedVector& a, const StackedVector& y,
                                           double rho) const {
  if (!(rho > 0.0)) throw InvalidArgument("x_update: rho must be > 0");
  check_dim(a, "x_update");
  check_dim(y, "x_update");
  StackedVector out(n_ * m_);
  const Eigen::MatrixXd ridge = rho * Eigen::MatrixXd::Identity(m_, m_);
  for (int i = 0; i < n_; ++i) {
    const Eigen::VectorXd rhs =
        lin_[i] - a.segment(i * m_, m_) + rho * y.segment(i * m_, m_);
    out.segment(i * m_, m_) = (quad_[i] + ridge).llt().solve(rhs);
  }
  return out;
}

StackedVector QuadraticObjective::x_update_unpenalized(const StackedVector& a,
                                                       double regularization) const {
  check_dim(a, "x_update_unpenalized");
  StackedVector out(n_ * m_);
  if (regularization > 0.0) {
    const Eigen::MatrixXd ridge = regularization * Eigen::MatrixXd::Identity(m_, m_);
    for (int i = 0; i < n_; ++i)
      out.segment(i * m_, m_) =
          (quad_[i] + ridge).ldlt().solve(lin_[i] - a.segment(i * m_, m_));
    return out;
  }
  for (int i = 0; i < n_; ++i) {
    if (block_eig_min_[i] <= 1e-12 * std::max(block_eig_max_[i], 1e-300))
      throw SingularBlock("x_update_unpenalized: agent " + std::to_string(i) +
                          " has a singular block Hessian; the proximal-free step "
                          "needs per-block strong convexity (or a regularization)");
    out.segment(i * m_, m_) = quad_[i].llt().solve(lin_[i] - a.segment(i * m_, m_));
  }
  return out;
}

QuadraticObjective::CentralizedSolution QuadraticObjective::centralized_solve() const {
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(m_, m_);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
  for (int i = 0; i < n_; ++i) {
    K += quad_[i];
    rhs += lin_[i];
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
  if (!lu.isInvertible())
    throw SingularSystem("centralized_solve: aggregated normal matrix is rank-deficient");
  CentralizedSolution sol;
  sol.consensus = lu.solve(rhs);
  sol.x_star = replicate_block(sol.consensus, n_);
  sol.a_star = -gradient(sol.x_star);
  const double mean_norm = block_mean(sol.a_star, n_, m_).norm();
  if (mean_norm > 1e-10 * (1.0 + sol.a_star.norm()))
    throw InvariantViolation("centralized_solve: dual point has nonzero blockwise mean (" +
                             std::to_string(mean_norm) + ")");
  return sol;
}

QuadraticObjective generate_random_objective(int n, int m, int p, std::uint64_t seed) {
  if (n < 1 || m < 1 || p < 1)
    throw InvalidArgument("generate_random_objective: n, m, p must be >= 1");
  Rng rng(seed);
  std::vector<Eigen::MatrixXd> H;
  std::vector<Eigen::VectorXd> g;
  H.reserve(n);
  g.reserve(n);
  for (int i = 0; i < n; ++i) {
    Eigen::MatrixXd Hi(p, m);
    for (int r = 0; r < p; ++r)
      for (int c = 0; c < m; ++c) Hi(r, c) = rng.normal();
    Eigen::VectorXd gi(p);
    for (int r = 0; r < p; ++r) gi(r) = rng.normal();
    H.push_back(std::move(Hi));
    g.push_back(std::move(gi));
  }
  return QuadraticObjective(std::move(H), std::move(g));
}

std::string to_json_string(const QuadraticObjective& obj) {
  nlohmann::json j;
  j["n"] = obj.num_agents();
  j["m"] = obj.block_dim();
  j["p"] = obj.rows_per_agent();
  auto& H = j["H"] = nlohmann::json::array();
  auto& g = j["g"] = nlohmann::json::array();
  for (int i = 0; i < obj.num_agents(); ++i) {
    std::vector<double> flat;
    flat.reserve(obj.rows_per_agent() * obj.block_dim());
    for (int r = 0; r < obj.rows_per_agent(); ++r)
      for (int c = 0; c < obj.block_dim(); ++c) flat.push_back(obj.H(i)(r, c));
    H.push_back(flat);
    g.push_back(std::vector<double>(obj.g(i).data(), obj.g(i).data() + obj.g(i).size()));
  }
  return j.dump(2);
}

void save_objective(const QuadraticObjective& obj, const std::string& path) {
  write_text_file(path, to_json_string(obj) + "\n");
}

QuadraticObjective load_objective(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_text_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("load_objective: " + path + ": " + e.what());
  }
  try {
    const int n = j.at("n").get<int>();
    const int m = j.at("m").get<int>();
    const int p = j.at("p").get<int>();
    if (n < 1 || m < 1 || p < 1) throw ConfigError("load_objective: bad dimensions in " + path);
    const auto& H_json = j.at("H");
    const auto& g_json = j.at("g");
    if (static_cast<int>(H_json.size()) != n || static_cast<int>(g_json.size()) != n)
      throw ConfigError("load_objective: agent count mismatch in " + path);
    std::vector<Eigen::MatrixXd> H;
    std::vector<Eigen::VectorXd> g;
    for (int i = 0; i < n; ++i) {
      const auto flat = H_json[i].get<std::vector<double>>();
      if (static_cast<int>(flat.size()) != p * m)
        throw ConfigError("load_objective: H entry size mismatch in " + path);
      Eigen::MatrixXd Hi(p, m);
      for (int r = 0; r < p; ++r)
        for (int c = 0; c < m; ++c) Hi(r, c) = flat[r * m + c];
      const auto gv = g_json[i].get<std::vector<double>>();
      if (static_cast<int>(gv.size()) != p)
        throw ConfigError("load_objective: g entry size mismatch in " + path);
      H.push_back(std::move(Hi));
      g.push_back(Eigen::Map<const Eigen::VectorXd>(gv.data(), p));
    }
    return QuadraticObjective(std::move(H), std::move(g));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("load_objective: " + path + ": " + e.what());
  }
}

}  // namespace dadmm
