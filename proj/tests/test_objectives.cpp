#include <doctest.h>

#include <cstdio>

#include "dadmm/errors.hpp"
#include "dadmm/objective.hpp"
#include "dadmm/rng.hpp"
#include "oracles.hpp"

using dadmm::QuadraticObjective;

namespace {

QuadraticObjective identity_objective(int n, int m) {
  std::vector<Eigen::MatrixXd> H(n, Eigen::MatrixXd::Identity(m, m));
  std::vector<Eigen::VectorXd> g(n, Eigen::VectorXd::Zero(m));
  return QuadraticObjective(std::move(H), std::move(g));
}

QuadraticObjective scalar_pair(double g1, double g2) {
  std::vector<Eigen::MatrixXd> H(2, Eigen::MatrixXd::Ones(1, 1));
  std::vector<Eigen::VectorXd> g{Eigen::VectorXd::Constant(1, g1),
                                 Eigen::VectorXd::Constant(1, g2)};
  return QuadraticObjective(std::move(H), std::move(g));
}

}  // namespace

TEST_SUITE("objectives") {

TEST_CASE("eval and gradient hand cases") {
  const auto obj = identity_objective(3, 2);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(6);
  CHECK(obj.eval(zero) == 0.0);
  CHECK(obj.gradient(zero).norm() == 0.0);

  std::vector<Eigen::MatrixXd> H{Eigen::MatrixXd::Constant(1, 1, 2.0)};
  std::vector<Eigen::VectorXd> g{Eigen::VectorXd::Constant(1, 4.0)};
  const QuadraticObjective one(std::move(H), std::move(g));
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 1.0);
  CHECK(one.eval(x) == doctest::Approx(4.0));
  CHECK(one.gradient(x)(0) == doctest::Approx(-8.0));
}

TEST_CASE("gradient matches central finite differences") {
  dadmm::Rng rng(21);
  for (int s = 0; s < 6; ++s) {
    const auto obj = dadmm::generate_random_objective(3, 2, 3, 400 + s);
    Eigen::VectorXd x(obj.stacked_dim());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.normal();
    const Eigen::VectorXd grad = obj.gradient(x);
    const Eigen::VectorXd fd = oracles::finite_difference_gradient(obj, x);
    CHECK((grad - fd).norm() <= 1e-6 * (1.0 + grad.norm()));
  }
}

TEST_CASE("proximal update hand cases") {
  const auto obj = identity_objective(2, 2);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(4);
  CHECK(obj.x_update(zero, zero, 1.0).norm() == 0.0);

  std::vector<Eigen::MatrixXd> H{Eigen::MatrixXd::Ones(1, 1)};
  std::vector<Eigen::VectorXd> g{Eigen::VectorXd::Constant(1, 3.0)};
  const QuadraticObjective one(std::move(H), std::move(g));
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(1);
  CHECK(one.x_update(z, z, 2.0)(0) == doctest::Approx(1.5));

  CHECK_THROWS_AS(one.x_update(z, z, 0.0), dadmm::InvalidArgument);
  CHECK_THROWS_AS(one.x_update(Eigen::VectorXd::Zero(3), z, 1.0),
                  dadmm::DimensionMismatch);
}

TEST_CASE("proximal update matches a gradient-descent oracle") {
  dadmm::Rng rng(31);
  for (int s = 0; s < 4; ++s) {
    const auto obj = dadmm::generate_random_objective(2, 2, 3, 600 + s);
    Eigen::VectorXd a(obj.stacked_dim()), y(obj.stacked_dim());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      a(i) = rng.normal();
      y(i) = rng.normal();
    }
    const double rho = 0.5 + rng.uniform01() * 2.0;
    const Eigen::VectorXd fast = obj.x_update(a, y, rho);
    const Eigen::VectorXd slow = oracles::proximal_minimizer_gd(obj, a, y, rho);
    CHECK((fast - slow).norm() <= 1e-8 * (1.0 + fast.norm()));
  }
}

TEST_CASE("proximal update satisfies its stationarity bound") {
  dadmm::Rng rng(41);
  for (int s = 0; s < 8; ++s) {
    const auto obj = dadmm::generate_random_objective(4, 3, 2, 700 + s);
    Eigen::VectorXd a(obj.stacked_dim()), y(obj.stacked_dim());
    for (Eigen::Index i = 0; i < a.size(); ++i) {
      a(i) = rng.normal() * 3.0;
      y(i) = rng.normal() * 3.0;
    }
    const double rho = std::pow(10.0, rng.uniform(-2.0, 2.0));
    const Eigen::VectorXd x = obj.x_update(a, y, rho);
    const double resid = (obj.gradient(x) + a + rho * (x - y)).norm();
    CHECK(resid <= 1e-10 * (1.0 + a.norm() + rho * y.norm()));
  }
}

TEST_CASE("centralized solve hand cases") {
  SUBCASE("identical agents agree on their common minimizer") {
    std::vector<Eigen::MatrixXd> H(3, Eigen::MatrixXd::Identity(2, 2));
    Eigen::VectorXd c(2);
    c << 1.5, -2.0;
    std::vector<Eigen::VectorXd> g(3, c);
    const QuadraticObjective obj(std::move(H), std::move(g));
    const auto sol = obj.centralized_solve();
    CHECK((sol.consensus - c).norm() <= 1e-12);
    CHECK(sol.a_star.norm() <= 1e-12);
  }
  SUBCASE("two scalar quadratics meet in the middle") {
    const auto obj = scalar_pair(1.0, 3.0);
    const auto sol = obj.centralized_solve();
    CHECK(sol.consensus(0) == doctest::Approx(2.0));
    CHECK(sol.a_star(0) == doctest::Approx(-2.0));
    CHECK(sol.a_star(1) == doctest::Approx(2.0));
    CHECK(dadmm::block_mean(sol.a_star, 2, 1).norm() <= 1e-12);
  }
}

TEST_CASE("centralized solve is optimal against random probes") {
  const auto obj = dadmm::generate_random_objective(4, 2, 3, 17);
  const auto sol = obj.centralized_solve();
  const double best = obj.eval(sol.x_star);
  dadmm::Rng rng(18);
  for (int t = 0; t < 1000; ++t) {
    Eigen::VectorXd z = sol.consensus;
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) += 0.1 * rng.normal();
    CHECK(obj.eval(dadmm::replicate_block(z, obj.num_agents())) >= best - 1e-12);
  }
}

TEST_CASE("centralized solve rejects rank-deficient aggregates") {
  // Two agents measuring the same single coordinate of a 2-d decision.
  Eigen::MatrixXd row(1, 2);
  row << 1.0, 0.0;
  std::vector<Eigen::MatrixXd> H(2, row);
  std::vector<Eigen::VectorXd> g(2, Eigen::VectorXd::Constant(1, 1.0));
  const QuadraticObjective obj(std::move(H), std::move(g));
  CHECK_THROWS_AS(obj.centralized_solve(), dadmm::SingularSystem);
}

TEST_CASE("curvature constants") {
  SUBCASE("identity blocks give mu = L = 2") {
    const auto obj = identity_objective(3, 3);
    const auto [mu, L] = obj.constants();
    CHECK(mu == doctest::Approx(2.0));
    CHECK(L == doctest::Approx(2.0));
  }
  SUBCASE("wide blocks are not strongly convex") {
    const auto obj = dadmm::generate_random_objective(10, 3, 1, 3);
    CHECK(obj.mu() == 0.0);
    CHECK(obj.L() > 0.0);
  }
  SUBCASE("random instance matches the closed-form eigenvalue oracle") {
    for (int s = 0; s < 10; ++s) {
      const auto obj = dadmm::generate_random_objective(3, 3, 3, 800 + s);
      double lo = 0.0, hi = 0.0;
      for (int i = 0; i < obj.num_agents(); ++i) {
        const Eigen::MatrixXd quad = 2.0 * obj.H(i).transpose() * obj.H(i);
        const auto eigs = oracles::symmetric_eigenvalues_closed_form(quad);
        lo = i == 0 ? eigs.front() : std::min(lo, eigs.front());
        hi = i == 0 ? eigs.back() : std::max(hi, eigs.back());
      }
      CHECK(obj.L() == doctest::Approx(hi).epsilon(1e-10));
      const double mu_expected = lo <= 1e-12 * hi ? 0.0 : lo;
      CHECK(obj.mu() == doctest::Approx(mu_expected).epsilon(1e-10));
      CHECK(obj.mu() <= obj.L());
    }
  }
}

TEST_CASE("strong convexity and Lipschitz inequalities hold numerically") {
  const auto obj = dadmm::generate_random_objective(4, 2, 4, 27);
  const auto [mu, L] = obj.constants();
  dadmm::Rng rng(28);
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd x(obj.stacked_dim()), y(obj.stacked_dim());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x(i) = rng.normal();
      y(i) = rng.normal();
    }
    const double lhs = obj.eval(y);
    const double rhs = obj.eval(x) + obj.gradient(x).dot(y - x) +
                       0.5 * mu * (y - x).squaredNorm();
    CHECK(lhs >= rhs - 1e-9);
    CHECK((obj.gradient(x) - obj.gradient(y)).norm() <=
          L * (x - y).norm() * (1.0 + 1e-12));
  }
}

TEST_CASE("unpenalized update needs per-block curvature") {
  const auto flat = dadmm::generate_random_objective(3, 3, 1, 5);  // rank-1 blocks
  const Eigen::VectorXd a = Eigen::VectorXd::Zero(flat.stacked_dim());
  CHECK_THROWS_AS(flat.x_update_unpenalized(a), dadmm::SingularBlock);
  // A ridge keeps it runnable.
  CHECK(flat.x_update_unpenalized(a, 1e-9).allFinite());

  const auto obj = scalar_pair(1.0, 3.0);
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(2);
  const Eigen::VectorXd x = obj.x_update_unpenalized(z);
  CHECK(x(0) == doctest::Approx(1.0));
  CHECK(x(1) == doctest::Approx(3.0));
}

TEST_CASE("json round trip preserves the instance exactly") {
  const auto obj = dadmm::generate_random_objective(3, 2, 4, 123);
  const std::string path = "objective_roundtrip_test.json";
  dadmm::save_objective(obj, path);
  const auto back = dadmm::load_objective(path);
  std::remove(path.c_str());
  CHECK(back.num_agents() == obj.num_agents());
  CHECK(back.block_dim() == obj.block_dim());
  for (int i = 0; i < obj.num_agents(); ++i) {
    CHECK((back.H(i) - obj.H(i)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((back.g(i) - obj.g(i)).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK(dadmm::to_json_string(back) == dadmm::to_json_string(obj));
}

TEST_CASE("generation is deterministic") {
  const auto a = dadmm::generate_random_objective(4, 3, 2, 55);
  const auto b = dadmm::generate_random_objective(4, 3, 2, 55);
  CHECK(dadmm::to_json_string(a) == dadmm::to_json_string(b));
}

}  // TEST_SUITE
