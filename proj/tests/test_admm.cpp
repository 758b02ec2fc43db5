#include <doctest.h>

#include "dadmm/admm.hpp"
#include "dadmm/errors.hpp"
#include "dadmm/rng.hpp"
#include "dadmm/theory.hpp"
#include "dadmm/trace.hpp"
#include "oracles.hpp"

using dadmm::AdmmParams;
using dadmm::QuadraticObjective;

namespace {

dadmm::DiGraph complete(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) edges.emplace_back(i, j);
  return dadmm::make_digraph(n, std::move(edges));
}

dadmm::DiGraph directed_cycle(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int j = 0; j < n; ++j) edges.emplace_back((j + 1) % n, j);
  return dadmm::make_digraph(n, std::move(edges));
}

QuadraticObjective scalar_quadratics(const std::vector<double>& targets) {
  std::vector<Eigen::MatrixXd> H(targets.size(), Eigen::MatrixXd::Ones(1, 1));
  std::vector<Eigen::VectorXd> g;
  for (double t : targets) g.push_back(Eigen::VectorXd::Constant(1, t));
  return QuadraticObjective(std::move(H), std::move(g));
}

dadmm::ReferenceSolution reference(const QuadraticObjective& obj) {
  const auto sol = obj.centralized_solve();
  return {sol.x_star, sol.a_star};
}

// Test-only objective whose proximal step doubles the previous y estimate;
// drives the run loop into its divergence detector.
class ExplodingObjective final : public dadmm::Objective {
 public:
  int num_agents() const override { return 2; }
  int block_dim() const override { return 1; }
  double eval(const dadmm::StackedVector&) const override { return 0.0; }
  dadmm::StackedVector gradient(const dadmm::StackedVector& x) const override {
    return dadmm::StackedVector::Zero(x.size());
  }
  dadmm::StackedVector x_update(const dadmm::StackedVector&, const dadmm::StackedVector& y,
                                double) const override {
    return 10.0 * y + dadmm::StackedVector::Ones(y.size());
  }
  dadmm::StackedVector x_update_unpenalized(const dadmm::StackedVector& a,
                                            double) const override {
    return a;
  }
  std::pair<double, double> constants() const override { return {1.0, 1.0}; }
};

}  // namespace

TEST_SUITE("admm") {

TEST_CASE("single agent reduces to the proximal-point recursion") {
  auto obj = scalar_quadratics({5.0});
  const auto W = dadmm::build_weight_matrix(dadmm::make_digraph(1, {}));
  auto s = dadmm::make_admm_initial_state(obj);
  const AdmmParams params{0.7, 1, 1, 0.0};
  double prox = 0.0;  // tracks argmin f(x) + (rho/2)(x - prox_prev)^2 by hand
  for (int k = 0; k < 60; ++k) {
    dadmm::admm_step(s, obj, W, params);
    prox = (2.0 * 5.0 + 0.7 * prox) / (2.0 + 0.7);
    CHECK(s.x(0) == doctest::Approx(prox).epsilon(1e-12));
    CHECK(s.y(0) == doctest::Approx(s.x(0)));  // W = [1]
    CHECK(s.a(0) == doctest::Approx(0.0));
  }
  CHECK(s.x(0) == doctest::Approx(5.0).epsilon(1e-6));
}

TEST_CASE("complete graph performs the exact-averaging update") {
  auto obj = scalar_quadratics({1.0, 2.0, 6.0});
  const auto W = dadmm::build_weight_matrix(complete(3));
  REQUIRE(W.delta <= 1e-12);
  auto s = dadmm::make_admm_initial_state(obj);
  const AdmmParams params{1.3, 1, 1, 0.0};
  for (int k = 0; k < 10; ++k) {
    const auto a_before = s.a;
    dadmm::admm_step(s, obj, W, params);
    // With exact averaging and a zero-mean dual, the mixing result equals the
    // full averaging target.
    const auto target = dadmm::exact_average_y_update(s.x, a_before, params.rho, 3, 1);
    CHECK((s.y - target).norm() <= 1e-12 * (1.0 + target.norm()));
  }
}

TEST_CASE("exact-averaging target equals a least-squares projection oracle") {
  dadmm::Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + static_cast<int>(rng.bits() % 5);
    const int m = 1 + static_cast<int>(rng.bits() % 3);
    Eigen::VectorXd x(n * m), a(n * m);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x(i) = rng.normal();
      a(i) = rng.normal();
    }
    const double rho = std::pow(10.0, rng.uniform(-1.0, 1.0));
    const Eigen::VectorXd fast = dadmm::exact_average_y_update(x, a, rho, n, m);
    const Eigen::VectorXd oracle =
        oracles::consensus_projection_least_squares(x + a / rho, n, m);
    CHECK((fast - oracle).norm() <= 1e-12 * (1.0 + oracle.norm()));
  }
}

TEST_CASE("two-agent hand instance") {
  auto obj = scalar_quadratics({1.0, 3.0});
  const auto W = dadmm::build_weight_matrix(complete(2));
  const auto ref = reference(obj);
  REQUIRE(ref.x_star(0) == doctest::Approx(2.0));

  SUBCASE("first iterate matches the closed-form update") {
    auto s = dadmm::make_admm_initial_state(obj);
    dadmm::admm_step(s, obj, W, AdmmParams{1.0, 1, 1, 0.0});
    CHECK(s.x(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(s.x(1) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s.y(0) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(s.y(1) == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
    CHECK(s.a(0) == doctest::Approx(-2.0 / 3.0).epsilon(1e-12));
    CHECK(s.a(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  }

  SUBCASE("200 iterations reach the consensus optimum") {
    auto s = dadmm::make_admm_initial_state(obj);
    for (int k = 0; k < 200; ++k) dadmm::admm_step(s, obj, W, AdmmParams{1.0, 1, 1, 0.0});
    CHECK((s.x - ref.x_star).norm() <= 1e-8);
  }
}

TEST_CASE("the mixing loop equals the dense matrix power") {
  const auto g = dadmm::generate_strongly_connected_digraph(5, 0.5, 13).first;
  const auto W = dadmm::build_weight_matrix(g);
  auto obj = dadmm::generate_random_objective(5, 3, 3, 14);
  auto s = dadmm::make_admm_initial_state(obj);
  const AdmmParams params{0.8, 4, 1, 0.0};
  const auto a0 = s.a;
  const auto y0 = s.y;
  dadmm::admm_step(s, obj, W, params);

  const Eigen::VectorXd x_new = obj.x_update(a0, y0, params.rho);
  Eigen::MatrixXd WB = Eigen::MatrixXd::Identity(5, 5);
  for (int b = 0; b < params.B; ++b) WB = W.entries * WB;
  const Eigen::VectorXd y_ref = dadmm::apply_blockwise(WB, x_new, 3);
  CHECK((s.y - y_ref).norm() <= 1e-12 * (1.0 + y_ref.norm()));
  CHECK(s.comm_rounds == params.B);
}

TEST_CASE("conservation identities hold along a run") {
  const auto g = dadmm::generate_strongly_connected_digraph(6, 0.4, 21).first;
  const auto W = dadmm::build_weight_matrix(g);
  auto obj = dadmm::generate_random_objective(6, 2, 3, 22);
  const auto ref = reference(obj);
  dadmm::RunOptions opts;
  opts.store_iterates = true;
  // check_invariants throws on violation, so a clean return is the assertion;
  // re-derive the identities from the stored iterates as well.
  const auto tr = dadmm::run_admm(obj, W, AdmmParams{0.5, 2, 300, 1e-10}, ref, opts);
  REQUIRE(tr.xs.size() == tr.rows.size());
  for (std::size_t k = 1; k < tr.xs.size(); ++k) {
    CHECK(dadmm::block_mean(tr.as[k], 6, 2).norm() <= 1e-9 * (1.0 + tr.as[k].norm()));
    CHECK((dadmm::block_mean(tr.ys[k], 6, 2) - dadmm::block_mean(tr.xs[k], 6, 2)).norm() <=
          1e-9 * (1.0 + tr.xs[k].norm()));
  }
}

TEST_CASE("identical runs produce bit-identical traces") {
  const auto g = dadmm::generate_strongly_connected_digraph(5, 0.5, 31).first;
  const auto W = dadmm::build_weight_matrix(g);
  auto obj = dadmm::generate_random_objective(5, 2, 2, 32);
  const auto ref = reference(obj);
  const AdmmParams params{1.0, 2, 400, 1e-9};
  const auto t1 = dadmm::run_admm(obj, W, params, ref);
  const auto t2 = dadmm::run_admm(obj, W, params, ref);
  CHECK(dadmm::trace_csv_string(t1) == dadmm::trace_csv_string(t2));
}

TEST_CASE("immediate stop tolerances terminate at once") {
  auto obj = scalar_quadratics({1.0, 3.0});
  const auto W = dadmm::build_weight_matrix(complete(2));
  const auto ref = reference(obj);
  const auto tr = dadmm::run_admm(obj, W, AdmmParams{1.0, 1, 100, 1.0}, ref);
  CHECK(tr.reason == dadmm::StopReason::tolerance);
  CHECK(tr.rows.size() <= 2);
}

TEST_CASE("certified parameters keep the rate-weighted residual bounded") {
  auto obj = scalar_quadratics({1.0, 3.0, 5.0});
  const auto W = dadmm::build_weight_matrix(directed_cycle(3));
  const auto ref = reference(obj);
  const auto [mu, L] = obj.constants();
  const auto tc = dadmm::certified_constants(mu, L, W.delta);
  REQUIRE(tc.gain_product(tc.B_min) < 1.0);

  const auto tr =
      dadmm::run_admm(obj, W, AdmmParams{tc.rho, tc.B_min, 4000, 1e-10}, ref);
  REQUIRE(tr.reason == dadmm::StopReason::tolerance);
  // ||x^k - x*|| <= c lambda^k: the weighted residuals must not trend upward.
  std::vector<double> weighted;
  double scale = 1.0;
  for (const auto& row : tr.rows) {
    weighted.push_back(row.primal_res / scale);
    scale *= tc.lambda;
  }
  const double head = *std::max_element(weighted.begin(),
                                        weighted.begin() + weighted.size() / 2);
  const double tail = *std::max_element(weighted.begin() + weighted.size() / 2,
                                        weighted.end());
  CHECK(tail <= head * (1.0 + 1e-9));
}

TEST_CASE("divergence is flagged, not thrown") {
  ExplodingObjective obj;
  const auto W = dadmm::build_weight_matrix(complete(2));
  // A target off the doubling trajectory keeps the relative primal residual
  // well defined and never zero.
  Eigen::VectorXd target(2);
  target << 0.5, -0.3;
  dadmm::ReferenceSolution ref{target, Eigen::VectorXd::Zero(2)};
  dadmm::RunOptions opts;
  opts.check_invariants = false;  // the fake objective breaks conservation on purpose
  const auto tr = dadmm::run_admm(obj, W, AdmmParams{1.0, 1, 100000, 0.0}, ref, opts);
  CHECK(tr.reason == dadmm::StopReason::diverged);
  CHECK(tr.rows.size() < 1000);
  for (const auto& row : tr.rows) CHECK(std::isfinite(row.primal_res));
}

TEST_CASE("parameter validation") {
  auto obj = scalar_quadratics({1.0, 3.0});
  const auto W = dadmm::build_weight_matrix(complete(2));
  auto s = dadmm::make_admm_initial_state(obj);
  CHECK_THROWS_AS(dadmm::admm_step(s, obj, W, AdmmParams{-1.0, 1, 1, 0.0}),
                  dadmm::InvalidArgument);
  CHECK_THROWS_AS(dadmm::admm_step(s, obj, W, AdmmParams{1.0, 0, 1, 0.0}),
                  dadmm::InvalidArgument);
}

}  // TEST_SUITE
