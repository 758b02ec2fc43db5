#include "dadmm/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dadmm/block_ops.hpp"
#include "dadmm/errors.hpp"
#include "dadmm/fsio.hpp"

namespace dadmm {

namespace {

void check_inputs(double mu, double L, double beta, double lambda) {
  if (mu == 0.0)
    throw StrongConvexityRequired(
        "rate certificate needs mu > 0; with mu = 0 no geometric rate is certified");
  if (!(mu > 0.0) || !(L >= mu))
    throw InvalidArgument("rate certificate needs 0 < mu <= L");
  if (!(beta > 0.0)) throw InvalidArgument("rate certificate needs beta > 0");
  if (!(lambda > 0.0 && lambda < 1.0))
    throw InvalidArgument("rate certificate needs lambda in (0, 1)");
}

double c3_of(double mu, double L, double beta) {
  return 1.0 / std::sqrt(2.0 * L * (1.0 / beta + 1.0 / mu));
}

double interval_lo(double L, double lambda) {
  return 2.0 * L * (1.0 / (lambda * lambda) - 1.0);
}

double interval_hi(double mu, double L, double beta, double lambda) {
  const double c3 = c3_of(mu, L, beta);
  return c3 * lambda * mu / ((c3 + 1.0) * (lambda + 1.0));
}

}  // namespace

double TheoryConstants::gamma2(int B) const { return std::pow(delta, B); }

double TheoryConstants::gain_product(int B) const {
  return gamma1 * gamma2(B) * gamma3;
}

bool lambda_feasible(double mu, double L, double beta, double lambda) {
  check_inputs(mu, L, beta, lambda);
  return interval_lo(L, lambda) < interval_hi(mu, L, beta, lambda);
}

std::optional<std::pair<double, double>> rho_interval(double mu, double L, double beta,
                                                      double lambda) {
  check_inputs(mu, L, beta, lambda);
  const double lo = interval_lo(L, lambda);
  const double hi = interval_hi(mu, L, beta, lambda);
  if (!(lo < hi)) return std::nullopt;
  return std::make_pair(lo, hi);
}

int min_B(double gamma1, double gamma3, double delta) {
  if (!(gamma1 > 0.0) || !(gamma3 > 0.0))
    throw InvalidArgument("min_B: gains must be positive");
  if (!(delta >= 0.0) || delta >= 1.0)
    throw AssumptionViolated("min_B: needs contraction factor delta in [0, 1)");
  if (delta == 0.0) return 1;  // one round already averages exactly
  const double product = gamma1 * gamma3;
  long B = 1;
  if (product > 1.0)
    B = std::max<long>(1, static_cast<long>(std::ceil(std::log(product) / std::log(1.0 / delta))));
  // Guard the strict product condition against a ceiling landing on a tie.
  while (gamma1 * std::pow(delta, static_cast<double>(B)) * gamma3 >= 1.0) ++B;
  return static_cast<int>(B);
}

double min_feasible_lambda(double mu, double L, double beta, double tol) {
  check_inputs(mu, L, beta, 0.5);
  double lo = 1e-9, hi = 1.0 - 1e-12;
  auto margin = [&](double lambda) {
    return interval_hi(mu, L, beta, lambda) - interval_lo(L, lambda);
  };
  if (!(margin(hi) > 0.0))
    throw NoConvergence("min_feasible_lambda: no feasible rate below 1 (degenerate inputs)");
  if (margin(lo) > 0.0) return lo;
  // The margin is strictly increasing in lambda, so a single crossing exists.
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    (margin(mid) > 0.0 ? hi : lo) = mid;
  }
  return hi;
}

TheoryConstants compute_constants(double mu, double L, double beta, double lambda,
                                  double rho, double delta) {
  check_inputs(mu, L, beta, lambda);
  if (!(rho > 0.0)) throw InvalidArgument("compute_constants: rho must be > 0");
  if (!(delta >= 0.0) || delta >= 1.0)
    throw AssumptionViolated("compute_constants: needs delta in [0, 1)");

  TheoryConstants tc;
  tc.mu = mu;
  tc.L = L;
  tc.beta = beta;
  tc.lambda = lambda;
  tc.rho = rho;
  tc.delta = delta;
  tc.c3 = c3_of(mu, L, beta);

  const double denom = lambda * mu - rho * (lambda + 1.0);
  if (!(denom > 0.0))
    throw InvalidArgument("compute_constants: rho is too large for this rate "
                          "(lambda*mu - rho*(lambda+1) <= 0)");
  tc.c1 = (lambda + 1.0) / denom;
  tc.c2 = 1.0 + rho / L - 1.0 / (lambda * lambda) -
          rho * rho * rho * tc.c1 * tc.c1 * (1.0 / beta + 1.0 / mu);
  if (!(tc.c2 > 0.0))
    throw InvalidArgument("compute_constants: c2 <= 0, parameters are outside the "
                          "certified region");
  tc.gamma1 = 1.0 / mu;
  tc.gamma3 = (1.0 + rho * tc.c1) * std::sqrt(rho * (L + beta) / tc.c2);
  tc.B_min = min_B(tc.gamma1, tc.gamma3, delta);
  return tc;
}

TheoryConstants certified_constants(double mu, double L, double delta, double beta,
                                    double lambda_fraction) {
  const double b = beta > 0.0 ? beta : L;
  if (!(lambda_fraction > 0.0 && lambda_fraction < 1.0))
    throw InvalidArgument("certified_constants: lambda_fraction must lie in (0, 1)");
  const double lambda_star = min_feasible_lambda(mu, L, b);
  double lambda = lambda_star + lambda_fraction * (1.0 - lambda_star);
  auto interval = rho_interval(mu, L, b, lambda);
  // Numerical safety right at the bisection boundary.
  while (!interval && lambda < 1.0 - 1e-12) {
    lambda += 0.5 * (1.0 - lambda);
    interval = rho_interval(mu, L, b, lambda);
  }
  if (!interval)
    throw NoConvergence("certified_constants: could not find a feasible rate");
  const double rho = 0.5 * (interval->first + interval->second);
  return compute_constants(mu, L, b, lambda, rho, delta);
}

LambdaNormSeries lambda_norm_series(const std::vector<double>& norms, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw InvalidArgument("lambda_norm_series: lambda must lie in (0, 1)");
  LambdaNormSeries s;
  s.lambda = lambda;
  s.values.reserve(norms.size());
  s.running_max.reserve(norms.size());
  double scale = 1.0;  // lambda^k
  double best = 0.0;
  for (std::size_t k = 0; k < norms.size(); ++k) {
    const double v = scale > 0.0 ? norms[k] / scale
                                 : std::numeric_limits<double>::infinity();
    s.values.push_back(v);
    best = std::max(best, v);
    s.running_max.push_back(best);
    scale *= lambda;
  }
  return s;
}

namespace {

ArrowCheck make_arrow(const std::string& name, double gamma,
                      const LambdaNormSeries& source, const LambdaNormSeries& target) {
  ArrowCheck a;
  a.name = name;
  a.gamma = gamma;
  // Gain measured only where the source prefix maximum is nonzero; the
  // additive constant in the arrow definition absorbs initial conditions.
  double gain = 0.0;
  for (std::size_t k = 0; k < target.running_max.size(); ++k) {
    const double src = source.running_max[k];
    if (src > 0.0) gain = std::max(gain, target.running_max[k] / src);
  }
  a.empirical_gain = gain;
  a.gain_ok = gain <= gamma + 1e-9;
  const auto& rm = target.running_max;
  a.bounded = rm.empty() ||
              rm.back() <= rm[rm.size() / 2] * (1.0 + 1e-9) + 1e-300;
  return a;
}

}  // namespace

SmallGainReport lambda_norm_diagnostics(const ConvergenceTrace& trace,
                                        const ReferenceSolution& ref,
                                        const TheoryConstants& tc, int B, int n, int m) {
  const std::size_t T = trace.xs.size();
  if (T < 2 || trace.ys.size() != T || trace.as.size() != T)
    throw InsufficientData(
        "lambda_norm_diagnostics: needs a trace recorded with store_iterates");

  std::vector<double> s1(T), s2(T), s3(T);
  for (std::size_t k = 0; k < T; ++k) {
    const Eigen::VectorXd dy =
        k == 0 ? trace.ys[0] : Eigen::VectorXd(trace.ys[k] - trace.ys[k - 1]);
    s1[k] = (trace.as[k] - ref.a_star + tc.rho * dy).norm();
    s2[k] = (trace.xs[k] - consensus_average(trace.xs[k], n, m)).norm();
    s3[k] = (trace.ys[k] - consensus_average(trace.ys[k], n, m)).norm();
  }

  SmallGainReport rep;
  rep.dual_gap = lambda_norm_series(s1, tc.lambda);
  rep.x_perp = lambda_norm_series(s2, tc.lambda);
  rep.y_perp = lambda_norm_series(s3, tc.lambda);

  rep.arrow1 = make_arrow("dual_gap->x_perp", tc.gamma1, rep.dual_gap, rep.x_perp);
  rep.arrow2 = make_arrow("x_perp->y_perp", tc.gamma2(B), rep.x_perp, rep.y_perp);
  rep.arrow3 = make_arrow("y_perp->dual_gap", tc.gamma3, rep.y_perp, rep.dual_gap);

  double violation = 0.0;
  for (std::size_t k = 0; k < T; ++k)
    violation = std::max(violation, rep.x_perp.running_max[k] -
                                        tc.gamma1 * rep.dual_gap.running_max[k]);
  rep.x_perp_bound_violation = violation;
  rep.x_perp_bound_ok = violation <= 1e-9;
  return rep;
}

std::string diagnostics_csv_string(const SmallGainReport& r) {
  std::ostringstream out;
  out << "K,norm_atilde_rdy,norm_xperp,norm_yperp\n";
  for (std::size_t k = 0; k < r.dual_gap.running_max.size(); ++k) {
    out << k << "," << format_double(r.dual_gap.running_max[k]) << ","
        << format_double(r.x_perp.running_max[k]) << ","
        << format_double(r.y_perp.running_max[k]) << "\n";
  }
  return out.str();
}

void write_diagnostics_csv(const SmallGainReport& r, const std::string& path) {
  write_text_file(path, diagnostics_csv_string(r));
}

}  // namespace dadmm
