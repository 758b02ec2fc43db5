#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dadmm/trace.hpp"

namespace dadmm {

// Closed-form constants of the geometric-rate certificate for a tuple
// (mu, L, beta, lambda, rho, delta). Valid only when lambda*mu > rho*(lambda+1)
// and c2 > 0; compute_constants enforces both.
struct TheoryConstants {
  double mu = 0, L = 0, beta = 0, lambda = 0, rho = 0, delta = 0;
  double c1 = 0, c2 = 0, c3 = 0;
  double gamma1 = 0, gamma3 = 0;
  int B_min = 1;

  double gamma2(int B) const;        // delta^B, the mixing contraction gain
  double gain_product(int B) const;  // gamma1 * gamma2(B) * gamma3
};

// Whether a rate lambda in (0,1) admits a nonempty penalty interval.
// mu = 0 raises StrongConvexityRequired.
bool lambda_feasible(double mu, double L, double beta, double lambda);

// Open interval of certified penalty parameters, or nullopt when infeasible.
std::optional<std::pair<double, double>> rho_interval(double mu, double L,
                                                      double beta, double lambda);

// Smallest number of mixing rounds that closes the gain cycle:
// max(1, ceil(log(gamma1*gamma3) / log(1/delta))), with the product
// gamma1 * delta^B * gamma3 < 1 guaranteed at the returned B.
int min_B(double gamma1, double gamma3, double delta);

// Infimum of the feasible rate interval (lambda*, 1), located by bisection.
double min_feasible_lambda(double mu, double L, double beta, double tol = 1e-12);

TheoryConstants compute_constants(double mu, double L, double beta, double lambda,
                                  double rho, double delta);

// Full certified parameter selection: beta <= 0 picks the default beta = L;
// lambda is placed lambda_fraction of the way from lambda* to 1; rho at the
// interval midpoint; B_min from the gain cycle.
TheoryConstants certified_constants(double mu, double L, double delta,
                                    double beta = -1.0, double lambda_fraction = 0.5);

// Per-step weighted norms ||s^k|| / lambda^k and their prefix maxima
// ||s||^{lambda,K}.
struct LambdaNormSeries {
  double lambda = 0;
  std::vector<double> values;
  std::vector<double> running_max;
};
LambdaNormSeries lambda_norm_series(const std::vector<double>& norms, double lambda);

struct ArrowCheck {
  std::string name;
  double gamma = 0;           // theoretical gain
  double empirical_gain = 0;  // max over K of target/source running maxima
  bool gain_ok = false;       // empirical <= gamma + 1e-9 (loose for arrow 3,
                              // whose bound carries an additive constant)
  bool bounded = false;       // no new running-max peak in the final half
};

struct SmallGainReport {
  LambdaNormSeries dual_gap;  // (a^k - a*) + rho * (y^k - y^{k-1}), y^{-1} = 0
  LambdaNormSeries x_perp;    // consensus-orthogonal part of x^k
  LambdaNormSeries y_perp;
  ArrowCheck arrow1, arrow2, arrow3;
  // ||x_perp||^{lambda,K} <= (1/mu) ||dual_gap||^{lambda,K} at every K.
  bool x_perp_bound_ok = false;
  double x_perp_bound_violation = 0.0;
  bool all_bounded() const {
    return arrow1.bounded && arrow2.bounded && arrow3.bounded;
  }
};

// Requires a trace recorded with store_iterates; B is the number of mixing
// rounds the run actually used.
SmallGainReport lambda_norm_diagnostics(const ConvergenceTrace& trace,
                                        const ReferenceSolution& ref,
                                        const TheoryConstants& tc, int B, int n, int m);

// Columns: K,norm_atilde_rdy,norm_xperp,norm_yperp (running maxima).
std::string diagnostics_csv_string(const SmallGainReport& r);
void write_diagnostics_csv(const SmallGainReport& r, const std::string& path);

}  // namespace dadmm
