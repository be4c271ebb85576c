#pragma once

// Guaranteed upper bounds on the quadratic-exponential growth rate and on the
// worst-case infinite-horizon quadratic cost over relative-entropy balls of
// uncertain system-field states, including the minimizing risk-sensitivity
// parameter.

#include <span>
#include <vector>

#include "roqs/certificate.hpp"

namespace roqs {

// Default absolute tolerance of the quadrature-based rate bound.
inline constexpr double kQuadTol = 1e-9;

struct CurvePoint {
  double theta = 0.0;      // risk-sensitivity parameter
  double gamma = 0.0;      // rate bound gamma(theta)
  double objective = 0.0;  // (eps + gamma(theta)) / theta
};

// Worst-case cost-rate bound at relative-entropy rate threshold eps, with the
// minimizing risk-sensitivity parameter theta_star in (0, mu/(4 alpha)) and
// the gamma(theta) samples backing it. sigma = 2 eps / (n mu) is the
// dimensionless uncertainty size. At eps = 0 the minimum is approached at
// theta -> 0+, reported as theta_star = 0 with at_boundary set.
struct RobustBound {
  double eps = 0.0;
  double sigma = 0.0;
  double theta_star = 0.0;
  double bound = 0.0;
  double theta_max = 0.0;  // mu / (4 alpha)
  bool at_boundary = false;
  std::vector<CurvePoint> curve;
};

// Closed-form rate bound (n/2)(mu - sqrt(mu^2 - 4 theta alpha mu)) for
// 0 <= theta < mu/(4 alpha). Nonnegative, convex, zero at theta = 0.
double qef_rate_bound_closed(double theta, int n, const DecayCertificate& cert);

// Same bound through its integral form
//   -(n/(4 pi)) * integral of ln(1 - 2 theta F(lambda)) over the real line,
// F(lambda) = 2 alpha mu / (lambda^2 + mu^2), by adaptive quadrature on a
// finite window plus a first-order analytic tail estimate. Absolute error is
// at most quad_tol; kept as an independent cross-check of the closed form.
double qef_rate_bound_integral(double theta, int n, const DecayCertificate& cert,
                               double quad_tol = kQuadTol);

// Closed-form worst-case bound n alpha (1 + sigma + sqrt(sigma (2 + sigma)))
// and its minimizer theta_star.
RobustBound worst_case_bound_closed(double eps, int n, const DecayCertificate& cert);

// Minimizes (eps + gamma(theta))/theta on a logarithmic theta grid refined by
// golden-section search on the winning bracket. Matches the closed form to
// 1e-6 relative for eps > 0; carries the sampled curve.
RobustBound worst_case_bound_numeric(double eps, int n, const DecayCertificate& cert,
                                     int grid = 256);

// Closed-form bounds for each threshold; the result is nondecreasing in eps.
std::vector<RobustBound> sweep(std::span<const double> eps_list, int n,
                               const DecayCertificate& cert);

}  // namespace roqs
