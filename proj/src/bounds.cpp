#include "roqs/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>

#include "roqs/quadrature.hpp"

namespace roqs {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double theta_ceiling(const DecayCertificate& cert) {
  if (cert.alpha <= 0.0) return std::numeric_limits<double>::infinity();
  return cert.mu / (4.0 * cert.alpha);
}

void require_theta_in_range(double theta, const DecayCertificate& cert, const char* who) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw ThetaOutOfRangeError(std::string(who) + ": theta must be finite and nonnegative");
  }
  if (theta >= theta_ceiling(cert)) {
    throw ThetaOutOfRangeError(std::string(who) + ": theta = " + std::to_string(theta) +
                               " must lie below mu/(4 alpha) = " +
                               std::to_string(theta_ceiling(cert)));
  }
}

// Golden-section minimizer for a convex objective on [a, b]; returns the
// bracket midpoint once the bracket is at relative width rel_tol.
template <typename F>
double golden_min(const F& f, double a, double b, double rel_tol) {
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int iter = 0; iter < 200 && (b - a) > rel_tol * (std::abs(a) + std::abs(b)); ++iter) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

std::vector<CurvePoint> sample_curve(double eps, int n, const DecayCertificate& cert,
                                     int points) {
  std::vector<CurvePoint> curve;
  const double ceiling = theta_ceiling(cert);
  if (!std::isfinite(ceiling) || points < 2) return curve;
  const double lo = std::log(ceiling * 1e-6);
  const double hi = std::log(ceiling * (1.0 - 1e-6));
  curve.reserve(points);
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    CurvePoint p;
    p.theta = std::exp(lo + t * (hi - lo));
    p.gamma = qef_rate_bound_closed(p.theta, n, cert);
    p.objective = (eps + p.gamma) / p.theta;
    curve.push_back(p);
  }
  return curve;
}

}  // namespace

double qef_rate_bound_closed(double theta, int n, const DecayCertificate& cert) {
  require_theta_in_range(theta, cert, "qef_rate_bound_closed");
  if (cert.alpha <= 0.0 || theta == 0.0) return 0.0;
  const double mu = cert.mu;
  const double shift = 4.0 * theta * cert.alpha * mu;
  // mu - sqrt(mu^2 - s) written conjugate-free; the direct difference loses
  // all precision for small theta.
  return 0.5 * n * shift / (mu + std::sqrt(mu * mu - shift));
}

double qef_rate_bound_integral(double theta, int n, const DecayCertificate& cert,
                               double quad_tol) {
  require_theta_in_range(theta, cert, "qef_rate_bound_integral");
  if (!(quad_tol > 0.0)) {
    throw ConfigInvalidError("qef_rate_bound_integral: quad_tol must be positive");
  }
  if (cert.alpha <= 0.0 || theta == 0.0) return 0.0;

  const double mu = cert.mu;
  const double alpha = cert.alpha;
  const auto lorentzian = [&](double lambda) {
    return 2.0 * alpha * mu / (lambda * lambda + mu * mu);
  };

  // Cutoff so that (a) the first-order tail remainder stays below quad_tol/2
  // and (b) 2 theta F <= 1/2 beyond the window, where |ln(1-x)+x| <= x^2 holds.
  const double remainder_cut =
      std::cbrt(16.0 * n * theta * theta * alpha * alpha * mu * mu / (3.0 * kPi * quad_tol));
  const double log_domain_cut = std::sqrt(std::max(0.0, 8.0 * theta * alpha * mu - mu * mu));
  const double window = std::max({10.0 * mu, remainder_cut, log_domain_cut});

  const double scales[4] = {mu, 4.0 * mu, 32.0 * mu, 256.0 * mu};
  const double quad = adaptive_integrate(
      [&](double lambda) { return std::log1p(-2.0 * theta * lorentzian(lambda)); }, 0.0,
      window, quad_tol * kPi / n, std::span<const double>(scales));
  // First-order analytic tail: ln(1 - 2 theta F) ~ -2 theta F for large lambda.
  const double tail = -8.0 * theta * alpha * (0.5 * kPi - std::atan(window / mu));
  return -(n / (4.0 * kPi)) * (2.0 * quad + tail);
}

RobustBound worst_case_bound_closed(double eps, int n, const DecayCertificate& cert) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw NegativeEpsError("worst_case_bound_closed: eps must be finite and nonnegative");
  }
  RobustBound rb;
  rb.eps = eps;
  rb.theta_max = theta_ceiling(cert);
  rb.sigma = 2.0 * eps / (n * cert.mu);
  if (cert.alpha <= 0.0) {
    rb.at_boundary = true;
    return rb;
  }
  const double sigma = rb.sigma;
  const double q = std::sqrt(sigma * (2.0 + sigma));
  rb.bound = n * cert.alpha * (1.0 + sigma + q);
  // (1 + sigma - q) q with the difference rewritten as 1/(1 + sigma + q),
  // since (1 + sigma)^2 - q^2 = 1; the direct form cancels for large sigma.
  rb.theta_star = cert.mu / (2.0 * cert.alpha) * q / (1.0 + sigma + q);
  rb.at_boundary = (eps == 0.0);
  rb.curve = sample_curve(eps, n, cert, 33);
  return rb;
}

RobustBound worst_case_bound_numeric(double eps, int n, const DecayCertificate& cert,
                                     int grid) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) {
    throw NegativeEpsError("worst_case_bound_numeric: eps must be finite and nonnegative");
  }
  if (grid < 16) {
    throw ConfigInvalidError("worst_case_bound_numeric: grid must be at least 16");
  }
  RobustBound rb;
  rb.eps = eps;
  rb.theta_max = theta_ceiling(cert);
  rb.sigma = 2.0 * eps / (n * cert.mu);
  if (cert.alpha <= 0.0) {
    rb.at_boundary = true;
    return rb;
  }

  const auto objective = [&](double theta) {
    return (eps + qef_rate_bound_closed(theta, n, cert)) / theta;
  };

  const double ceiling = rb.theta_max;
  const double log_lo = std::log(ceiling * 1e-9);
  const double log_hi = std::log(ceiling * (1.0 - 1e-9));
  rb.curve.reserve(grid);
  int best = 0;
  for (int i = 0; i < grid; ++i) {
    const double t = static_cast<double>(i) / (grid - 1);
    CurvePoint p;
    p.theta = std::exp(log_lo + t * (log_hi - log_lo));
    p.gamma = qef_rate_bound_closed(p.theta, n, cert);
    p.objective = (eps + p.gamma) / p.theta;
    rb.curve.push_back(p);
    if (p.objective < rb.curve[best].objective) best = i;
  }

  if (best == 0) {
    // Infimum approached at the lower grid edge (the eps = 0 case).
    rb.theta_star = rb.curve.front().theta;
    rb.bound = rb.curve.front().objective;
    rb.at_boundary = true;
    return rb;
  }
  const double lo = rb.curve[best - 1].theta;
  const double hi = rb.curve[std::min(best + 1, grid - 1)].theta;
  rb.theta_star = golden_min(objective, lo, hi, 1e-12);
  rb.bound = objective(rb.theta_star);
  rb.at_boundary = false;
  return rb;
}

std::vector<RobustBound> sweep(std::span<const double> eps_list, int n,
                               const DecayCertificate& cert) {
  std::vector<RobustBound> bounds;
  bounds.reserve(eps_list.size());
  for (double eps : eps_list) bounds.push_back(worst_case_bound_closed(eps, n, cert));
  return bounds;
}

}  // namespace roqs
