#pragma once

// Exponential decay certificates (mu, Gamma, alpha) for the weighted two-point
// covariance kernel: Gamma solves a shifted Lyapunov equation so that
// A Gamma + Gamma A^T <= -2 mu Gamma, and alpha is the resulting constant in
// |Z(tau)| <= alpha e^{-mu |tau|}.

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "roqs/oqho.hpp"

namespace roqs {

struct DecayCertificate {
  double mu = 0.0;         // decay rate, 1/time
  Eigen::MatrixXd Gamma;   // symmetric positive definite weight
  double alpha = 0.0;      // norm bound, cost units
};

// Default tolerance for certificate checks (Lyapunov-inequality margin and
// sampled decay margins).
inline constexpr double kCertificateMarginTol = 1e-9;

// Sampled verification outcome: the Lyapunov-inequality check plus the decay
// margins alpha e^{-mu |tau|} - |Z(tau)| on a tau grid. All margins and the
// inequality must clear -tol.
struct CertificateCheck {
  bool ali_ok = false;
  double ali_margin = 0.0;  // min eigenvalue of -2 mu Gamma - (A Gamma + Gamma A^T)
  std::vector<double> taus;
  std::vector<double> margins;
  bool decay_ok = false;
  bool ok() const { return ali_ok && decay_ok; }
};

// Builds a certificate at a given rate 0 < mu < -spectral_abscissa(A):
// Gamma solves (A + mu I) Gamma + Gamma (A + mu I)^T = -I, which makes the
// Lyapunov inequality hold with slack exactly I, and
// alpha = |sqrt(Pi) sqrt(Gamma)| * |Gamma^{-1/2} (P + i Theta) sqrt(Pi)|.
DecayCertificate make_certificate(const StateSpace& ss, const InvariantModel& inv,
                                  const OqhoParams& params, double mu);

// Evaluates the certificate checks on the supplied tau grid.
CertificateCheck verify_certificate(const DecayCertificate& cert, const StateSpace& ss,
                                    const InvariantModel& inv, const OqhoParams& params,
                                    std::span<const double> taus,
                                    double tol = kCertificateMarginTol);

// Uniform tau grid over [0, span/mu]; the default matches the certificate
// soundness checks (50 points spanning ten decay times).
std::vector<double> default_verification_grid(double mu, int points = 50, double span = 10.0);

// Scans a geometric mu grid over (0, -spectral_abscissa(A)), 1% margins at
// both ends, evaluating the closed-form worst-case bound at threshold eps for
// each candidate certificate; returns the minimizer (smallest mu on ties).
DecayCertificate optimize_mu(const StateSpace& ss, const InvariantModel& inv,
                             const OqhoParams& params, double eps, int grid = 64);

}  // namespace roqs
