#pragma once

// Classical-limit checks for the covariance machinery: Euler-Maruyama Monte
// Carlo estimates of the stationary quadratic cost rate and its exponential
// moments on the commutative analog of the model (an Ornstein-Uhlenbeck
// process with the same (A, B) and identity noise intensity), plus the exact
// spectral-integral rate used as an independent target.

#include <cstdint>

#include <Eigen/Dense>

#include "roqs/oqho.hpp"

namespace roqs {

struct SimConfig {
  double horizon = 50.0;     // integration horizon T
  double dt = 1e-3;          // Euler-Maruyama step
  int trajectories = 2000;
  std::uint64_t seed = 0;
  double theta = 0.0;        // exponential-moment weight, 0 = quadratic only

  // Throws ConfigInvalidError unless dt > 0, horizon >= 10 dt,
  // trajectories >= 100 and theta >= 0.
  void validate() const;
};

struct SimReport {
  double quad_rate_estimate = 0.0;   // mean of per-path stationary rates
  double quad_rate_stderr = 0.0;

  bool has_exp_rate = false;         // filled only for theta > 0
  double exp_rate_estimate = 0.0;    // (1/(theta T)) ln E exp(theta integral psi)
  double exp_rate_stderr = 0.0;
  std::int64_t overflow_count = 0;   // paths whose exponent left the double range
  bool overflow_flagged = false;     // more than 0.1% of paths overflowed

  double target_nominal_rate = 0.0;  // trace(Pi P), the stationary rate
  double target_spectral_rate = 0.0; // spectral rate at cfg.theta (theta > 0)
  bool finite_horizon_flag = false;  // horizon shorter than 5 decay times
  double burn_in = 0.0;              // discarded initial stretch per path
};

// Estimates the stationary quadratic cost rate (1/T) E integral of x^T Pi x
// from Euler-Maruyama paths of dx = A x dt + B dw started at x = 0, after
// discarding a burn-in stretch. Requires ss.hurwitz.
SimReport simulate_quadratic_rate(const StateSpace& ss, const OqhoParams& params,
                                  const SimConfig& cfg);

// Additionally estimates (1/(theta T)) ln E exp(theta integral of x^T Pi x)
// over the full horizon via log-sum-exp accumulation; requires cfg.theta > 0
// and theta below the classical critical threshold (for the spectral target).
SimReport simulate_exp_moment_rate(const StateSpace& ss, const OqhoParams& params,
                                   const SimConfig& cfg);

// Exact classical rate (1/(4 pi theta)) * integral over the real line of
// -ln det(I - 2 theta Phi(lambda)), with the spectral density
// Phi(lambda) = sqrt(Pi) (i lambda I - A)^{-1} B B^T (-i lambda I - A^T)^{-1} sqrt(Pi).
// Converges to trace(Pi P) as theta -> 0 (returned exactly at theta = 0).
// Throws ThetaSupercriticalError when 2 theta Phi reaches the identity.
double classical_spectral_rate(const StateSpace& ss, const OqhoParams& params,
                               double theta, double quad_tol = 1e-9);

// Estimate of the critical theta: 1 / (2 sup over lambda of |Phi(lambda)|).
double classical_critical_theta(const StateSpace& ss, const OqhoParams& params);

// Seed of the RNG stream that drives trajectory k (SplitMix64 counter mix);
// exposed so reports and tests can document the per-path streams.
std::uint64_t trajectory_seed(std::uint64_t seed, std::int64_t k);

}  // namespace roqs
