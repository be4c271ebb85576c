#pragma once

// Random model generation for tests and property checks: K symmetric and M
// with standard normal entries, Theta the canonical symplectic form, Pi a
// random symmetric PSD weight, with reject-and-resample until the drift
// matrix is Hurwitz.

#include <random>

#include "roqs/oqho.hpp"

namespace roqs {

// Draws parameters with n system variables and m field channels (both even).
// Throws NotHurwitzError if no stable draw appears within max_attempts.
OqhoParams random_oqho_params(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m,
                              int max_attempts = 10000);

// Random symmetric PSD cost weight Pi = G^T G / n with G standard normal.
Eigen::MatrixXd random_psd_weight(std::mt19937_64& rng, Eigen::Index n);

// Random Hurwitz matrix: standard normal entries shifted left of the
// imaginary axis by the spectral abscissa plus a margin drawn from [0.5, 1.5].
Eigen::MatrixXd random_hurwitz(std::mt19937_64& rng, Eigen::Index n);

}  // namespace roqs
