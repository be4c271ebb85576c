#pragma once

// Dense real/complex matrix numerics shared by every other module: algebraic
// Lyapunov solves, matrix exponentials, PSD square roots and spectral
// quantities. Everything here is desk scale (dimensions well below ~64) and
// double precision.

#include <Eigen/Dense>

#include "roqs/errors.hpp"

namespace roqs {

// Eigenvalue clamp threshold for PSD square roots, relative to the operator
// norm of the input. Eigenvalues in [-kPsdClampFactor*norm, 0) are treated
// as zero; anything below is an error.
inline constexpr double kPsdClampFactor = 1e-12;

// Default residual tolerance of the Lyapunov solver: the returned X satisfies
// |A X + X A^T + Q| <= kLyapunovResidualTol * (1 + |Q|) in operator norm.
inline constexpr double kLyapunovResidualTol = 1e-10;

// Largest singular value.
double operator_norm(const Eigen::Ref<const Eigen::MatrixXd>& M);
double operator_norm(const Eigen::Ref<const Eigen::MatrixXcd>& M);

// Largest real part over the eigenvalues of A.
double spectral_abscissa(const Eigen::Ref<const Eigen::MatrixXd>& A);

// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue_sym(const Eigen::Ref<const Eigen::MatrixXd>& S);

// true iff L is below R in the PSD order within tol:
// min eigenvalue of (R - L) >= -tol.
bool psd_order_holds(const Eigen::Ref<const Eigen::MatrixXd>& L,
                     const Eigen::Ref<const Eigen::MatrixXd>& R,
                     double tol);

// Solves A X + X A^T + Q = 0 for symmetric X, A Hurwitz and Q symmetric.
// Vectorizes through the Kronecker sum (adequate at this scale) and refines
// until the residual meets residual_tol * (1 + |Q|).
//
// Throws NotHurwitzError when spectral_abscissa(A) >= 0 and SingularSolveError
// when the linearized system cannot be solved to the requested residual.
Eigen::MatrixXd solve_lyapunov(const Eigen::Ref<const Eigen::MatrixXd>& A,
                               const Eigen::Ref<const Eigen::MatrixXd>& Q,
                               double residual_tol = kLyapunovResidualTol);

// Matrix exponential e^A (scaling-and-squaring with Pade approximation).
Eigen::MatrixXd expm(const Eigen::Ref<const Eigen::MatrixXd>& A);

// Symmetric PSD square root via eigendecomposition. Eigenvalues slightly
// negative from roundoff (above -kPsdClampFactor*|M|) are clamped to zero;
// anything below throws NotPsdError.
Eigen::MatrixXd sqrtm_psd(const Eigen::Ref<const Eigen::MatrixXd>& M);

// Inverse square root of a symmetric positive definite matrix.
Eigen::MatrixXd inv_sqrtm_pd(const Eigen::Ref<const Eigen::MatrixXd>& M);

}  // namespace roqs
