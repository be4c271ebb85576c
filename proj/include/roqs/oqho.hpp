#pragma once

// Open quantum harmonic oscillator models: physical parameters, the derived
// state-space pair (A, B), the invariant Gaussian state, and the two-point
// commutation/covariance kernels of the system variables.

#include <Eigen/Dense>

#include "roqs/errors.hpp"

namespace roqs {

// Canonical block matrix [[0, I], [-I, 0]] of even order.
Eigen::MatrixXd canonical_symplectic(Eigen::Index size);

// Physical parameters of an open quantum harmonic oscillator with n system
// variables and m field channels. Theta is the CCR matrix ([X, X^T] = 2i Theta),
// K the Hamiltonian matrix (Hamiltonian (1/2) X^T K X), M the system-field
// coupling (coupling vector M X), and Pi the quadratic cost weight.
struct OqhoParams {
  Eigen::MatrixXd Theta;  // n x n, antisymmetric, nonsingular
  Eigen::MatrixXd K;      // n x n, symmetric
  Eigen::MatrixXd M;      // m x n
  Eigen::MatrixXd Pi;     // n x n, symmetric PSD

  Eigen::Index n() const { return Theta.rows(); }
  Eigen::Index m() const { return M.rows(); }

  // Throws InvalidParamsError with a description of the first violated
  // invariant (evenness, symmetry classes, nonsingularity of Theta, shapes).
  void validate() const;
};

// Drift/dispersion pair of the linear QSDE dX = A X dt + B dW together with
// the Ito coupling matrix J of the field and the physical-realizability
// residual |A Theta + Theta A^T + B J B^T|.
struct StateSpace {
  Eigen::MatrixXd A;  // n x n
  Eigen::MatrixXd B;  // n x m
  Eigen::MatrixXd J;  // m x m canonical symplectic
  double pr_residual = 0.0;
  bool hurwitz = false;
};

// Invariant zero-mean Gaussian state of a stable oscillator: quantum
// covariance P + i Theta, and the steady-state cost rate trace(Pi P).
struct InvariantModel {
  Eigen::MatrixXd P;      // n x n symmetric PSD
  Eigen::MatrixXd Theta;  // n x n
  double nominal_rate = 0.0;
};

// A = 2 Theta (K + M^T J M), B = 2 Theta M^T. The parametrization satisfies
// the physical realizability identity, so pr_residual is roundoff-sized.
StateSpace build_state_space(const OqhoParams& params);

// Operator norm of A Theta + Theta A^T + B J B^T; zero within tolerance
// certifies that (A, B) preserves the commutation relations.
double check_physical_realizability(const StateSpace& ss,
                                    const Eigen::Ref<const Eigen::MatrixXd>& Theta);

// Solves A P + P A^T + B B^T = 0 for the steady-state covariance and computes
// the nominal cost rate trace(Pi P). Requires ss.hurwitz.
InvariantModel invariant_model(const OqhoParams& params, const StateSpace& ss);

// Two-point CCR kernel Lambda(tau): e^{tau A} Theta for tau >= 0 and
// Theta e^{-tau A^T} for tau < 0.
Eigen::MatrixXd ccr_kernel(const StateSpace& ss,
                           const Eigen::Ref<const Eigen::MatrixXd>& Theta,
                           double tau);

// Two-point covariance kernel Sigma(tau): e^{tau A} P for tau >= 0 and
// P e^{-tau A^T} for tau < 0.
Eigen::MatrixXd covariance_kernel(const InvariantModel& inv, const StateSpace& ss,
                                  double tau);

// Weighted two-point kernel Z(tau) = sqrt(Pi) (Sigma(tau) + i Lambda(tau)) sqrt(Pi)
// of the cost-shaping variables sqrt(Pi) X.
Eigen::MatrixXcd weighted_covariance(const OqhoParams& params, const InvariantModel& inv,
                                     const StateSpace& ss, double tau);

}  // namespace roqs
