#include "roqs/oqho.hpp"

#include <cmath>
#include <complex>
#include <string>

#include "roqs/matnum.hpp"

namespace roqs {

namespace {

double max_abs(const Eigen::MatrixXd& M) {
  return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff();
}

}  // namespace

Eigen::MatrixXd canonical_symplectic(Eigen::Index size) {
  if (size <= 0 || size % 2 != 0) {
    throw InvalidParamsError("canonical_symplectic: order must be even and positive, got " +
                             std::to_string(size));
  }
  const Eigen::Index h = size / 2;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(size, size);
  J.topRightCorner(h, h) = Eigen::MatrixXd::Identity(h, h);
  J.bottomLeftCorner(h, h) = -Eigen::MatrixXd::Identity(h, h);
  return J;
}

void OqhoParams::validate() const {
  const Eigen::Index nn = Theta.rows();
  const Eigen::Index mm = M.rows();
  if (nn <= 0 || nn % 2 != 0) {
    throw InvalidParamsError("params: n must be even and positive, got " + std::to_string(nn));
  }
  if (mm <= 0 || mm % 2 != 0) {
    throw InvalidParamsError("params: m must be even and positive, got " + std::to_string(mm));
  }
  if (Theta.cols() != nn) throw InvalidParamsError("params: Theta must be square");
  if (K.rows() != nn || K.cols() != nn) {
    throw InvalidParamsError("params: K must be n x n with n = " + std::to_string(nn));
  }
  if (M.cols() != nn) {
    throw InvalidParamsError("params: M must be m x n with n = " + std::to_string(nn));
  }
  if (Pi.rows() != nn || Pi.cols() != nn) {
    throw InvalidParamsError("params: Pi must be n x n with n = " + std::to_string(nn));
  }
  if (!Theta.allFinite() || !K.allFinite() || !M.allFinite() || !Pi.allFinite()) {
    throw InvalidParamsError("params: entries must be finite");
  }
  if (max_abs(Theta + Theta.transpose()) > 1e-12 * (1.0 + max_abs(Theta))) {
    throw InvalidParamsError("params: Theta must be antisymmetric");
  }
  const double theta_norm = operator_norm(Theta);
  const double det = Theta.determinant();
  if (std::abs(det) <= 1e-12 * std::pow(theta_norm, static_cast<double>(nn))) {
    throw InvalidParamsError("params: Theta must be nonsingular (|det| = " +
                             std::to_string(std::abs(det)) + ")");
  }
  if (max_abs(K - K.transpose()) > 1e-12 * (1.0 + max_abs(K))) {
    throw InvalidParamsError("params: K must be symmetric");
  }
  if (max_abs(Pi - Pi.transpose()) > 1e-12 * (1.0 + max_abs(Pi))) {
    throw InvalidParamsError("params: Pi must be symmetric");
  }
  const double pi_norm = operator_norm(Pi);
  if (min_eigenvalue_sym(Pi) < -kPsdClampFactor * pi_norm) {
    throw InvalidParamsError("params: Pi must be positive semi-definite");
  }
}

StateSpace build_state_space(const OqhoParams& params) {
  params.validate();
  StateSpace ss;
  ss.J = canonical_symplectic(params.m());
  ss.A = 2.0 * params.Theta * (params.K + params.M.transpose() * ss.J * params.M);
  ss.B = 2.0 * params.Theta * params.M.transpose();
  ss.hurwitz = spectral_abscissa(ss.A) < 0.0;
  ss.pr_residual = check_physical_realizability(ss, params.Theta);
  return ss;
}

double check_physical_realizability(const StateSpace& ss,
                                    const Eigen::Ref<const Eigen::MatrixXd>& Theta) {
  const Eigen::Index n = ss.A.rows();
  const Eigen::Index m = ss.B.cols();
  if (ss.A.cols() != n || Theta.rows() != n || Theta.cols() != n ||
      ss.B.rows() != n || ss.J.rows() != m || ss.J.cols() != m) {
    throw DimensionMismatchError("check_physical_realizability: inconsistent dimensions");
  }
  return operator_norm(ss.A * Theta + Theta * ss.A.transpose() +
                       ss.B * ss.J * ss.B.transpose());
}

InvariantModel invariant_model(const OqhoParams& params, const StateSpace& ss) {
  if (!ss.hurwitz) {
    throw NotHurwitzError("invariant_model: drift matrix is not Hurwitz");
  }
  InvariantModel inv;
  inv.P = solve_lyapunov(ss.A, ss.B * ss.B.transpose());
  inv.Theta = params.Theta;
  inv.nominal_rate = (params.Pi * inv.P).trace();
  return inv;
}

Eigen::MatrixXd ccr_kernel(const StateSpace& ss,
                           const Eigen::Ref<const Eigen::MatrixXd>& Theta,
                           double tau) {
  if (tau == 0.0) return Theta;
  if (tau > 0.0) return expm(tau * ss.A) * Theta;
  return Theta * expm(-tau * ss.A.transpose());
}

Eigen::MatrixXd covariance_kernel(const InvariantModel& inv, const StateSpace& ss,
                                  double tau) {
  if (tau == 0.0) return inv.P;
  if (tau > 0.0) return expm(tau * ss.A) * inv.P;
  return inv.P * expm(-tau * ss.A.transpose());
}

Eigen::MatrixXcd weighted_covariance(const OqhoParams& params, const InvariantModel& inv,
                                     const StateSpace& ss, double tau) {
  const Eigen::MatrixXd root = sqrtm_psd(params.Pi);
  Eigen::MatrixXcd inner = covariance_kernel(inv, ss, tau).cast<std::complex<double>>();
  inner += std::complex<double>(0.0, 1.0) * ccr_kernel(ss, params.Theta, tau);
  return root * inner * root;
}

}  // namespace roqs
