#include "roqs/matnum.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

namespace roqs {

namespace {

void require_square(const Eigen::Ref<const Eigen::MatrixXd>& M, const char* who) {
  if (M.rows() != M.cols()) {
    throw DimensionMismatchError(std::string(who) + ": matrix must be square, got " +
                                 std::to_string(M.rows()) + "x" + std::to_string(M.cols()));
  }
}

bool is_symmetric(const Eigen::Ref<const Eigen::MatrixXd>& M, double tol) {
  return (M - M.transpose()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

double operator_norm(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  if (M.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXd>(M).singularValues()(0);
}

double operator_norm(const Eigen::Ref<const Eigen::MatrixXcd>& M) {
  if (M.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Eigen::MatrixXcd>(M).singularValues()(0);
}

double spectral_abscissa(const Eigen::Ref<const Eigen::MatrixXd>& A) {
  require_square(A, "spectral_abscissa");
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, /*computeEigenvectors=*/false);
  return es.eigenvalues().real().maxCoeff();
}

double min_eigenvalue_sym(const Eigen::Ref<const Eigen::MatrixXd>& S) {
  require_square(S, "min_eigenvalue_sym");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

bool psd_order_holds(const Eigen::Ref<const Eigen::MatrixXd>& L,
                     const Eigen::Ref<const Eigen::MatrixXd>& R,
                     double tol) {
  require_square(L, "psd_order_holds");
  if (L.rows() != R.rows() || L.cols() != R.cols()) {
    throw DimensionMismatchError("psd_order_holds: operands must have equal size");
  }
  return min_eigenvalue_sym(R - L) >= -tol;
}

Eigen::MatrixXd solve_lyapunov(const Eigen::Ref<const Eigen::MatrixXd>& A,
                               const Eigen::Ref<const Eigen::MatrixXd>& Q,
                               double residual_tol) {
  require_square(A, "solve_lyapunov");
  require_square(Q, "solve_lyapunov");
  if (A.rows() != Q.rows()) {
    throw DimensionMismatchError("solve_lyapunov: A and Q must have equal size");
  }
  const double q_norm = operator_norm(Q);
  if (!is_symmetric(Q, 1e-12 * (1.0 + q_norm))) {
    throw std::invalid_argument("solve_lyapunov: Q must be symmetric");
  }
  const double abscissa = spectral_abscissa(A);
  if (abscissa >= 0.0) {
    throw NotHurwitzError("solve_lyapunov: A is not Hurwitz (spectral abscissa " +
                          std::to_string(abscissa) + ")");
  }

  const Eigen::Index n = A.rows();
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  // vec(A X + X A^T) = (I (x) A + A (x) I) vec(X) in column-major vec.
  Eigen::MatrixXd lhs = Eigen::kroneckerProduct(eye, A).eval() +
                        Eigen::kroneckerProduct(A, eye).eval();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);

  const auto solve_for = [&](const Eigen::MatrixXd& rhs) {
    Eigen::VectorXd v = lu.solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), n * n));
    Eigen::MatrixXd X = Eigen::Map<const Eigen::MatrixXd>(v.data(), n, n);
    return Eigen::MatrixXd(0.5 * (X + X.transpose()));
  };

  Eigen::MatrixXd X = solve_for(-Q);
  const double bound = residual_tol * (1.0 + q_norm);
  // Iterative refinement reuses the factorization; a couple of sweeps puts the
  // residual at roundoff level even near-singular shifts.
  for (int sweep = 0; sweep < 4; ++sweep) {
    Eigen::MatrixXd residual = A * X + X * A.transpose() + Q;
    if (operator_norm(residual) <= bound) return X;
    X += solve_for(residual);
  }
  Eigen::MatrixXd residual = A * X + X * A.transpose() + Q;
  const double r_norm = operator_norm(residual);
  if (r_norm <= bound) return X;
  throw SingularSolveError("solve_lyapunov: residual " + std::to_string(r_norm) +
                           " exceeds tolerance " + std::to_string(bound) +
                           "; system is numerically singular");
}

Eigen::MatrixXd expm(const Eigen::Ref<const Eigen::MatrixXd>& A) {
  require_square(A, "expm");
  return A.exp();
}

Eigen::MatrixXd sqrtm_psd(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  require_square(M, "sqrtm_psd");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success) {
    throw SingularSolveError("sqrtm_psd: eigendecomposition failed");
  }
  Eigen::VectorXd d = es.eigenvalues();
  const double norm = d.cwiseAbs().maxCoeff();
  const double clamp = kPsdClampFactor * norm;
  if (d.minCoeff() < -clamp) {
    throw NotPsdError("sqrtm_psd: eigenvalue " + std::to_string(d.minCoeff()) +
                      " below clamp threshold " + std::to_string(-clamp));
  }
  Eigen::VectorXd s = d.cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXd root = es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (root + root.transpose());
}

Eigen::MatrixXd inv_sqrtm_pd(const Eigen::Ref<const Eigen::MatrixXd>& M) {
  require_square(M, "inv_sqrtm_pd");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.info() != Eigen::Success) {
    throw SingularSolveError("inv_sqrtm_pd: eigendecomposition failed");
  }
  Eigen::VectorXd d = es.eigenvalues();
  const double norm = d.cwiseAbs().maxCoeff();
  if (d.minCoeff() <= kPsdClampFactor * norm) {
    throw NotPsdError("inv_sqrtm_pd: matrix is not positive definite (min eigenvalue " +
                      std::to_string(d.minCoeff()) + ")");
  }
  Eigen::VectorXd s = d.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd root = es.eigenvectors() * s.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (root + root.transpose());
}

}  // namespace roqs
