#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "roqs/matnum.hpp"
#include "roqs/oqho.hpp"
#include "roqs/random_models.hpp"

using Eigen::MatrixXd;
using Eigen::MatrixXcd;

namespace {

MatrixXd random_symmetric(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> gauss;
  MatrixXd G(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) G(i, j) = gauss(rng);
  return MatrixXd(0.5 * (G + G.transpose()));
}

}  // namespace

TEST_CASE("solve_lyapunov hand-checked values") {
  // -2I X + X (-2I) + 4I = 0  ->  X = I
  const MatrixXd X = roqs::solve_lyapunov(-2.0 * MatrixXd::Identity(2, 2),
                                          4.0 * MatrixXd::Identity(2, 2));
  CHECK(roqs::operator_norm(MatrixXd(X - MatrixXd::Identity(2, 2))) <= 1e-12);

  // scalar: -2x + 2 = 0 -> x = 1
  MatrixXd a(1, 1), q(1, 1);
  a << -1.0;
  q << 2.0;
  CHECK(roqs::solve_lyapunov(a, q)(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("solve_lyapunov residual contract on random systems") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 1 + (trial % 8);
    const MatrixXd A = roqs::random_hurwitz(rng, n);
    const MatrixXd Q = random_symmetric(rng, n);
    const MatrixXd X = roqs::solve_lyapunov(A, Q);
    const double residual = roqs::operator_norm(MatrixXd(A * X + X * A.transpose() + Q));
    CHECK(residual <= 1e-10 * (1.0 + roqs::operator_norm(Q)));
    CHECK(roqs::operator_norm(MatrixXd(X - X.transpose())) <= 1e-12 * (1.0 + roqs::operator_norm(X)));
  }
}

TEST_CASE("solve_lyapunov rejects unstable or malformed input") {
  CHECK_THROWS_AS(roqs::solve_lyapunov(MatrixXd::Identity(2, 2), MatrixXd::Identity(2, 2)),
                  roqs::NotHurwitzError);
  CHECK_THROWS_AS(roqs::solve_lyapunov(MatrixXd::Zero(1, 1), MatrixXd::Identity(1, 1)),
                  roqs::NotHurwitzError);
  MatrixXd asym(2, 2);
  asym << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(roqs::solve_lyapunov(-MatrixXd::Identity(2, 2), asym),
                  std::invalid_argument);
  CHECK_THROWS_AS(roqs::solve_lyapunov(-MatrixXd::Identity(2, 2), MatrixXd::Identity(3, 3)),
                  roqs::DimensionMismatchError);
}

TEST_CASE("expm closed forms") {
  CHECK(roqs::operator_norm(
            MatrixXd(roqs::expm(MatrixXd::Zero(3, 3)) - MatrixXd::Identity(3, 3))) == 0.0);

  MatrixXd d = MatrixXd::Zero(2, 2);
  d(0, 0) = -1.0;
  d(1, 1) = -2.0;
  const MatrixXd ed = roqs::expm(d);
  CHECK(ed(0, 0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(ed(1, 1) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(std::abs(ed(0, 1)) <= 1e-15);

  // e^J is the rotation by one radian.
  const MatrixXd J = roqs::canonical_symplectic(2);
  MatrixXd rot(2, 2);
  rot << std::cos(1.0), std::sin(1.0), -std::sin(1.0), std::cos(1.0);
  CHECK(roqs::operator_norm(MatrixXd(roqs::expm(J) - rot)) <= 1e-13);
}

TEST_CASE("expm semigroup property") {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> span(0.0, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index n = 2 + (trial % 5);
    const MatrixXd A = roqs::random_hurwitz(rng, n);
    const double s = span(rng);
    const double t = span(rng);
    const MatrixXd lhs = roqs::expm((s + t) * A);
    const MatrixXd rhs = roqs::expm(s * A) * roqs::expm(t * A);
    CHECK(roqs::operator_norm(MatrixXd(lhs - rhs)) <= 1e-9);
  }
}

TEST_CASE("operator_norm on fixed matrices") {
  CHECK(roqs::operator_norm(MatrixXd::Identity(2, 2)) == doctest::Approx(1.0).epsilon(1e-14));

  // I + iJ is Hermitian with eigenvalues {0, 2}.
  const MatrixXd J = roqs::canonical_symplectic(2);
  MatrixXcd H = MatrixXd::Identity(2, 2).cast<std::complex<double>>() +
                std::complex<double>(0.0, 1.0) * J.cast<std::complex<double>>();
  CHECK(roqs::operator_norm(H) == doctest::Approx(2.0).epsilon(1e-12));

  MatrixXd d = MatrixXd::Zero(2, 2);
  d(0, 0) = 3.0;
  d(1, 1) = -4.0;
  CHECK(roqs::operator_norm(d) == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("operator_norm is submultiplicative") {
  std::mt19937_64 rng(303);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::Index n = 2 + (trial % 6);
    MatrixXd M(n, n), N(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) {
        M(i, j) = gauss(rng);
        N(i, j) = gauss(rng);
      }
    CHECK(roqs::operator_norm(MatrixXd(M * N)) <=
          roqs::operator_norm(M) * roqs::operator_norm(N) + 1e-9);
  }
}

TEST_CASE("sqrtm_psd closed forms and round trip") {
  CHECK(roqs::operator_norm(
            MatrixXd(roqs::sqrtm_psd(MatrixXd::Identity(3, 3)) - MatrixXd::Identity(3, 3))) <=
        1e-14);

  MatrixXd d = MatrixXd::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  const MatrixXd r = roqs::sqrtm_psd(d);
  CHECK(r(0, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(r(1, 1) == doctest::Approx(3.0).epsilon(1e-14));

  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 25; ++trial) {
    const Eigen::Index n = 2 + (trial % 6);
    const MatrixXd root = roqs::random_psd_weight(rng, n);
    const MatrixXd M = root * root;
    CHECK(roqs::operator_norm(MatrixXd(roqs::sqrtm_psd(M) - root)) <=
          1e-9 * (1.0 + roqs::operator_norm(M)));
    const MatrixXd S = roqs::sqrtm_psd(M);
    CHECK(roqs::operator_norm(MatrixXd(S * S - M)) <= 1e-9 * (1.0 + roqs::operator_norm(M)));
  }
}

TEST_CASE("sqrtm_psd rejects indefinite input") {
  MatrixXd d = MatrixXd::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  CHECK_THROWS_AS(roqs::sqrtm_psd(d), roqs::NotPsdError);
}

TEST_CASE("inv_sqrtm_pd inverts the PSD root") {
  std::mt19937_64 rng(505);
  const MatrixXd W = roqs::random_psd_weight(rng, 4) + 0.1 * MatrixXd::Identity(4, 4);
  const MatrixXd inv_root = roqs::inv_sqrtm_pd(W);
  CHECK(roqs::operator_norm(MatrixXd(inv_root * W * inv_root - MatrixXd::Identity(4, 4))) <=
        1e-10);
  CHECK_THROWS_AS(roqs::inv_sqrtm_pd(MatrixXd::Zero(2, 2)), roqs::NotPsdError);
}

TEST_CASE("spectral_abscissa on fixed matrices") {
  CHECK(roqs::spectral_abscissa(-2.0 * MatrixXd::Identity(3, 3)) ==
        doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(std::abs(roqs::spectral_abscissa(roqs::canonical_symplectic(2))) <= 1e-10);
  MatrixXd d = MatrixXd::Zero(2, 2);
  d(0, 0) = -1.0;
  d(1, 1) = -3.0;
  CHECK(roqs::spectral_abscissa(d) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("psd_order_holds") {
  const MatrixXd I2 = MatrixXd::Identity(2, 2);
  CHECK(roqs::psd_order_holds(-2.0 * I2, -I2, 1e-12));
  CHECK_FALSE(roqs::psd_order_holds(I2, MatrixXd::Zero(2, 2), 1e-12));

  // Worked model at mu = 1: A Gamma + Gamma A^T = -2I is below -2 mu Gamma = -I.
  const MatrixXd A = -2.0 * I2;
  const MatrixXd Gamma = 0.5 * I2;
  CHECK(roqs::psd_order_holds(MatrixXd(A * Gamma + Gamma * A.transpose()),
                              MatrixXd(-2.0 * 1.0 * Gamma), 1e-12));
}
