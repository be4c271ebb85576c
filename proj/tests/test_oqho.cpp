#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "roqs/matnum.hpp"
#include "roqs/oqho.hpp"
#include "roqs/random_models.hpp"
#include "worked_model.hpp"

using Eigen::MatrixXd;
using Eigen::MatrixXcd;

namespace {

// Sizes at which the reject-and-resample generator converges quickly.
constexpr int kSizes[6][2] = {{2, 2}, {4, 2}, {4, 4}, {6, 4}, {6, 6}, {8, 8}};

}  // namespace

TEST_CASE("canonical symplectic form") {
  const MatrixXd J = roqs::canonical_symplectic(4);
  CHECK(roqs::operator_norm(MatrixXd(J * J + MatrixXd::Identity(4, 4))) <= 1e-15);
  CHECK(roqs::operator_norm(MatrixXd(J + J.transpose())) == 0.0);
  CHECK_THROWS_AS(roqs::canonical_symplectic(3), roqs::InvalidParamsError);
}

TEST_CASE("worked model state space") {
  const roqs::StateSpace ss = roqs::build_state_space(worked_model());
  CHECK(roqs::operator_norm(MatrixXd(ss.A + 2.0 * MatrixXd::Identity(2, 2))) <= 1e-14);
  CHECK(roqs::operator_norm(MatrixXd(ss.B - 2.0 * roqs::canonical_symplectic(2))) <= 1e-14);
  CHECK(ss.pr_residual <= 1e-12);
  CHECK(ss.hurwitz);
}

TEST_CASE("zero coupling is realizable but not stable") {
  roqs::OqhoParams params = worked_model();
  params.M = MatrixXd::Zero(2, 2);
  const roqs::StateSpace ss = roqs::build_state_space(params);
  CHECK(roqs::operator_norm(ss.A) == 0.0);
  CHECK(roqs::operator_norm(ss.B) == 0.0);
  CHECK_FALSE(ss.hurwitz);
  CHECK(ss.pr_residual <= 1e-15);
  CHECK_THROWS_AS(roqs::invariant_model(params, ss), roqs::NotHurwitzError);
}

TEST_CASE("parameter invariants are enforced") {
  roqs::OqhoParams params = worked_model();

  params.Theta = MatrixXd::Identity(2, 2);  // symmetric, not antisymmetric
  CHECK_THROWS_AS(params.validate(), roqs::InvalidParamsError);

  params = worked_model();
  params.Theta = MatrixXd::Zero(2, 2);  // singular
  CHECK_THROWS_AS(params.validate(), roqs::InvalidParamsError);

  params = worked_model();
  params.K(0, 1) = 0.3;  // asymmetric K
  CHECK_THROWS_AS(params.validate(), roqs::InvalidParamsError);

  params = worked_model();
  params.Pi(0, 0) = -1.0;  // indefinite Pi
  CHECK_THROWS_AS(params.validate(), roqs::InvalidParamsError);

  params = worked_model();
  params.M = MatrixXd::Zero(2, 3);  // wrong column count
  CHECK_THROWS_AS(params.validate(), roqs::InvalidParamsError);

  params = worked_model();
  params.M = MatrixXd::Zero(3, 2);  // odd channel count
  CHECK_THROWS_AS(params.validate(), roqs::InvalidParamsError);
}

TEST_CASE("realizability residual of hand-built state spaces") {
  const MatrixXd J = roqs::canonical_symplectic(2);

  roqs::StateSpace ss;
  ss.J = J;
  ss.B = MatrixXd::Zero(2, 2);
  ss.A = MatrixXd::Zero(2, 2);
  ss.A(0, 0) = 1.0;
  ss.A(1, 1) = 2.0;
  // diag(1,2) J + J diag(1,2) = [[0, 3], [-3, 0]], norm 3.
  CHECK(roqs::check_physical_realizability(ss, J) == doctest::Approx(3.0).epsilon(1e-12));

  // Scalar drift A = -I: A Theta + Theta A^T = -2 Theta, norm 2 for Theta = J.
  ss.A = -MatrixXd::Identity(2, 2);
  CHECK(roqs::check_physical_realizability(ss, J) == doctest::Approx(2.0).epsilon(1e-12));

  CHECK_THROWS_AS(roqs::check_physical_realizability(ss, MatrixXd::Zero(3, 3)),
                  roqs::DimensionMismatchError);
}

TEST_CASE("realizability identity holds for 100 generated models") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto& size = kSizes[trial % 6];
    const roqs::OqhoParams params = roqs::random_oqho_params(rng, size[0], size[1]);
    const roqs::StateSpace ss = roqs::build_state_space(params);
    CHECK(ss.pr_residual <= 1e-10);
    CHECK(ss.hurwitz);
  }
}

TEST_CASE("invariant model of the worked example") {
  const roqs::OqhoParams params = worked_model();
  const roqs::StateSpace ss = roqs::build_state_space(params);
  const roqs::InvariantModel inv = roqs::invariant_model(params, ss);
  CHECK(roqs::operator_norm(MatrixXd(inv.P - MatrixXd::Identity(2, 2))) <= 1e-12);
  CHECK(inv.nominal_rate == doctest::Approx(2.0).epsilon(1e-12));

  roqs::OqhoParams no_cost = params;
  no_cost.Pi = MatrixXd::Zero(2, 2);
  const roqs::InvariantModel inv0 = roqs::invariant_model(no_cost, ss);
  CHECK(inv0.nominal_rate == 0.0);
}

TEST_CASE("invariant covariance is PSD and satisfies its equation on random models") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const auto& size = kSizes[trial % 6];
    const roqs::OqhoParams params = roqs::random_oqho_params(rng, size[0], size[1]);
    const roqs::StateSpace ss = roqs::build_state_space(params);
    const roqs::InvariantModel inv = roqs::invariant_model(params, ss);
    const MatrixXd residual =
        ss.A * inv.P + inv.P * ss.A.transpose() + ss.B * ss.B.transpose();
    CHECK(roqs::operator_norm(residual) <=
          1e-10 * (1.0 + roqs::operator_norm(MatrixXd(ss.B * ss.B.transpose()))));
    CHECK(roqs::min_eigenvalue_sym(inv.P) >= -1e-10);
    CHECK(inv.nominal_rate >= -1e-12);
  }
}

TEST_CASE("ccr kernel closed forms") {
  const roqs::OqhoParams params = worked_model();
  const roqs::StateSpace ss = roqs::build_state_space(params);
  const MatrixXd J = roqs::canonical_symplectic(2);

  CHECK((roqs::ccr_kernel(ss, params.Theta, 0.0) - params.Theta).cwiseAbs().maxCoeff() == 0.0);
  CHECK(roqs::operator_norm(
            MatrixXd(roqs::ccr_kernel(ss, params.Theta, 1.0) - std::exp(-2.0) * J)) <= 1e-12);
}

TEST_CASE("covariance kernel closed forms") {
  const roqs::OqhoParams params = worked_model();
  const roqs::StateSpace ss = roqs::build_state_space(params);
  const roqs::InvariantModel inv = roqs::invariant_model(params, ss);

  CHECK((roqs::covariance_kernel(inv, ss, 0.0) - inv.P).cwiseAbs().maxCoeff() == 0.0);
  CHECK(roqs::operator_norm(MatrixXd(roqs::covariance_kernel(inv, ss, 0.5) -
                                     std::exp(-1.0) * MatrixXd::Identity(2, 2))) <= 1e-12);
}

TEST_CASE("kernel symmetries across tau") {
  std::mt19937_64 rng(13);
  const roqs::OqhoParams params = roqs::random_oqho_params(rng, 4, 2);
  const roqs::StateSpace ss = roqs::build_state_space(params);
  const roqs::InvariantModel inv = roqs::invariant_model(params, ss);
  for (double tau : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const MatrixXd forward = roqs::ccr_kernel(ss, params.Theta, tau);
    const MatrixXd backward = roqs::ccr_kernel(ss, params.Theta, -tau);
    CHECK(roqs::operator_norm(MatrixXd(backward + forward.transpose())) <= 1e-10);

    const MatrixXd cov_f = roqs::covariance_kernel(inv, ss, tau);
    const MatrixXd cov_b = roqs::covariance_kernel(inv, ss, -tau);
    CHECK(roqs::operator_norm(MatrixXd(cov_b - cov_f.transpose())) <= 1e-10);
  }
}

TEST_CASE("weighted covariance of the worked model") {
  const roqs::OqhoParams params = worked_model();
  const roqs::StateSpace ss = roqs::build_state_space(params);
  const roqs::InvariantModel inv = roqs::invariant_model(params, ss);
  const MatrixXd J = roqs::canonical_symplectic(2);
  const std::complex<double> imag(0.0, 1.0);

  const MatrixXcd z0 = roqs::weighted_covariance(params, inv, ss, 0.0);
  MatrixXcd expected = MatrixXd::Identity(2, 2).cast<std::complex<double>>() +
                       imag * J.cast<std::complex<double>>();
  CHECK(roqs::operator_norm(MatrixXcd(z0 - expected)) <= 1e-12);
  CHECK(roqs::operator_norm(z0) == doctest::Approx(2.0).epsilon(1e-12));

  const MatrixXcd z1 = roqs::weighted_covariance(params, inv, ss, 1.0);
  CHECK(roqs::operator_norm(MatrixXcd(z1 - std::exp(-2.0) * expected)) <= 1e-12);
  CHECK(roqs::operator_norm(z1) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-12));

  roqs::OqhoParams no_cost = params;
  no_cost.Pi = MatrixXd::Zero(2, 2);
  CHECK(roqs::operator_norm(roqs::weighted_covariance(no_cost, inv, ss, 0.7)) == 0.0);
}

TEST_CASE("weighted covariance norm decays along tau on the worked model") {
  const roqs::OqhoParams params = worked_model();
  const roqs::StateSpace ss = roqs::build_state_space(params);
  const roqs::InvariantModel inv = roqs::invariant_model(params, ss);
  double previous = roqs::operator_norm(roqs::weighted_covariance(params, inv, ss, 0.0));
  for (double tau = 0.25; tau <= 3.0; tau += 0.25) {
    const double current = roqs::operator_norm(roqs::weighted_covariance(params, inv, ss, tau));
    CHECK(current <= previous + 1e-12);
    previous = current;
  }
}
