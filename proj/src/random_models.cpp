#include "roqs/random_models.hpp"

#include <string>

#include "roqs/matnum.hpp"

namespace roqs {

namespace {

Eigen::MatrixXd standard_normal(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd G(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) G(i, j) = gauss(rng);
  }
  return G;
}

}  // namespace

Eigen::MatrixXd random_psd_weight(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::MatrixXd G = standard_normal(rng, n, n);
  return Eigen::MatrixXd(G.transpose() * G / static_cast<double>(n));
}

Eigen::MatrixXd random_hurwitz(std::mt19937_64& rng, Eigen::Index n) {
  Eigen::MatrixXd R = standard_normal(rng, n, n);
  std::uniform_real_distribution<double> margin(0.5, 1.5);
  const double shift = spectral_abscissa(R) + margin(rng);
  return Eigen::MatrixXd(R - shift * Eigen::MatrixXd::Identity(n, n));
}

OqhoParams random_oqho_params(std::mt19937_64& rng, Eigen::Index n, Eigen::Index m,
                              int max_attempts) {
  OqhoParams params;
  params.Theta = canonical_symplectic(n);
  params.Pi = random_psd_weight(rng, n);
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Eigen::MatrixXd G = standard_normal(rng, n, n);
    params.K = 0.5 * (G + G.transpose());
    params.M = standard_normal(rng, m, n);
    const Eigen::MatrixXd J = canonical_symplectic(m);
    const Eigen::MatrixXd A =
        2.0 * params.Theta * (params.K + params.M.transpose() * J * params.M);
    if (spectral_abscissa(A) < -1e-6) return params;
  }
  throw NotHurwitzError("random_oqho_params: no Hurwitz draw within " +
                        std::to_string(max_attempts) + " attempts (n = " +
                        std::to_string(n) + ", m = " + std::to_string(m) + ")");
}

}  // namespace roqs
