#include "roqs/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "roqs/matnum.hpp"
#include "roqs/quadrature.hpp"

namespace roqs {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kExpOverflow = 709.0;  // ln(DBL_MAX) rounded down

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

struct PathAccumulators {
  std::vector<double> quad;  // integral of psi over [burn, T]
  std::vector<double> phi;   // integral of psi over [0, T]
};

// One Euler-Maruyama trajectory batch. Templating on the compile-time sizes
// keeps the inner loop allocation-free and unrolled for the common small
// models; the Dynamic instantiation covers everything else.
template <int N, int M>
void run_path_range(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                    const Eigen::MatrixXd& Pi, const SimConfig& cfg, std::int64_t steps,
                    std::int64_t burn_steps, int begin, int end, PathAccumulators& out) {
  using VecN = Eigen::Matrix<double, N, 1>;
  using VecM = Eigen::Matrix<double, M, 1>;
  using MatNN = Eigen::Matrix<double, N, N>;
  using MatNM = Eigen::Matrix<double, N, M>;
  const Eigen::Index n = A.rows();
  const Eigen::Index m = B.cols();
  const MatNN drift_dt = A * cfg.dt;
  const MatNM noise_sqdt = B * std::sqrt(cfg.dt);
  const MatNN weight = Pi;

  for (int k = begin; k < end; ++k) {
    std::mt19937_64 rng(trajectory_seed(cfg.seed, k));
    std::normal_distribution<double> gauss;
    VecN x = VecN::Zero(n);
    VecM z(m);
    double quad = 0.0;
    double phi = 0.0;
    for (std::int64_t s = 0; s < steps; ++s) {
      const double psi = x.dot(weight * x);
      phi += psi;
      if (s >= burn_steps) quad += psi;
      for (Eigen::Index j = 0; j < m; ++j) z(j) = gauss(rng);
      x += drift_dt * x + noise_sqdt * z;
    }
    out.quad[k] = quad * cfg.dt;
    out.phi[k] = phi * cfg.dt;
  }
}

PathAccumulators run_paths(const StateSpace& ss, const OqhoParams& params,
                           const SimConfig& cfg, std::int64_t steps,
                           std::int64_t burn_steps) {
  PathAccumulators out;
  out.quad.resize(cfg.trajectories);
  out.phi.resize(cfg.trajectories);

  const auto run_range = [&](int begin, int end) {
    if (ss.A.rows() == 2 && ss.B.cols() == 2) {
      run_path_range<2, 2>(ss.A, ss.B, params.Pi, cfg, steps, burn_steps, begin, end, out);
    } else if (ss.A.rows() == 4 && ss.B.cols() == 2) {
      run_path_range<4, 2>(ss.A, ss.B, params.Pi, cfg, steps, burn_steps, begin, end, out);
    } else {
      run_path_range<Eigen::Dynamic, Eigen::Dynamic>(ss.A, ss.B, params.Pi, cfg, steps,
                                                     burn_steps, begin, end, out);
    }
  };

  // Trajectories are independent and each writes its own slot, so any worker
  // count yields bit-identical results.
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers =
      std::min<unsigned>(hw, static_cast<unsigned>(cfg.trajectories));
  if (workers <= 1) {
    run_range(0, cfg.trajectories);
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const int chunk = (cfg.trajectories + static_cast<int>(workers) - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const int begin = static_cast<int>(w) * chunk;
    const int end = std::min(cfg.trajectories, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back(run_range, begin, end);
  }
  for (auto& t : pool) t.join();
  return out;
}

SimReport simulate_core(const StateSpace& ss, const OqhoParams& params, const SimConfig& cfg,
                        bool with_exp) {
  cfg.validate();
  if (!ss.hurwitz) {
    throw NotHurwitzError("simulate: drift matrix is not Hurwitz");
  }

  SimReport report;
  const double decay_margin = -spectral_abscissa(ss.A);
  report.finite_horizon_flag = cfg.horizon * decay_margin < 5.0;
  // The initial condition x = 0 is not stationary; discard the approach to
  // equilibrium (capped at half the horizon in the flagged short-run regime).
  const double burn_time =
      std::min(0.5 * cfg.horizon, std::max(5.0 / decay_margin, 0.1 * cfg.horizon));
  const std::int64_t steps = std::llround(cfg.horizon / cfg.dt);
  const std::int64_t burn_steps =
      std::min<std::int64_t>(steps - 1, std::llround(burn_time / cfg.dt));
  report.burn_in = static_cast<double>(burn_steps) * cfg.dt;

  const Eigen::MatrixXd P = solve_lyapunov(ss.A, ss.B * ss.B.transpose());
  report.target_nominal_rate = (params.Pi * P).trace();

  PathAccumulators acc = run_paths(ss, params, cfg, steps, burn_steps);
  const int paths = cfg.trajectories;
  const double window = static_cast<double>(steps - burn_steps) * cfg.dt;

  double mean = 0.0;
  for (int k = 0; k < paths; ++k) mean += acc.quad[k] / window;
  mean /= paths;
  double var = 0.0;
  for (int k = 0; k < paths; ++k) {
    const double d = acc.quad[k] / window - mean;
    var += d * d;
  }
  var /= (paths - 1);
  report.quad_rate_estimate = mean;
  report.quad_rate_stderr = std::sqrt(var / paths);

  if (with_exp) {
    report.has_exp_rate = true;
    const double theta = cfg.theta;
    report.target_spectral_rate = classical_spectral_rate(ss, params, theta);

    double max_exponent = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < paths; ++k) {
      max_exponent = std::max(max_exponent, theta * acc.phi[k]);
    }
    for (int k = 0; k < paths; ++k) {
      if (theta * acc.phi[k] > kExpOverflow) ++report.overflow_count;
    }
    report.overflow_flagged = report.overflow_count > 0.001 * paths;

    double sum_w = 0.0;
    for (int k = 0; k < paths; ++k) sum_w += std::exp(theta * acc.phi[k] - max_exponent);
    const double mean_w = sum_w / paths;
    double var_w = 0.0;
    for (int k = 0; k < paths; ++k) {
      const double d = std::exp(theta * acc.phi[k] - max_exponent) - mean_w;
      var_w += d * d;
    }
    var_w /= (paths - 1);

    const double scale = theta * cfg.horizon;
    report.exp_rate_estimate = (max_exponent + std::log(mean_w)) / scale;
    // Delta method on the log of the sample mean.
    report.exp_rate_stderr = std::sqrt(var_w / paths) / mean_w / scale;
  }
  return report;
}

// Spectral density of the weighted classical process: the eigenvalues of
// Phi(lambda) drive both the rate integrand and the criticality check.
class SpectralDensity {
 public:
  SpectralDensity(const StateSpace& ss, const OqhoParams& params)
      : drift_(ss.A.cast<std::complex<double>>()),
        input_(ss.B.cast<std::complex<double>>()),
        weight_root_(sqrtm_psd(params.Pi).cast<std::complex<double>>()),
        dim_(ss.A.rows()) {}

  Eigen::VectorXd eigenvalues(double lambda) const {
    const std::complex<double> i_lambda(0.0, lambda);
    Eigen::MatrixXcd resolvent_arg =
        i_lambda * Eigen::MatrixXcd::Identity(dim_, dim_) - drift_;
    Eigen::MatrixXcd transfer = resolvent_arg.partialPivLu().solve(input_);
    Eigen::MatrixXcd weighted = weight_root_ * transfer;
    Eigen::MatrixXcd phi = weighted * weighted.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(phi, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  }

  double trace(double lambda) const { return eigenvalues(lambda).sum(); }
  double top(double lambda) const { return eigenvalues(lambda).maxCoeff(); }

 private:
  Eigen::MatrixXcd drift_;
  Eigen::MatrixXcd input_;
  Eigen::MatrixXcd weight_root_;
  Eigen::Index dim_;
};

// Resonances of Phi sit at the eigenfrequencies of A with linewidths given
// by the decay parts; panels seeded there keep both the criticality scan and
// the adaptive quadrature from stepping over narrow peaks.
std::vector<double> resonance_breakpoints(const Eigen::MatrixXd& A, double window) {
  std::vector<double> points;
  Eigen::EigenSolver<Eigen::MatrixXd> es(A, /*computeEigenvectors=*/false);
  const auto eig = es.eigenvalues();
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    const double center = std::abs(eig(i).imag());
    const double width = std::max(std::abs(eig(i).real()), 1e-9 * (1.0 + center));
    for (double k : {0.0, 1.0, 8.0, 64.0, 512.0}) {
      points.push_back(center + k * width);
      if (center - k * width > 0.0) points.push_back(center - k * width);
    }
  }
  for (double f : {1.0 / 256, 1.0 / 64, 1.0 / 16, 1.0 / 4}) points.push_back(window * f);
  return points;
}

// Largest Phi eigenvalue: linear grid plus resonance candidates, refined by
// golden-section around the best point.
double sup_spectral_norm(const SpectralDensity& density, const StateSpace& ss) {
  const double a_norm = operator_norm(ss.A);
  const double window = std::max(4.0 * a_norm, 1.0);
  const int samples = 1024;
  std::vector<double> candidates;
  candidates.reserve(samples + 64);
  for (int i = 1; i <= samples; ++i) candidates.push_back(window * i / samples);
  for (double p : resonance_breakpoints(ss.A, window)) {
    if (p > 0.0 && p <= window) candidates.push_back(p);
  }
  std::sort(candidates.begin(), candidates.end());

  double best_lambda = 0.0;
  double best = density.top(0.0);
  double spacing = window / samples;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double v = density.top(candidates[i]);
    if (v > best) {
      best = v;
      best_lambda = candidates[i];
      const double left = (i == 0) ? 0.0 : candidates[i - 1];
      const double right = (i + 1 == candidates.size()) ? window : candidates[i + 1];
      spacing = std::max(best_lambda - left, right - best_lambda);
    }
  }
  const double lo = std::max(0.0, best_lambda - spacing);
  const double hi = best_lambda + spacing;
  const double inv_phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = lo, b = hi;
  double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
  double f1 = density.top(x1), f2 = density.top(x2);
  for (int iter = 0; iter < 80; ++iter) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = density.top(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = density.top(x2);
    }
  }
  return std::max(best, std::max(f1, f2));
}

}  // namespace

std::uint64_t trajectory_seed(std::uint64_t seed, std::int64_t k) {
  return splitmix64(seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(k + 1));
}

void SimConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw ConfigInvalidError("sim config: dt must be positive and finite");
  }
  if (!(horizon >= 10.0 * dt) || !std::isfinite(horizon)) {
    throw ConfigInvalidError("sim config: horizon must be at least 10 dt");
  }
  if (trajectories < 100) {
    throw ConfigInvalidError("sim config: at least 100 trajectories required");
  }
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw ConfigInvalidError("sim config: theta must be nonnegative and finite");
  }
}

SimReport simulate_quadratic_rate(const StateSpace& ss, const OqhoParams& params,
                                  const SimConfig& cfg) {
  return simulate_core(ss, params, cfg, /*with_exp=*/false);
}

SimReport simulate_exp_moment_rate(const StateSpace& ss, const OqhoParams& params,
                                   const SimConfig& cfg) {
  if (!(cfg.theta > 0.0)) {
    throw ConfigInvalidError(
        "simulate_exp_moment_rate: theta must be positive (use simulate_quadratic_rate)");
  }
  return simulate_core(ss, params, cfg, /*with_exp=*/true);
}

double classical_spectral_rate(const StateSpace& ss, const OqhoParams& params, double theta,
                               double quad_tol) {
  if (!(theta >= 0.0) || !std::isfinite(theta)) {
    throw ConfigInvalidError("classical_spectral_rate: theta must be nonnegative");
  }
  if (!(quad_tol > 0.0)) {
    throw ConfigInvalidError("classical_spectral_rate: quad_tol must be positive");
  }
  const Eigen::MatrixXd P = solve_lyapunov(ss.A, ss.B * ss.B.transpose());
  const double stationary_rate = (params.Pi * P).trace();
  if (theta == 0.0 || stationary_rate == 0.0) return stationary_rate;

  SpectralDensity density(ss, params);
  const double sup_norm = sup_spectral_norm(density, ss);
  if (2.0 * theta * sup_norm >= 1.0) {
    throw ThetaSupercriticalError("classical_spectral_rate: theta = " + std::to_string(theta) +
                                  " at or above the critical value " +
                                  std::to_string(1.0 / (2.0 * sup_norm)));
  }

  const auto log_det_term = [&](double lambda) {
    const Eigen::VectorXd nu = density.eigenvalues(lambda);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < nu.size(); ++i) {
      const double x = 2.0 * theta * nu(i);
      if (x >= 1.0) {
        throw ThetaSupercriticalError(
            "classical_spectral_rate: supercritical point at lambda = " +
            std::to_string(lambda));
      }
      sum -= std::log1p(-x);
    }
    return sum;
  };

  // Cutoff from the second-order tail of -ln det(I - 2 theta Phi); beyond it
  // trace Phi <= tail_tr / lambda^2 and the top eigenvalue is subcritical.
  const double a_norm = operator_norm(ss.A);
  const double b_norm = operator_norm(ss.B);
  const double tail_tr = 4.0 * params.Pi.trace() * b_norm * b_norm;
  const double tail_op = 4.0 * operator_norm(params.Pi) * b_norm * b_norm;
  const double window =
      std::max({2.0 * a_norm, std::sqrt(8.0 * theta * tail_op),
                std::cbrt(8.0 * theta * tail_tr * tail_tr / (3.0 * kPi * quad_tol)), 1.0});

  const std::vector<double> seeds = resonance_breakpoints(ss.A, window);
  const double main_part = adaptive_integrate(log_det_term, 0.0, window,
                                              kPi * theta * quad_tol, std::span(seeds));
  const double trace_part =
      adaptive_integrate([&](double lambda) { return density.trace(lambda); }, 0.0, window,
                         kPi * quad_tol / 4.0, std::span(seeds));
  // First-order analytic tail via the Plancherel identity
  // integral of trace Phi over the real line = 2 pi trace(Pi P).
  const double tail = 2.0 * theta * (2.0 * kPi * stationary_rate - 2.0 * trace_part);
  return (2.0 * main_part + tail) / (4.0 * kPi * theta);
}

double classical_critical_theta(const StateSpace& ss, const OqhoParams& params) {
  SpectralDensity density(ss, params);
  const double sup_norm = sup_spectral_norm(density, ss);
  if (sup_norm <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (2.0 * sup_norm);
}

}  // namespace roqs
