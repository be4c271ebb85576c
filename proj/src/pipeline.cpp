#include "roqs/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "roqs/matnum.hpp"
#include "roqs/model_io.hpp"

namespace roqs {

using json = nlohmann::ordered_json;

namespace {

const char* command_name(RunConfig::Command c) {
  switch (c) {
    case RunConfig::Command::Validate: return "validate";
    case RunConfig::Command::Invariant: return "invariant";
    case RunConfig::Command::Certify: return "certify";
    case RunConfig::Command::Bound: return "bound";
    case RunConfig::Command::Sweep: return "sweep";
    case RunConfig::Command::Oracle: return "oracle";
    case RunConfig::Command::All: return "all";
  }
  return "unknown";
}

bool wants(RunConfig::Command have, std::initializer_list<RunConfig::Command> stages) {
  return std::find(stages.begin(), stages.end(), have) != stages.end();
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json bound_row(const RobustBound& rb) {
  json row;
  row["eps"] = rb.eps;
  row["sigma"] = rb.sigma;
  row["theta_star"] = rb.theta_star;
  row["theta_max"] = rb.theta_max;
  row["bound"] = rb.bound;
  row["at_boundary"] = rb.at_boundary;
  return row;
}

json curve_to_json(const std::vector<CurvePoint>& curve, std::size_t max_points = 33) {
  json samples = json::array();
  if (curve.empty()) return samples;
  const std::size_t stride = std::max<std::size_t>(1, curve.size() / max_points);
  for (std::size_t i = 0; i < curve.size(); i += stride) {
    samples.push_back({curve[i].theta, curve[i].gamma, curve[i].objective});
  }
  return samples;
}

std::string render_sweep_csv(const std::vector<RobustBound>& rows, const DecayCertificate& cert,
                             int n) {
  std::string out = "eps,sigma,theta_star,bound,mu,alpha,n\n";
  for (const RobustBound& rb : rows) {
    out += format_number(rb.eps) + "," + format_number(rb.sigma) + "," +
           format_number(rb.theta_star) + "," + format_number(rb.bound) + "," +
           format_number(cert.mu) + "," + format_number(cert.alpha) + "," +
           std::to_string(n) + "\n";
  }
  return out;
}

}  // namespace

std::pair<std::string, int> classify_error(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return {"Parse", kExitParse};
  if (dynamic_cast<const InvalidParamsError*>(&e)) return {"InvalidParams", kExitInvalidParams};
  if (dynamic_cast<const ConfigInvalidError*>(&e)) return {"ConfigInvalid", kExitInvalidParams};
  if (dynamic_cast<const NegativeEpsError*>(&e)) return {"NegativeEps", kExitInvalidParams};
  if (dynamic_cast<const MuTooLargeError*>(&e)) return {"MuTooLarge", kExitInvalidParams};
  if (dynamic_cast<const NotHurwitzError*>(&e)) return {"NotHurwitz", kExitNotHurwitz};
  if (dynamic_cast<const SingularSolveError*>(&e)) return {"SingularSolve", kExitNumericFailure};
  if (dynamic_cast<const NotPsdError*>(&e)) return {"NotPsd", kExitNumericFailure};
  if (dynamic_cast<const DimensionMismatchError*>(&e)) {
    return {"DimensionMismatch", kExitNumericFailure};
  }
  if (dynamic_cast<const ThetaOutOfRangeError*>(&e)) {
    return {"ThetaOutOfRange", kExitNumericFailure};
  }
  if (dynamic_cast<const QuadratureFailureError*>(&e)) {
    return {"QuadratureFailure", kExitNumericFailure};
  }
  if (dynamic_cast<const ThetaSupercriticalError*>(&e)) {
    return {"ThetaSupercritical", kExitNumericFailure};
  }
  return {"Internal", kExitNumericFailure};
}

RunResult execute(const RunConfig& cfg) {
  RunResult res;
  json& report = res.report;
  report["tool"] = "roqs";
  report["command"] = command_name(cfg.command);
  report["tolerances"] = {{"lyapunov_residual", kLyapunovResidualTol},
                          {"certificate_margin", cfg.margin_tol},
                          {"quadrature", cfg.quad_tol},
                          {"psd_clamp_factor", kPsdClampFactor}};
  report["stages"] = json::object();

  std::string csv;
  try {
    if (cfg.format == RunConfig::Format::Csv && cfg.command != RunConfig::Command::Sweep) {
      throw ConfigInvalidError("csv output is only available for the sweep command");
    }
    std::vector<double> eps = cfg.eps;
    if (eps.empty()) eps.push_back(0.0);
    for (double e : eps) {
      if (!(e >= 0.0) || !std::isfinite(e)) {
        throw NegativeEpsError("eps values must be finite and nonnegative");
      }
    }
    std::sort(eps.begin(), eps.end());

    const OqhoParams params = parse_model_file(cfg.model_path);
    report["model"] = model_to_json(params);
    const int n = static_cast<int>(params.n());

    const StateSpace ss = build_state_space(params);
    {
      json stage;
      stage["A"] = matrix_to_json(ss.A);
      stage["B"] = matrix_to_json(ss.B);
      stage["J"] = matrix_to_json(ss.J);
      stage["pr_residual"] = ss.pr_residual;
      stage["hurwitz"] = ss.hurwitz;
      stage["spectral_abscissa"] = spectral_abscissa(ss.A);
      report["stages"]["validate"] = std::move(stage);
    }
    if (cfg.command == RunConfig::Command::Validate) {
      res.rendered = report.dump(2) + "\n";
      return res;
    }

    const InvariantModel inv = invariant_model(params, ss);
    {
      json stage;
      stage["P"] = matrix_to_json(inv.P);
      stage["nominal_rate"] = inv.nominal_rate;
      report["stages"]["invariant"] = std::move(stage);
    }
    if (cfg.command == RunConfig::Command::Invariant) {
      res.rendered = report.dump(2) + "\n";
      return res;
    }

    if (wants(cfg.command, {RunConfig::Command::Certify, RunConfig::Command::Bound,
                            RunConfig::Command::Sweep, RunConfig::Command::All})) {
      DecayCertificate cert;
      bool optimized = false;
      if (cfg.mu.has_value()) {
        cert = make_certificate(ss, inv, params, *cfg.mu);
      } else {
        cert = optimize_mu(ss, inv, params, eps.front(), cfg.mu_grid);
        optimized = true;
      }
      const CertificateCheck check = verify_certificate(
          cert, ss, inv, params, default_verification_grid(cert.mu), cfg.margin_tol);
      {
        json stage;
        stage["mu"] = cert.mu;
        stage["mu_optimized"] = optimized;
        stage["Gamma"] = matrix_to_json(cert.Gamma);
        stage["alpha"] = cert.alpha;
        json chk;
        chk["ali_ok"] = check.ali_ok;
        chk["ali_margin"] = check.ali_margin;
        chk["tau_grid"] = check.taus;
        chk["margins"] = check.margins;
        chk["decay_ok"] = check.decay_ok;
        stage["check"] = std::move(chk);
        report["stages"]["certificate"] = std::move(stage);
      }

      if (wants(cfg.command, {RunConfig::Command::Bound, RunConfig::Command::All})) {
        json rows = json::array();
        for (double e : eps) {
          const RobustBound closed = worst_case_bound_closed(e, n, cert);
          const RobustBound numeric = worst_case_bound_numeric(e, n, cert, cfg.theta_grid);
          json row = bound_row(closed);
          row["numeric"] = {{"theta_star", numeric.theta_star},
                            {"bound", numeric.bound},
                            {"grid", cfg.theta_grid}};
          // Rate bound at the minimizer through both routes, for auditability.
          row["gamma_at_theta_star"] = qef_rate_bound_closed(closed.theta_star, n, cert);
          row["gamma_integral"] =
              qef_rate_bound_integral(closed.theta_star, n, cert, cfg.quad_tol);
          row["curve"] = curve_to_json(numeric.curve);
          rows.push_back(std::move(row));
        }
        report["stages"]["bounds"] = std::move(rows);
      }

      if (wants(cfg.command, {RunConfig::Command::Sweep, RunConfig::Command::All})) {
        const std::vector<RobustBound> rows = sweep(eps, n, cert);
        json stage = json::array();
        for (const RobustBound& rb : rows) {
          json row = bound_row(rb);
          row["mu"] = cert.mu;
          row["alpha"] = cert.alpha;
          row["n"] = n;
          stage.push_back(std::move(row));
        }
        report["stages"]["sweep"] = std::move(stage);
        csv = render_sweep_csv(rows, cert, n);
      }
    }

    if (wants(cfg.command, {RunConfig::Command::Oracle, RunConfig::Command::All})) {
      const SimReport sim = (cfg.sim.theta > 0.0)
                                ? simulate_exp_moment_rate(ss, params, cfg.sim)
                                : simulate_quadratic_rate(ss, params, cfg.sim);
      json stage;
      stage["config"] = {{"horizon", cfg.sim.horizon},
                         {"dt", cfg.sim.dt},
                         {"trajectories", cfg.sim.trajectories},
                         {"seed", cfg.sim.seed},
                         {"theta", cfg.sim.theta}};
      stage["quad_rate_estimate"] = sim.quad_rate_estimate;
      stage["quad_rate_stderr"] = sim.quad_rate_stderr;
      stage["burn_in"] = sim.burn_in;
      stage["finite_horizon_flag"] = sim.finite_horizon_flag;
      json targets;
      targets["nominal_rate"] = sim.target_nominal_rate;
      if (sim.has_exp_rate) targets["spectral_rate"] = sim.target_spectral_rate;
      stage["targets"] = std::move(targets);
      if (sim.has_exp_rate) {
        stage["exp_rate_estimate"] = sim.exp_rate_estimate;
        stage["exp_rate_stderr"] = sim.exp_rate_stderr;
        stage["overflow_count"] = sim.overflow_count;
        stage["overflow_flagged"] = sim.overflow_flagged;
      }
      report["stages"]["oracle"] = std::move(stage);
    }
  } catch (const std::exception& e) {
    const auto [kind, code] = classify_error(e);
    report["error"] = {{"type", kind}, {"message", e.what()}, {"exit_code", code}};
    res.exit_code = code;
    res.rendered = report.dump(2) + "\n";
    return res;
  }

  res.rendered = (cfg.format == RunConfig::Format::Csv) ? csv : report.dump(2) + "\n";
  return res;
}

int run(const RunConfig& cfg) {
  const RunResult res = execute(cfg);
  if (cfg.out_path.empty()) {
    std::cout << res.rendered;
    return res.exit_code;
  }
  std::ofstream out(cfg.out_path);
  if (!out) {
    std::cerr << "roqs: cannot write '" << cfg.out_path << "'\n";
    return kExitNumericFailure;
  }
  out << res.rendered;
  return res.exit_code;
}

}  // namespace roqs
