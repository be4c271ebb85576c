// Command-line front end: parses flags into a RunConfig and hands off to the
// pipeline. Exit codes: 0 ok, 2 parse, 3 invalid-params, 4 not-hurwitz,
// 5 numeric-failure.

#include <map>
#include <string>

#include <CLI11.hpp>

#include "roqs/pipeline.hpp"

int main(int argc, char** argv) {
  CLI::App app{"roqs: physically-realizable quantum oscillator models, decay certificates\n"
               "and guaranteed worst-case quadratic cost bounds over relative-entropy balls"};
  app.fallthrough();

  roqs::RunConfig cfg;
  double mu_value = 0.0;
  bool mu_given = false;
  std::string format = "json";

  app.add_option("--model", cfg.model_path, "Model file (JSON)")->required();
  app.add_option("--eps", cfg.eps, "Relative-entropy rate thresholds")
      ->delimiter(',');
  app.add_option("--mu", mu_value, "Decay rate for the certificate (default: optimized)");
  app.add_option("--grid", cfg.mu_grid, "Grid size for mu search and theta minimization");
  app.add_option("--format", format, "Report format: json or csv (csv: sweep only)")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", cfg.out_path, "Report path (default: stdout)");
  app.add_option("--seed", cfg.sim.seed, "Simulation seed");
  app.add_option("--theta", cfg.sim.theta, "Risk-sensitivity parameter for the oracle");
  app.add_option("--paths", cfg.sim.trajectories, "Monte Carlo trajectories");
  app.add_option("--dt", cfg.sim.dt, "Euler-Maruyama step");
  app.add_option("--horizon", cfg.sim.horizon, "Simulation horizon");
  app.add_option("--quad-tol", cfg.quad_tol, "Quadrature tolerance");
  app.add_option("--margin-tol", cfg.margin_tol, "Certificate margin tolerance");

  const std::map<std::string, roqs::RunConfig::Command> commands = {
      {"validate", roqs::RunConfig::Command::Validate},
      {"invariant", roqs::RunConfig::Command::Invariant},
      {"certify", roqs::RunConfig::Command::Certify},
      {"bound", roqs::RunConfig::Command::Bound},
      {"sweep", roqs::RunConfig::Command::Sweep},
      {"oracle", roqs::RunConfig::Command::Oracle},
      {"all", roqs::RunConfig::Command::All}};
  for (const auto& [name, command] : commands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->callback([&cfg, command] { cfg.command = command; });
  }
  app.require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return roqs::kExitParse;
  }

  mu_given = app.count("--mu") > 0;
  if (mu_given) cfg.mu = mu_value;
  if (app.count("--grid") > 0) cfg.theta_grid = std::max(16, cfg.mu_grid);
  cfg.format = (format == "csv") ? roqs::RunConfig::Format::Csv
                                 : roqs::RunConfig::Format::Json;

  return roqs::run(cfg);
}
