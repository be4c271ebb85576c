#pragma once

// Batch pipeline behind the command-line front end: ingest a model file, run
// the requested stages (validate -> invariant -> certify -> bound -> sweep ->
// oracle) and render a machine-readable report.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "roqs/bounds.hpp"
#include "roqs/certificate.hpp"
#include "roqs/oracle.hpp"

namespace roqs {

enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 2,
  kExitInvalidParams = 3,
  kExitNotHurwitz = 4,
  kExitNumericFailure = 5,
};

struct RunConfig {
  enum class Command { Validate, Invariant, Certify, Bound, Sweep, Oracle, All };
  enum class Format { Json, Csv };

  Command command = Command::All;
  std::string model_path;
  std::vector<double> eps = {0.0};
  std::optional<double> mu;    // omitted -> optimize_mu over mu_grid candidates
  int mu_grid = 64;
  int theta_grid = 256;        // numeric minimizer grid
  double quad_tol = kQuadTol;  // integral cross-check tolerance
  double margin_tol = kCertificateMarginTol;
  SimConfig sim;
  std::string out_path;        // empty -> stdout
  Format format = Format::Json;
};

struct RunResult {
  int exit_code = kExitOk;
  nlohmann::ordered_json report;
  std::string rendered;  // what run() writes: the JSON dump, or CSV for sweep
};

// Maps a thrown library error to { spec name, exit code }.
std::pair<std::string, int> classify_error(const std::exception& e);

// Runs the stages and renders the report. Never throws for the documented
// error classes; the report carries an "error" object and the matching
// nonzero exit code instead, together with every stage that completed.
RunResult execute(const RunConfig& cfg);

// execute() plus writing the rendered report to out_path (or stdout).
int run(const RunConfig& cfg);

}  // namespace roqs
