// Copyright 2026 The ospep Authors.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end. Every command writes its result to `out` and
// diagnostics to `err`, and returns one of the exit codes below.

#ifndef OSPEP_CLI_HPP
#define OSPEP_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ospep/drs_analytic.hpp"
#include "ospep/ospep_core.hpp"
#include "ospep/param_search.hpp"

namespace ospep::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,    // bad flags, malformed or invalid config, domain errors
  kExitSolver = 2,    // SDP did not reach an optimal status
  kExitMismatch = 3,  // verify found a discrepancy above tolerance
};

enum class OutputFormat { kJson, kCsv };

struct ProblemConfig {
  Method method = Method::kDYS;
  double alpha = 1.0;
  std::optional<double> theta;  // absent: optimize over theta
  ProblemClasses classes{OperatorClass::Zero(), OperatorClass::Zero(),
                         OperatorClass::Zero()};
  SolverSettings solver = SolverSettings::FromEnvironment();
  OutputFormat format = OutputFormat::kJson;
  double alpha_lo = 1e-4;  // search / curve range
  double alpha_hi = 1e4;
  double rel_tol = 1e-4;
};

// Parses and validates a config document; throws InputError with a message
// naming the offending key. Missing roles are the zero operator.
ProblemConfig parse_config(std::string_view text);
ProblemConfig load_config(const std::string& path);

int cmd_rho(const ProblemConfig& cfg, std::ostream& out, std::ostream& err);

int cmd_closed_form(Family family, const DrsParams& params, double alpha,
                    std::ostream& out, std::ostream& err);

struct VerifyOptions {
  Family family = Family::kMuCoco;
  int n_mu = 10, n_p = 10, n_theta = 10;
  double mu_lo = 0.1, mu_hi = 10.0;  // log-spaced
  double p_lo = 0.1, p_hi = 10.0;    // log-spaced
  double theta_lo = 0.1, theta_hi = 1.9;
  double tol = 1e-6;      // closed form vs SDP vs lower bound
  double gap_tol = 1e-7;  // SDP primal vs dual
  bool jitter = false;    // perturb grid points within their cells
  std::uint64_t seed = 0;
  bool inject_fault = false;  // corrupt one closed-form value (self-test)
  int workers = 1;
  SolverSettings solver = SolverSettings::FromEnvironment();
};

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);

// Explicit 2x2 lower-bound instance for a closed-form family.
int cmd_worst_case_closed_form(Family family, const DrsParams& params,
                               std::ostream& out, std::ostream& err);
// Gram-extracted evaluation triples from the SDP (theta required).
int cmd_worst_case(const ProblemConfig& cfg, std::ostream& out,
                   std::ostream& err);

int cmd_optimize(const ProblemConfig& cfg, std::ostream& out,
                 std::ostream& err);

struct CurveOptions {
  std::vector<double> alphas;  // if empty, count log-spaced points
  int count = 50;
  int workers = 1;
};

// CSV: header alpha,rho_sq,theta_opt, CRLF line endings, %.17g.
int cmd_curve(const ProblemConfig& cfg, const CurveOptions& opts,
              std::ostream& out, std::ostream& err);
std::string format_curve_csv(const std::vector<CurvePoint>& points);

// Full argument parsing; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace ospep::cli

#endif  // OSPEP_CLI_HPP
