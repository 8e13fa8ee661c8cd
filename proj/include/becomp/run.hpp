#pragma once

// Orchestration: runs the requested checks of a configuration in the fixed
// order moments, ode, admissibility, bishop_gromov, mean_curvature, avr,
// sobolev, isoperimetric, abp, and collects one report per check instance.

#include <string>
#include <utility>
#include <vector>

#include "becomp/config.hpp"
#include "becomp/report.hpp"

namespace becomp {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitConfig = 2;

// Sup-norm bound on the five-point residual of the Neumann first integral.
inline constexpr double kFirstIntegralTol = 1e-7;
// Transport parameters at which the Jacobian bound is evaluated.
inline const std::vector<double> kTransportRadii = {0.5, 1.0, 2.0};

struct RunResult {
  int exit_code = kExitOk;
  std::string error;  // set with exit code 2
  std::string digest;
  std::vector<VerificationReport> reports;

  // {"digest", "exit_code", "error", "reports"}; runtime_ms only when asked.
  Json payload(bool include_runtime) const;
};

struct RunOptions {
  bool write_outputs = true;
};

// The configured profile, or the curvature envelope on [0, r_max] for "auto".
DecayProfile resolve_profile(const RunConfig& config);

// Never throws for configuration or admissibility problems: they become exit
// code 2 with the message in error.
RunResult run(const RunConfig& config, const RunOptions& opt = {});

// {"profile", "tail_exponent", "admissible", "divergence_reason", "b0", "b1"}.
Json envelope_json(const RunConfig& config);

// "a.b.0.c" -> "/a/b/0/c"
std::string dotted_to_pointer(const std::string& dotted);

struct SweepResult {
  std::string parameter;
  int exit_code = kExitOk;
  std::vector<std::pair<double, RunResult>> points;
};

// Runs the configuration once per value of the numeric leaf at parameter,
// concurrently. Throws ConfigError when the path is missing or not numeric.
SweepResult sweep(const Json& base, const std::string& parameter, const std::vector<double>& values,
                  const Overrides& overrides = {});

// One row per report: value,check_name,label,verdict,worst_slack and the
// main constants (empty when a report does not carry them).
std::string sweep_csv(const SweepResult& result);
Json sweep_json(const SweepResult& result);

}  // namespace becomp
