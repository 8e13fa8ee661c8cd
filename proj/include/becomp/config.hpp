#pragma once

// Run configuration: a JSON document naming a manifold, alpha, a decay profile
// (or "auto" for the curvature envelope), domains, test functions, the checks
// to run, tolerances, the outer radius and output locations.

#include <optional>
#include <string>
#include <vector>

#include "becomp/json_io.hpp"
#include "becomp/manifold.hpp"
#include "becomp/profiles.hpp"
#include "becomp/sobolev.hpp"

namespace becomp {

inline const std::vector<std::string> kCheckNames = {
    "moments", "ode", "bishop_gromov", "mean_curvature", "avr", "sobolev", "isoperimetric", "abp"};

struct Tolerances {
  double quadrature = 1e-10;
  double ode = 1e-10;
  double verdict = 1e-8;
};

struct OutputSpec {
  std::string json_path;  // empty: no file
  std::string csv_dir;    // empty: no curves
};

struct RunConfig {
  ModelManifold manifold = ModelManifold::euclidean(3);
  double alpha = 1.0;
  std::optional<DecayProfile> profile;  // empty: "auto"
  std::vector<RadialDomain> domains;
  std::vector<RadialFunction> functions;
  std::vector<std::string> checks;  // in pipeline order, deduplicated
  Tolerances tolerances;
  double r_max = 1e3;
  OutputSpec output;

  bool wants(const std::string& check) const;
  // Normalized form with every default filled in, excluding output.
  Json canonical() const;
  // FNV-1a digest of canonical().dump().
  std::string digest() const;
};

// Strict: unknown keys, wrong types and invalid values raise ConfigError.
RunConfig parse_config(const Json& j);
RunConfig load_config(const std::string& path);

// Command-line overrides; a negative or zero value leaves the field unchanged.
struct Overrides {
  double tol_quad = 0.0;
  double tol_ode = 0.0;
  double tol_verdict = 0.0;
  double r_max = 0.0;
  std::string out_dir;
};
void apply_overrides(RunConfig& config, const Overrides& o);

}  // namespace becomp
