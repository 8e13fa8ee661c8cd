#include "becomp/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "becomp/errors.hpp"

namespace becomp {

bool RunConfig::wants(const std::string& check) const {
  return std::find(checks.begin(), checks.end(), check) != checks.end();
}

Json RunConfig::canonical() const {
  Json j;
  j["manifold"] = to_json(manifold);
  j["alpha"] = alpha;
  j["profile"] = profile ? to_json(*profile) : Json("auto");
  j["domains"] = Json::array();
  for (const auto& d : domains) j["domains"].push_back(to_json(d));
  j["functions"] = Json::array();
  for (const auto& f : functions) j["functions"].push_back(to_json(f));
  j["checks"] = checks;
  j["tolerances"] = {{"quadrature", tolerances.quadrature},
                     {"ode", tolerances.ode},
                     {"verdict", tolerances.verdict}};
  j["r_max"] = r_max;
  return j;
}

std::string RunConfig::digest() const { return fnv1a_digest(canonical().dump()); }

RunConfig parse_config(const Json& j) {
  require_keys(j, "config", {"manifold", "alpha", "profile"},
               {"domains", "functions", "checks", "tolerances", "r_max", "output"});
  RunConfig c;
  c.manifold = manifold_from_json(j.at("manifold"));
  c.alpha = get_number(j, "alpha", "config");
  if (!(c.alpha > 0.0)) throw ConfigError("config.alpha must be positive");

  const Json& p = j.at("profile");
  if (p.is_string()) {
    if (p.get<std::string>() != "auto") throw ConfigError("config.profile must be \"auto\" or an object");
  } else {
    c.profile = profile_from_json(p);
  }

  if (j.contains("domains")) {
    if (!j.at("domains").is_array()) throw ConfigError("config.domains must be an array");
    std::size_t i = 0;
    for (const auto& d : j.at("domains")) {
      c.domains.push_back(domain_from_json(d, "domains[" + std::to_string(i++) + "]"));
    }
  }
  if (j.contains("functions")) {
    if (!j.at("functions").is_array()) throw ConfigError("config.functions must be an array");
    std::size_t i = 0;
    for (const auto& f : j.at("functions")) {
      c.functions.push_back(function_from_json(f, "functions[" + std::to_string(i++) + "]"));
    }
  } else {
    c.functions.push_back(RadialFunction::constant(1.0));
  }

  std::vector<std::string> requested;
  if (j.contains("checks")) {
    if (!j.at("checks").is_array()) throw ConfigError("config.checks must be an array");
    for (const auto& name : j.at("checks")) {
      if (!name.is_string()) throw ConfigError("config.checks entries must be strings");
      const std::string s = name.get<std::string>();
      if (std::find(kCheckNames.begin(), kCheckNames.end(), s) == kCheckNames.end()) {
        throw ConfigError("config.checks: unknown check '" + s + "'");
      }
      requested.push_back(s);
    }
  } else {
    requested = kCheckNames;
  }
  for (const auto& name : kCheckNames) {
    if (std::find(requested.begin(), requested.end(), name) != requested.end()) {
      c.checks.push_back(name);
    }
  }

  if (j.contains("tolerances")) {
    const Json& t = j.at("tolerances");
    require_keys(t, "config.tolerances", {}, {"quadrature", "ode", "verdict"});
    if (t.contains("quadrature")) c.tolerances.quadrature = get_number(t, "quadrature", "config.tolerances");
    if (t.contains("ode")) c.tolerances.ode = get_number(t, "ode", "config.tolerances");
    if (t.contains("verdict")) c.tolerances.verdict = get_number(t, "verdict", "config.tolerances");
    if (!(c.tolerances.quadrature > 0.0 && c.tolerances.ode > 0.0 && c.tolerances.verdict > 0.0)) {
      throw ConfigError("config.tolerances must be positive");
    }
  }
  if (j.contains("r_max")) {
    c.r_max = get_number(j, "r_max", "config");
    if (!(c.r_max > 0.0)) throw ConfigError("config.r_max must be positive");
  }
  if (j.contains("output")) {
    const Json& o = j.at("output");
    require_keys(o, "config.output", {}, {"json_path", "csv_dir"});
    for (const char* key : {"json_path", "csv_dir"}) {
      if (!o.contains(key)) continue;
      if (!o.at(key).is_string()) throw ConfigError(std::string("config.output.") + key + " must be a string");
    }
    if (o.contains("json_path")) c.output.json_path = o.at("json_path").get<std::string>();
    if (o.contains("csv_dir")) c.output.csv_dir = o.at("csv_dir").get<std::string>();
  }
  for (const auto& d : c.domains) {
    if (d.outer > c.r_max) throw ConfigError("config: domain radius exceeds r_max");
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

void apply_overrides(RunConfig& config, const Overrides& o) {
  if (o.tol_quad > 0.0) config.tolerances.quadrature = o.tol_quad;
  if (o.tol_ode > 0.0) config.tolerances.ode = o.tol_ode;
  if (o.tol_verdict > 0.0) config.tolerances.verdict = o.tol_verdict;
  if (o.r_max > 0.0) {
    config.r_max = o.r_max;
    for (const auto& d : config.domains) {
      if (d.outer > config.r_max) throw ConfigError("--r-max is smaller than a domain radius");
    }
  }
  if (!o.out_dir.empty()) {
    const std::filesystem::path dir(o.out_dir);
    config.output.json_path = (dir / "report.json").string();
    config.output.csv_dir = (dir / "csv").string();
  }
}

}  // namespace becomp
