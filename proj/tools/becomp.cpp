// becomp: run verification batteries on weighted model manifolds.
//
//   becomp run <config.json>
//   becomp sweep <config.json> --param <dotted.path> --values <v1,v2,...>
//   becomp envelope <config.json>

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "becomp/errors.hpp"
#include "becomp/run.hpp"

namespace {

using namespace becomp;

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("--values: '" + item + "' is not a number");
    }
    if (item.find_first_not_of(" \t", used) != std::string::npos) {
      throw ConfigError("--values: '" + item + "' is not a number");
    }
    out.push_back(v);
  }
  return out;
}

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

void print_summary(const RunResult& r) {
  for (const auto& rep : r.reports) {
    std::cout << to_string(rep.verdict) << "  " << rep.check_name;
    if (!rep.label.empty()) std::cout << " [" << rep.label << "]";
    std::cout << "  worst_slack=" << rep.worst_slack;
    if (!rep.notes.empty()) std::cout << "  (" << rep.notes << ")";
    std::cout << '\n';
  }
  if (!r.error.empty()) std::cerr << "error: " << r.error << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Comparison-geometry verification toolkit for weighted manifolds"};
  app.require_subcommand(1);

  Overrides ov;
  auto add_flags = [&ov](CLI::App* sub) {
    sub->add_option("--tol-quad", ov.tol_quad, "quadrature tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tol-ode", ov.tol_ode, "ODE tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--tol-verdict", ov.tol_verdict, "verdict tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--r-max", ov.r_max, "outer radius")->check(CLI::PositiveNumber);
    sub->add_option("--out-dir", ov.out_dir, "directory for report.json and csv/");
  };

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "run the checks of a configuration");
  run_cmd->add_option("config", config_path, "configuration JSON")->required();
  add_flags(run_cmd);

  std::string param;
  std::string values_csv;
  auto* sweep_cmd = app.add_subcommand("sweep", "run a configuration over values of one parameter");
  sweep_cmd->add_option("config", config_path, "configuration JSON")->required();
  sweep_cmd->add_option("--param", param, "dotted path of a numeric field")->required();
  sweep_cmd->add_option("--values", values_csv, "comma separated values; may be empty")
      ->required()
      ->expected(0, 1);
  add_flags(sweep_cmd);

  auto* env_cmd = app.add_subcommand("envelope", "print the curvature envelope profile");
  env_cmd->add_option("config", config_path, "configuration JSON")->required();
  add_flags(env_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*run_cmd) {
      RunConfig c = load_config(config_path);
      apply_overrides(c, ov);
      const RunResult r = run(c);
      print_summary(r);
      return r.exit_code;
    }
    if (*sweep_cmd) {
      const Json base = read_json(config_path);
      const auto values = parse_values(values_csv);
      const SweepResult s = sweep(base, param, values, ov);
      std::string dir = ov.out_dir;
      if (dir.empty() && base.contains("output") && base["output"].contains("csv_dir")) {
        dir = base["output"]["csv_dir"].get<std::string>();
      }
      if (!dir.empty()) {
        std::filesystem::create_directories(dir);
        std::ofstream(std::filesystem::path(dir) / "sweep.csv") << sweep_csv(s);
        std::ofstream(std::filesystem::path(dir) / "sweep.json") << sweep_json(s).dump(2) << '\n';
      }
      std::cout << sweep_csv(s);
      for (const auto& [v, r] : s.points) {
        if (!r.error.empty()) std::cerr << "error at " << v << ": " << r.error << '\n';
      }
      return s.exit_code;
    }
    if (*env_cmd) {
      RunConfig c = load_config(config_path);
      apply_overrides(c, ov);
      std::cout << envelope_json(c).dump(2) << '\n';
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
