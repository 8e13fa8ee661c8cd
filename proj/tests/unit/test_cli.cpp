#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "becomp/config.hpp"
#include "becomp/errors.hpp"
#include "becomp/run.hpp"

using namespace becomp;

namespace {

const std::filesystem::path kGolden = BECOMP_GOLDEN_DIR;

Json read(const std::string& name) {
  std::ifstream in(kGolden / name);
  REQUIRE(in);
  return Json::parse(in);
}

Json base() {
  return Json::parse(R"({
    "manifold": {"n": 3, "warp": {"family": "euclidean"}, "density": {"family": "constant", "params": {"w0": 1}}},
    "alpha": 1.0,
    "profile": {"family": "exponential", "params": {"lambda0": 0.2, "a": 1.0}},
    "domains": [{"kind": "ball", "R": 1.0}],
    "functions": [{"family": "constant", "params": {"c": 1.0}}],
    "checks": ["sobolev"]
  })");
}

const VerificationReport& find(const RunResult& r, const std::string& check) {
  for (const auto& rep : r.reports) {
    if (rep.check_name == check) return rep;
  }
  FAIL("missing report " << check);
  throw;
}

RunResult run_quiet(const Json& j) {
  RunOptions o;
  o.write_outputs = false;
  return run(parse_config(j), o);
}

}  // namespace

TEST_CASE("config parsing fills defaults and orders checks") {
  Json j = base();
  j["checks"] = {"abp", "sobolev", "moments", "sobolev"};
  const RunConfig c = parse_config(j);
  CHECK(c.checks == std::vector<std::string>{"moments", "sobolev", "abp"});
  CHECK(c.r_max == 1e3);
  CHECK(c.tolerances.verdict == 1e-8);
  CHECK(c.wants("abp"));
  CHECK_FALSE(c.wants("avr"));
  CHECK_FALSE(parse_config(Json::parse(R"({
    "manifold": {"n": 2, "warp": {"family": "euclidean"}, "density": {"family": "constant", "params": {"w0": 1}}},
    "alpha": 1, "profile": "auto"})")).profile.has_value());
}

TEST_CASE("config parsing is strict") {
  auto rejects = [](const Json& j) { CHECK_THROWS_AS(parse_config(j), ConfigError); };
  {
    Json j = base();
    j["tolerence"] = Json::object();
    rejects(j);
  }
  {
    Json j = base();
    j["manifold"]["density"]["params"]["w1"] = 2.0;
    rejects(j);
  }
  {
    Json j = base();
    j["checks"] = {"sobolev", "volume"};
    rejects(j);
  }
  {
    Json j = base();
    j["domains"][0]["R"] = 2e3;
    rejects(j);
  }
  {
    Json j = base();
    j["alpha"] = "one";
    rejects(j);
  }
  {
    Json j = base();
    j["alpha"] = -1.0;
    rejects(j);
  }
  {
    Json j = base();
    j["tolerances"] = {{"verdict", 0.0}};
    rejects(j);
  }
  {
    Json j = base();
    j["profile"] = "automatic";
    rejects(j);
  }
  {
    Json j = base();
    j["manifold"]["n"] = 3.5;
    rejects(j);
  }
  {
    Json j = base();
    j.erase("alpha");
    rejects(j);
  }
  CHECK_THROWS_AS(load_config((kGolden / "unknown_key.json").string()), ConfigError);
  CHECK_THROWS_AS(load_config((kGolden / "missing.json").string()), ConfigError);
}

TEST_CASE("digest depends on the mathematics, not on outputs") {
  const RunConfig a = parse_config(base());
  Json j = base();
  j["output"] = {{"json_path", "/tmp/x.json"}};
  const RunConfig b = parse_config(j);
  CHECK(a.digest() == b.digest());
  CHECK(a.digest().size() == 16);
  j["alpha"] = 1.5;
  CHECK(parse_config(j).digest() != a.digest());
  CHECK(parse_config(a.canonical()).digest() == a.digest());
}

TEST_CASE("overrides") {
  RunConfig c = parse_config(base());
  Overrides o;
  o.tol_verdict = 1e-6;
  o.r_max = 50.0;
  o.out_dir = "out";
  apply_overrides(c, o);
  CHECK(c.tolerances.verdict == 1e-6);
  CHECK(c.tolerances.quadrature == 1e-10);
  CHECK(c.r_max == 50.0);
  CHECK(c.output.json_path == (std::filesystem::path("out") / "report.json").string());
  Overrides small;
  small.r_max = 0.5;
  CHECK_THROWS_AS(apply_overrides(c, small), ConfigError);
}

TEST_CASE("golden configurations: exit codes and verdicts") {
  {
    const auto r = run_quiet(read("euclidean_all_checks.json"));
    CHECK(r.exit_code == kExitOk);
    CHECK(find(r, "sobolev").verdict == Verdict::Vacuous);
    for (const auto& rep : r.reports) {
      if (rep.check_name == "abp") CHECK(rep.verdict == Verdict::Pass);
    }
  }
  {
    const auto r = run_quiet(read("power_law_divergent.json"));
    CHECK(r.exit_code == kExitConfig);
    CHECK(r.error.find("b0") != std::string::npos);
  }
  {
    const auto r = run_quiet(read("cone_constant_auto.json"));
    CHECK(r.exit_code == kExitOk);
    const auto& s = find(r, "sobolev");
    CHECK(s.verdict == Verdict::Pass);
    CHECK(s.constants.at("vacuous") == 0.0);
  }
  for (const char* name : {"cone_logpoly_n3.json", "cone_logpoly_half.json", "cone_logpoly_n4.json"}) {
    CAPTURE(name);
    const auto r = run_quiet(read(name));
    CHECK(r.exit_code == kExitOk);
    CHECK(find(r, "sobolev").constants.at("vacuous") == 0.0);
  }
}

TEST_CASE("inadmissible profiles give exit 2, failing checks exit 1") {
  Json j = base();
  j["manifold"]["density"] = {{"family", "log_poly"}, {"params", {{"beta", 2.0}, {"r_w", 1.0}}}};
  j["profile"] = {{"family", "zero"}};
  j["checks"] = {"mean_curvature"};
  const auto r = run_quiet(j);
  CHECK(r.exit_code == kExitConfig);
  CHECK(r.error.find("does not bound the curvature") != std::string::npos);

  // An unreachable quadrature tolerance makes the Sobolev quadrature fail.
  RunConfig c = parse_config(read("cone_logpoly_half.json"));
  Overrides o;
  o.tol_quad = 1e-300;
  apply_overrides(c, o);
  RunOptions ro;
  ro.write_outputs = false;
  const auto f = run(c, ro);
  CHECK(f.exit_code == kExitFail);
  CHECK(find(f, "sobolev").verdict == Verdict::Fail);
  CHECK(find(f, "sobolev").notes.find("did not converge") != std::string::npos);

  // An ODE tolerance below double precision is rejected as input.
  RunConfig g = parse_config(read("cone_logpoly_half.json"));
  Overrides tiny;
  tiny.tol_ode = 1e-300;
  apply_overrides(g, tiny);
  const auto e = run(g, ro);
  CHECK(e.exit_code == kExitConfig);
  CHECK(e.error.find("ODE tolerance") != std::string::npos);
}

TEST_CASE("runs are deterministic") {
  for (const char* name : {"euclidean_all_checks.json", "cone_logpoly_n3.json"}) {
    const Json j = read(name);
    const auto a = run_quiet(j).payload(false).dump();
    const auto b = run_quiet(j).payload(false).dump();
    CHECK(a == b);
    CHECK(a.find("runtime_ms") == std::string::npos);
  }
}

TEST_CASE("run writes reports and curves") {
  const auto dir = std::filesystem::temp_directory_path() / "becomp_test_cli_outputs";
  std::filesystem::remove_all(dir);
  RunConfig c = parse_config(read("euclidean_all_checks.json"));
  Overrides o;
  o.out_dir = dir.string();
  apply_overrides(c, o);
  const auto r = run(c);
  CHECK(r.exit_code == kExitOk);
  std::ifstream in(dir / "report.json");
  REQUIRE(in);
  const Json written = Json::parse(in);
  CHECK(written.is_object());
  CHECK(written.at("reports").size() == r.reports.size());
  std::size_t csvs = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir / "csv")) csvs += e.path().extension() == ".csv";
  CHECK(csvs >= 3);
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweep over alpha") {
  const auto s = sweep(base(), "alpha", {0.25, 0.5, 1.0, 2.0});
  CHECK(s.exit_code == kExitOk);
  REQUIRE(s.points.size() == 4);
  double prev = 2.0;
  for (const auto& [v, r] : s.points) {
    const double k = find(r, "sobolev").constants.at("sobolev_constant");
    CHECK(k < prev);
    prev = k;
  }
  const std::string csv = sweep_csv(s);
  CHECK(csv.rfind("value,check_name,label,verdict", 0) == 0);
  CHECK(csv.find("\n0.25,sobolev,") != std::string::npos);
  CHECK(sweep_json(s).at("points").size() == 4);
}

TEST_CASE("sweep over the ball radius") {
  const auto s = sweep(base(), "domains.0.R", {1.0, 2.0, 4.0});
  CHECK(s.exit_code == kExitOk);
  double prev_r0 = 0.0, prev_k = 2.0;
  for (const auto& [v, r] : s.points) {
    const auto& rep = find(r, "sobolev");
    CHECK(rep.constants.at("r0") == v);
    CHECK(rep.constants.at("r0") > prev_r0);
    CHECK(rep.constants.at("sobolev_constant") <= prev_k);
    prev_r0 = rep.constants.at("r0");
    prev_k = rep.constants.at("sobolev_constant");
  }
}

TEST_CASE("sweep edge cases") {
  const auto empty = sweep(base(), "alpha", {});
  CHECK(empty.exit_code == kExitOk);
  CHECK(empty.points.empty());
  CHECK(sweep_csv(empty).find('\n') == sweep_csv(empty).size() - 1);

  CHECK_THROWS_AS(sweep(base(), "manifold.warp.family", {1.0}), ConfigError);
  CHECK_THROWS_AS(sweep(base(), "nonexistent", {1.0}), ConfigError);
  CHECK_THROWS_AS(sweep(base(), "", {1.0}), ConfigError);

  // An invalid value becomes exit 2 for that point only.
  const auto bad = sweep(base(), "alpha", {1.0, -1.0});
  CHECK(bad.exit_code == kExitConfig);
  CHECK(bad.points[0].second.exit_code == kExitOk);
  CHECK(bad.points[1].second.exit_code == kExitConfig);
}

TEST_CASE("dotted paths") {
  CHECK(dotted_to_pointer("domains.0.R") == "/domains/0/R");
  CHECK(dotted_to_pointer("a~b") == "/a~0b");
  CHECK_THROWS_AS(dotted_to_pointer("a..b"), ConfigError);
}

TEST_CASE("envelope output") {
  const RunConfig c = parse_config(read("cone_logpoly_n3.json"));
  const Json e = envelope_json(c);
  CHECK(e.at("admissible") == true);
  CHECK(e.at("b0").get<double>() > 0.0);
  CHECK(e.at("profile").at("family") == "sampled");
  CHECK(e.at("tail_exponent").get<double>() > 2.0);
}
