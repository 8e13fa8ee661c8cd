#include "becomp/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>

#include "becomp/errors.hpp"

namespace becomp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const Json& params_of(const Json& j, const std::string& path) {
  require_keys(j, path, {"family"}, {"params"});
  static const Json empty = Json::object();
  if (!j.contains("params")) return empty;
  if (!j.at("params").is_object()) throw ConfigError(path + ".params must be an object");
  return j.at("params");
}

std::string family_of(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path + " must be an object");
  if (!j.contains("family") || !j.at("family").is_string()) {
    throw ConfigError(path + ".family must be a string");
  }
  return j.at("family").get<std::string>();
}

std::vector<double> number_array(const Json& obj, const std::string& key, const std::string& path) {
  const Json& a = obj.at(key);
  if (!a.is_array()) throw ConfigError(path + "." + key + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& v : a) {
    if (!v.is_number()) throw ConfigError(path + "." + key + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

// Rethrows model validation errors as configuration errors tagged with the path.
template <class F>
auto build(const std::string& path, F&& make) {
  try {
    return make();
  } catch (const InputError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace

void require_keys(const Json& obj, const std::string& path,
                  const std::vector<std::string>& required,
                  const std::vector<std::string>& optional) {
  if (!obj.is_object()) throw ConfigError(path + " must be an object");
  for (const auto& k : required) {
    if (!obj.contains(k)) throw ConfigError(path + ": missing key '" + k + "'");
  }
  for (const auto& [k, v] : obj.items()) {
    const bool known = std::find(required.begin(), required.end(), k) != required.end() ||
                       std::find(optional.begin(), optional.end(), k) != optional.end();
    if (!known) throw ConfigError(path + ": unknown key '" + k + "'");
  }
}

double get_number(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(path + ": missing key '" + key + "'");
  const Json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path + "." + key + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path + "." + key + " must be finite");
  return x;
}

Json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json to_json(const VerificationReport& r, bool include_runtime) {
  Json j;
  j["check_name"] = r.check_name;
  j["label"] = r.label;
  j["digest"] = r.digest;
  j["verdict"] = std::string(to_string(r.verdict));
  j["worst_slack"] = number_to_json(r.worst_slack);
  j["tolerance"] = number_to_json(r.tolerance);
  Json c = Json::object();
  for (const auto& [k, v] : r.constants) c[k] = number_to_json(v);
  j["constants"] = c;
  j["notes"] = r.notes;
  if (include_runtime) j["runtime_ms"] = r.runtime_ms;
  return j;
}

Json to_json(const DecayProfile& p) {
  Json j;
  j["family"] = p.family_name();
  j["params"] = std::visit(
      Overloaded{[](const ZeroProfile&) { return Json::object(); },
                 [](const ExponentialProfile& e) { return Json{{"lambda0", e.lambda0}, {"a", e.a}}; },
                 [](const PowerLawProfile& e) {
                   return Json{{"lambda0", e.lambda0}, {"s0", e.s0}, {"p", e.p}};
                 },
                 [](const LinearBumpProfile& e) { return Json{{"lambda0", e.lambda0}, {"s1", e.s1}}; },
                 [](const SampledProfile& e) { return Json{{"grid", e.grid}, {"values", e.values}}; }},
      p.family());
  return j;
}

Json to_json(const ModelManifold& m) {
  Json j;
  j["n"] = m.dim();
  j["warp"] = std::visit(
      Overloaded{[](const EuclideanWarp&) { return Json{{"family", "euclidean"}, {"params", Json::object()}}; },
                 [](const SmoothedConeWarp& w) {
                   return Json{{"family", "smoothed_cone"}, {"params", {{"c", w.c}, {"r_s", w.r_s}}}};
                 }},
      m.warp());
  j["density"] = std::visit(
      Overloaded{[](const ConstantDensity& d) {
                   return Json{{"family", "constant"}, {"params", {{"w0", d.w0}}}};
                 },
                 [](const LogPolyDensity& d) {
                   return Json{{"family", "log_poly"}, {"params", {{"beta", d.beta}, {"r_w", d.r_w}}}};
                 },
                 [](const LogTanhExpDensity& d) {
                   return Json{{"family", "log_tanh_exp"},
                               {"params", {{"beta", d.beta}, {"r_w", d.r_w}}}};
                 }},
      m.density());
  j["allow_pole_singularity"] = m.allows_pole_singularity();
  return j;
}

Json to_json(const RadialDomain& d) {
  if (d.kind == RadialDomain::Kind::Ball) return Json{{"kind", "ball"}, {"R", d.outer}};
  return Json{{"kind", "annulus"}, {"R1", d.inner}, {"R2", d.outer}};
}

Json to_json(const RadialFunction& f) {
  return std::visit(
      Overloaded{[](const ConstantFunction& c) { return Json{{"family", "constant"}, {"params", {{"c", c.c}}}}; },
                 [](const PowerBumpFunction& c) {
                   return Json{{"family", "power_bump"}, {"params", {{"c", c.c}, {"k", c.k}}}};
                 },
                 [](const PolyFunction& c) {
                   return Json{{"family", "poly"},
                               {"params", {{"c0", c.c0}, {"c1", c.c1}, {"c2", c.c2}}}};
                 }},
      f.family());
}

DecayProfile profile_from_json(const Json& j, const std::string& path) {
  const std::string fam = family_of(j, path);
  const Json& p = params_of(j, path);
  const std::string pp = path + ".params";
  return build(path, [&] {
    if (fam == "zero") {
      require_keys(p, pp, {});
      return DecayProfile::zero();
    }
    if (fam == "exponential") {
      require_keys(p, pp, {"lambda0", "a"});
      return DecayProfile::exponential(get_number(p, "lambda0", pp), get_number(p, "a", pp));
    }
    if (fam == "power_law") {
      require_keys(p, pp, {"lambda0", "s0", "p"});
      return DecayProfile::power_law(get_number(p, "lambda0", pp), get_number(p, "s0", pp),
                                     get_number(p, "p", pp));
    }
    if (fam == "linear_bump") {
      require_keys(p, pp, {"lambda0", "s1"});
      return DecayProfile::linear_bump(get_number(p, "lambda0", pp), get_number(p, "s1", pp));
    }
    if (fam == "sampled") {
      require_keys(p, pp, {"grid", "values"});
      return DecayProfile::sampled(number_array(p, "grid", pp), number_array(p, "values", pp));
    }
    throw ConfigError(path + ": unknown profile family '" + fam + "'");
  });
}

ModelManifold manifold_from_json(const Json& j, const std::string& path) {
  require_keys(j, path, {"n", "warp", "density"}, {"allow_pole_singularity"});
  const Json& nj = j.at("n");
  if (!nj.is_number_integer()) throw ConfigError(path + ".n must be an integer");
  const int n = nj.get<int>();

  const std::string wp = path + ".warp";
  const std::string wfam = family_of(j.at("warp"), wp);
  const Json& wparams = params_of(j.at("warp"), wp);
  Warp warp;
  if (wfam == "euclidean") {
    require_keys(wparams, wp + ".params", {});
    warp = EuclideanWarp{};
  } else if (wfam == "smoothed_cone") {
    require_keys(wparams, wp + ".params", {"c", "r_s"});
    warp = SmoothedConeWarp{get_number(wparams, "c", wp + ".params"),
                            get_number(wparams, "r_s", wp + ".params")};
  } else {
    throw ConfigError(wp + ": unknown warp family '" + wfam + "'");
  }

  const std::string dp = path + ".density";
  const std::string dfam = family_of(j.at("density"), dp);
  const Json& dparams = params_of(j.at("density"), dp);
  const std::string dpp = dp + ".params";
  Density dens;
  if (dfam == "constant") {
    require_keys(dparams, dpp, {"w0"});
    dens = ConstantDensity{get_number(dparams, "w0", dpp)};
  } else if (dfam == "log_poly") {
    require_keys(dparams, dpp, {"beta", "r_w"});
    dens = LogPolyDensity{get_number(dparams, "beta", dpp), get_number(dparams, "r_w", dpp)};
  } else if (dfam == "log_tanh_exp") {
    require_keys(dparams, dpp, {"beta", "r_w"});
    dens = LogTanhExpDensity{get_number(dparams, "beta", dpp), get_number(dparams, "r_w", dpp)};
  } else {
    throw ConfigError(dp + ": unknown density family '" + dfam + "'");
  }

  bool allow = false;
  if (j.contains("allow_pole_singularity")) {
    if (!j.at("allow_pole_singularity").is_boolean()) {
      throw ConfigError(path + ".allow_pole_singularity must be a boolean");
    }
    allow = j.at("allow_pole_singularity").get<bool>();
  }
  return build(path, [&] { return ModelManifold(n, warp, dens, allow); });
}

RadialDomain domain_from_json(const Json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
    throw ConfigError(path + ".kind must be a string");
  }
  const std::string kind = j.at("kind").get<std::string>();
  return build(path, [&] {
    if (kind == "ball") {
      require_keys(j, path, {"kind", "R"});
      return RadialDomain::ball(get_number(j, "R", path));
    }
    if (kind == "annulus") {
      require_keys(j, path, {"kind", "R1", "R2"});
      return RadialDomain::annulus(get_number(j, "R1", path), get_number(j, "R2", path));
    }
    throw ConfigError(path + ": unknown domain kind '" + kind + "'");
  });
}

RadialFunction function_from_json(const Json& j, const std::string& path) {
  const std::string fam = family_of(j, path);
  const Json& p = params_of(j, path);
  const std::string pp = path + ".params";
  return build(path, [&] {
    if (fam == "constant") {
      require_keys(p, pp, {"c"});
      return RadialFunction::constant(get_number(p, "c", pp));
    }
    if (fam == "power_bump") {
      require_keys(p, pp, {"c", "k"});
      return RadialFunction::power_bump(get_number(p, "c", pp), get_number(p, "k", pp));
    }
    if (fam == "poly") {
      require_keys(p, pp, {"c0", "c1", "c2"});
      return RadialFunction::poly(get_number(p, "c0", pp), get_number(p, "c1", pp),
                                  get_number(p, "c2", pp));
    }
    throw ConfigError(path + ": unknown function family '" + fam + "'");
  });
}

std::string fnv1a_digest(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace becomp
