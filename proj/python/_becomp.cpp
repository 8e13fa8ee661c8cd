// Python bindings. Model objects cross the boundary as plain dicts in the
// same JSON shape as the run configuration.

#include <pybind11/pybind11.h>

#include "becomp/abp.hpp"
#include "becomp/errors.hpp"
#include "becomp/json_io.hpp"
#include "becomp/odecmp.hpp"
#include "becomp/run.hpp"
#include "becomp/sobolev.hpp"
#include "becomp/volume.hpp"

namespace py = pybind11;
using namespace becomp;

namespace {

Json to_cpp(const py::object& obj) {
  const auto text = py::module_::import("json").attr("dumps")(obj).cast<std::string>();
  return Json::parse(text);
}

py::object to_py(const Json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

DecayProfile profile_arg(const py::object& obj) { return profile_from_json(to_cpp(obj)); }
ModelManifold manifold_arg(const py::object& obj) { return manifold_from_json(to_cpp(obj)); }

SobolevOptions sobolev_options(double r_max, double tol_quad, double tol_ode, double tol_verdict) {
  SobolevOptions o;
  o.r_max = r_max;
  o.tol_quad = tol_quad;
  o.tol_ode = tol_ode;
  o.tol_verdict = tol_verdict;
  return o;
}

Json sobolev_json(const SobolevReport& s, const std::string& name, double tol) {
  Json j = to_json(s.to_report(name, tol), false);
  j["sound_verdict"] = std::string(to_string(s.sound_verdict));
  j["sharp_verdict"] = std::string(to_string(s.sharp_verdict));
  j["vacuous"] = s.vacuous;
  return j;
}

}  // namespace

PYBIND11_MODULE(_becomp, m) {
  m.doc() = "Comparison-geometry toolkit for weighted manifolds";

  // Translators run newest first, so the base class is registered first.
  auto& base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<AdmissibilityError>(m, "AdmissibilityError", base.ptr());
  py::register_exception<HypothesisError>(m, "HypothesisError", base.ptr());
  py::register_exception<CompatibilityError>(m, "CompatibilityError", base.ptr());
  py::register_exception<IntegrationError>(m, "IntegrationError", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());

  m.def(
      "eval_lambda",
      [](const py::object& profile, double s) { return eval_lambda(profile_arg(profile), s); },
      py::arg("profile"), py::arg("s"));

  m.def(
      "moments",
      [](const py::object& profile, double tol) {
        const Moments mo = moments(profile_arg(profile), tol);
        return to_py({{"b0", mo.b0}, {"b1", mo.b1}, {"abs_error_bound", mo.abs_error_bound}});
      },
      py::arg("profile"), py::arg("tol") = 1e-10);

  m.def(
      "solve_h",
      [](const py::object& profile, double t_max, double tol, std::size_t grid_points) {
        const ComparisonSolution s = solve_h(profile_arg(profile), t_max, tol, grid_points);
        return to_py({{"t", s.h.grid},
                      {"h", s.h.values},
                      {"dh", s.h.derivs},
                      {"hprime_at_end", s.hprime_at_end},
                      {"hprime_limit_lower", number_to_json(s.hprime_limit_lower)},
                      {"hprime_limit_upper", number_to_json(s.hprime_limit_upper)}});
      },
      py::arg("profile"), py::arg("t_max"), py::arg("tol") = 1e-10, py::arg("grid_points") = 1001);

  m.def(
      "be_ricci",
      [](const py::object& manifold, double alpha, double r) {
        const BEData d = be_ricci(manifold_arg(manifold), alpha, r);
        return to_py({{"r", d.r}, {"radial", d.radial_eigen}, {"tangential", d.tangential_eigen}});
      },
      py::arg("manifold"), py::arg("alpha"), py::arg("r"));

  m.def(
      "required_envelope",
      [](const py::object& manifold, double alpha, double r_max, std::size_t grid_size) {
        return to_py(to_json(required_envelope(manifold_arg(manifold), alpha, r_max, grid_size)));
      },
      py::arg("manifold"), py::arg("alpha"), py::arg("r_max"), py::arg("grid_size") = 2000);

  m.def(
      "avr",
      [](const py::object& manifold, double alpha, const py::object& profile, double r_max,
         double tol) {
        const AvrResult a = avr(manifold_arg(manifold), alpha, profile_arg(profile), r_max, tol);
        return to_py({{"estimate", a.estimate},
                      {"upper_bound", a.upper_bound},
                      {"fit_exponent", a.fit_exponent},
                      {"fit_residual", a.fit_residual}});
      },
      py::arg("manifold"), py::arg("alpha"), py::arg("profile"), py::arg("r_max"),
      py::arg("tol") = 1e-10);

  m.def(
      "verify_sobolev",
      [](const py::object& manifold, const py::object& domain, const py::object& function,
         double alpha, const py::object& profile, double r_max, double tol_quad, double tol_ode,
         double tol_verdict) {
        const auto opt = sobolev_options(r_max, tol_quad, tol_ode, tol_verdict);
        const SobolevReport s =
            verify_sobolev(manifold_arg(manifold), domain_from_json(to_cpp(domain)),
                           function_from_json(to_cpp(function)), alpha, profile_arg(profile), opt);
        return to_py(sobolev_json(s, "sobolev", tol_verdict));
      },
      py::arg("manifold"), py::arg("domain"), py::arg("function"), py::arg("alpha"),
      py::arg("profile"), py::arg("r_max") = 1e3, py::arg("tol_quad") = 1e-10,
      py::arg("tol_ode") = 1e-10, py::arg("tol_verdict") = 1e-8);

  m.def(
      "verify_isoperimetric",
      [](const py::object& manifold, const py::object& domain, double alpha,
         const py::object& profile, double r_max, double tol_quad, double tol_ode,
         double tol_verdict) {
        const auto opt = sobolev_options(r_max, tol_quad, tol_ode, tol_verdict);
        const SobolevReport s = verify_isoperimetric(
            manifold_arg(manifold), domain_from_json(to_cpp(domain)), alpha, profile_arg(profile), opt);
        return to_py(sobolev_json(s, "isoperimetric", tol_verdict));
      },
      py::arg("manifold"), py::arg("domain"), py::arg("alpha"), py::arg("profile"),
      py::arg("r_max") = 1e3, py::arg("tol_quad") = 1e-10, py::arg("tol_ode") = 1e-10,
      py::arg("tol_verdict") = 1e-8);

  m.def(
      "solve_neumann_radial",
      [](const py::object& manifold, const py::object& domain, const py::object& function,
         double alpha, const py::object& profile, bool normalize) {
        const ModelManifold mm = manifold_arg(manifold);
        const RadialDomain d = domain_from_json(to_cpp(domain));
        RadialFunction f = function_from_json(to_cpp(function));
        const DecayProfile p = profile_arg(profile);
        double kappa = 1.0;
        if (normalize) {
          kappa = normalize_f(mm, d, f, alpha, p, 1e-12);
          f = f.scaled(kappa);
        }
        const NeumannSolution s = solve_neumann_radial(mm, d, f, alpha, p);
        return to_py({{"r", s.u.grid},
                      {"u", s.u.values},
                      {"du", s.u.derivs},
                      {"ddu", s.ddu},
                      {"flux_residual", s.flux_residual},
                      {"kappa", kappa}});
      },
      py::arg("manifold"), py::arg("domain"), py::arg("function"), py::arg("alpha"),
      py::arg("profile"), py::arg("normalize") = true);

  m.def(
      "run",
      [](const py::object& config, bool write_outputs) {
        const RunConfig c = parse_config(to_cpp(config));
        RunOptions o;
        o.write_outputs = write_outputs;
        return to_py(run(c, o).payload(false));
      },
      py::arg("config"), py::arg("write_outputs") = false);
}
