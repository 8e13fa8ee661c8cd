#include "becomp/run.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include "becomp/abp.hpp"
#include "becomp/detail/format.hpp"
#include "becomp/errors.hpp"
#include "becomp/odecmp.hpp"
#include "becomp/sobolev.hpp"
#include "becomp/volume.hpp"

namespace becomp {

namespace {

namespace fs = std::filesystem;

class Pipeline {
 public:
  Pipeline(const RunConfig& config, const RunOptions& opt)
      : c_(config), opt_(opt), digest_(config.digest()) {}

  RunResult execute();

 private:
  // Runs one check; numerical breakdowns become a FAIL report, configuration
  // and admissibility problems propagate.
  template <class F>
  void guarded(const std::string& name, const std::string& label, F&& body);
  void add(VerificationReport rep, const std::string& label, double ms);
  void write_csv_file(const std::string& name, const std::function<void(std::ostream&)>& emit) const;
  void run_abp(const DecayProfile& profile);

  const RunConfig& c_;
  RunOptions opt_;
  std::string digest_;
  RunResult result_;
};

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

template <class F>
void Pipeline::guarded(const std::string& name, const std::string& label, F&& body) {
  const auto start = std::chrono::steady_clock::now();
  try {
    body(start);
  } catch (const AdmissibilityError&) {
    throw;
  } catch (const InputError&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    VerificationReport rep = make_report(name, std::numeric_limits<double>::quiet_NaN(), 0.0);
    rep.notes = e.what();
    add(rep, label, elapsed_ms(start));
  }
}

void Pipeline::add(VerificationReport rep, const std::string& label, double ms) {
  rep.label = label;
  rep.digest = digest_;
  rep.runtime_ms = ms;
  if (rep.verdict == Verdict::Fail) result_.exit_code = std::max(result_.exit_code, kExitFail);
  result_.reports.push_back(std::move(rep));
}

void Pipeline::write_csv_file(const std::string& name,
                              const std::function<void(std::ostream&)>& emit) const {
  if (!opt_.write_outputs || c_.output.csv_dir.empty()) return;
  fs::create_directories(c_.output.csv_dir);
  std::ofstream out(fs::path(c_.output.csv_dir) / name);
  if (!out) throw ConfigError("cannot write " + (fs::path(c_.output.csv_dir) / name).string());
  emit(out);
}

std::string combo_label(const RadialDomain& d, const RadialFunction& f) {
  return d.describe() + " " + f.describe();
}

void Pipeline::run_abp(const DecayProfile& profile) {
  const Tolerances& tol = c_.tolerances;
  std::size_t index = 0;
  for (const auto& d : c_.domains) {
    if (d.kind != RadialDomain::Kind::Ball) continue;
    for (const auto& f : c_.functions) {
      const std::string label = combo_label(d, f);
      const std::size_t k = index++;
      guarded("abp", "neumann " + label, [&](auto start) {
        const double kappa = normalize_f(c_.manifold, d, f, c_.alpha, profile, tol.quadrature);
        const RadialFunction fn = f.scaled(kappa);
        const NeumannSolution sol = solve_neumann_radial(c_.manifold, d, fn, c_.alpha, profile);
        const double residual = first_integral_residual(sol, c_.manifold, fn, c_.alpha);
        VerificationReport neu = make_report("abp", -residual, kFirstIntegralTol);
        neu.constants["kappa"] = kappa;
        neu.constants["flux_residual"] = sol.flux_residual;
        neu.constants["first_integral_residual"] = residual;
        neu.constants["u_at_R"] = sol.u.values.back();
        add(neu, "neumann " + label, elapsed_ms(start));
        write_csv_file("neumann_" + std::to_string(k) + ".csv",
                       [&](std::ostream& os) { write_csv(sol, os); });

        const auto t1 = std::chrono::steady_clock::now();
        VerificationReport lem = lemma31_check(sol, c_.manifold, fn, c_.alpha, tol.verdict);
        lem.check_name = "abp";
        add(lem, "lemma31 " + label, elapsed_ms(t1));

        for (double r : kTransportRadii) {
          const auto t2 = std::chrono::steady_clock::now();
          TransportDiagnostics diag =
              transport_diagnostics(sol, c_.manifold, fn, c_.alpha, profile, r, tol.verdict);
          diag.report.check_name = "abp";
          add(diag.report, "transport r=" + detail::shortest(r) + " " + label, elapsed_ms(t2));
          write_csv_file("transport_" + std::to_string(k) + "_r" + detail::shortest(r) + ".csv",
                         [&](std::ostream& os) { write_csv(diag, os); });
        }
      });
    }
  }
}

RunResult Pipeline::execute() {
  result_.digest = digest_;
  const Tolerances& tol = c_.tolerances;
  try {
    auto t0 = std::chrono::steady_clock::now();
    const DecayProfile profile = resolve_profile(c_);
    const bool is_auto = !c_.profile.has_value();

    Moments mom;
    try {
      mom = moments(profile, tol.quadrature);
    } catch (const AdmissibilityError& e) {
      VerificationReport rep =
          make_report("admissibility", -std::numeric_limits<double>::infinity(), tol.verdict);
      rep.notes = e.what();
      add(rep, is_auto ? "auto envelope" : profile.family_name(), elapsed_ms(t0));
      result_.exit_code = kExitConfig;
      result_.error = std::string("non-admissible profile: ") + e.what();
      return result_;
    }
    if (c_.wants("moments")) {
      VerificationReport rep = make_report("moments", -mom.abs_error_bound, tol.quadrature);
      rep.constants["b0"] = mom.b0;
      rep.constants["b1"] = mom.b1;
      rep.constants["abs_error_bound"] = mom.abs_error_bound;
      add(rep, profile.family_name(), elapsed_ms(t0));
    }

    if (c_.wants("ode")) {
      guarded("ode", profile.family_name(), [&](auto start) {
        const ComparisonSolution sol = solve_h(profile, c_.r_max, tol.ode, 2001);
        add(comparison_invariants_report(sol, tol.verdict), profile.family_name(), elapsed_ms(start));
        write_csv_file("h.csv", [&](std::ostream& os) { write_csv(sol.h, os); });
      });
    }

    {
      const auto start = std::chrono::steady_clock::now();
      VerificationReport adm = admissibility_check(c_.manifold, c_.alpha, profile, c_.r_max, tol.verdict);
      const bool ok = adm.passed();
      add(adm, is_auto ? "auto envelope" : profile.family_name(), elapsed_ms(start));
      if (!ok) {
        result_.exit_code = kExitConfig;
        result_.error = "profile does not bound the curvature: " + adm.notes;
        return result_;
      }
    }

    if (c_.wants("bishop_gromov")) {
      guarded("bishop_gromov", "", [&](auto start) {
        const double lo = std::min(1e-2, c_.r_max * 1e-3);
        std::vector<double> radii(400);
        for (std::size_t i = 0; i < radii.size(); ++i) {
          radii[i] = lo * std::pow(c_.r_max / lo, static_cast<double>(i) / (radii.size() - 1));
        }
        radii.back() = c_.r_max;
        const RatioCurve curve = bg_ratio_curve(c_.manifold, c_.alpha, profile, radii, tol.ode);
        add(monotonicity_report(curve, tol.verdict), "", elapsed_ms(start));
        write_csv_file("bishop_gromov.csv", [&](std::ostream& os) { write_csv(curve, os); });
      });
    }

    if (c_.wants("mean_curvature")) {
      guarded("mean_curvature", "", [&](auto start) {
        add(mean_curvature_check(c_.manifold, c_.alpha, profile, c_.r_max, tol.verdict), "",
            elapsed_ms(start));
      });
    }

    std::optional<AvrResult> v_alpha;
    if (c_.wants("avr") || c_.wants("sobolev") || c_.wants("isoperimetric")) {
      guarded("avr", "", [&](auto start) {
        v_alpha = avr(c_.manifold, c_.alpha, profile, c_.r_max, tol.ode);
        if (c_.wants("avr")) add(avr_report(*v_alpha, tol.verdict), "", elapsed_ms(start));
      });
    }

    SobolevOptions sopt;
    sopt.r_max = c_.r_max;
    sopt.tol_quad = tol.quadrature;
    sopt.tol_ode = tol.ode;
    sopt.tol_verdict = tol.verdict;
    if (c_.wants("sobolev") && v_alpha) {
      for (const auto& d : c_.domains) {
        for (const auto& f : c_.functions) {
          guarded("sobolev", combo_label(d, f), [&](auto start) {
            const SobolevReport s = verify_sobolev(c_.manifold, d, f, c_.alpha, profile, *v_alpha, sopt);
            add(s.to_report("sobolev", tol.verdict), combo_label(d, f), elapsed_ms(start));
          });
        }
      }
    }
    if (c_.wants("isoperimetric") && v_alpha) {
      for (const auto& d : c_.domains) {
        guarded("isoperimetric", d.describe(), [&](auto start) {
          const SobolevReport s = verify_isoperimetric(c_.manifold, d, c_.alpha, profile, *v_alpha, sopt);
          VerificationReport rep = s.to_report("isoperimetric", tol.verdict);
          rep.constants["boundary_measure"] = s.lhs.boundary;
          rep.constants["isoperimetric_rhs"] = s.rhs_sound - s.lhs.b1term;
          add(rep, d.describe(), elapsed_ms(start));
        });
      }
    }
    if (c_.wants("abp")) run_abp(profile);
  } catch (const AdmissibilityError& e) {
    result_.exit_code = kExitConfig;
    result_.error = e.what();
  } catch (const ConfigError& e) {
    result_.exit_code = kExitConfig;
    result_.error = e.what();
  } catch (const InputError& e) {
    result_.exit_code = kExitConfig;
    result_.error = e.what();
  } catch (const Error& e) {
    result_.exit_code = kExitConfig;
    result_.error = e.what();
  }

  if (opt_.write_outputs && !c_.output.json_path.empty()) {
    const fs::path p(c_.output.json_path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p);
    if (!out) {
      result_.exit_code = kExitConfig;
      result_.error = "cannot write " + p.string();
    } else {
      out << result_.payload(true).dump(2) << '\n';
    }
  }
  return result_;
}

void append_number(std::ostringstream& os, const VerificationReport& r, const std::string& key) {
  os << ',';
  const auto it = r.constants.find(key);
  if (it != r.constants.end()) os << it->second;
}

}  // namespace

Json RunResult::payload(bool include_runtime) const {
  Json j;
  j["digest"] = digest;
  j["exit_code"] = exit_code;
  j["error"] = error;
  j["reports"] = Json::array();
  for (const auto& r : reports) j["reports"].push_back(to_json(r, include_runtime));
  return j;
}

DecayProfile resolve_profile(const RunConfig& config) {
  if (config.profile) return *config.profile;
  return required_envelope(config.manifold, config.alpha, config.r_max);
}

RunResult run(const RunConfig& config, const RunOptions& opt) {
  Pipeline p(config, opt);
  return p.execute();
}

Json envelope_json(const RunConfig& config) {
  const DecayProfile p = required_envelope(config.manifold, config.alpha, config.r_max);
  Json j;
  j["profile"] = to_json(p);
  double tail = std::numeric_limits<double>::infinity();
  if (const auto* s = std::get_if<SampledProfile>(&p.family())) tail = s->tail_exponent;
  j["tail_exponent"] = number_to_json(tail);
  j["admissible"] = p.admissible();
  j["divergence_reason"] = p.divergence_reason();
  if (p.admissible()) {
    const Moments m = moments(p, config.tolerances.quadrature);
    j["b0"] = m.b0;
    j["b1"] = m.b1;
  }
  return j;
}

std::string dotted_to_pointer(const std::string& dotted) {
  if (dotted.empty()) throw ConfigError("empty parameter path");
  std::string out;
  std::stringstream ss(dotted);
  std::string part;
  while (std::getline(ss, part, '.')) {
    if (part.empty()) throw ConfigError("malformed parameter path '" + dotted + "'");
    out += '/';
    for (char ch : part) {
      if (ch == '~') {
        out += "~0";
      } else if (ch == '/') {
        out += "~1";
      } else {
        out += ch;
      }
    }
  }
  return out;
}

SweepResult sweep(const Json& base, const std::string& parameter, const std::vector<double>& values,
                  const Overrides& overrides) {
  const Json::json_pointer ptr(dotted_to_pointer(parameter));
  if (!base.contains(ptr) || !base.at(ptr).is_number()) {
    throw ConfigError("sweep parameter '" + parameter + "' does not address a numeric field");
  }
  SweepResult out;
  out.parameter = parameter;
  std::vector<std::future<RunResult>> jobs;
  for (double v : values) {
    Json j = base;
    j[ptr] = v;
    jobs.push_back(std::async(std::launch::async, [j = std::move(j), overrides]() {
      RunResult r;
      try {
        RunConfig c = parse_config(j);
        Overrides o = overrides;
        o.out_dir.clear();
        apply_overrides(c, o);
        RunOptions ro;
        ro.write_outputs = false;
        r = run(c, ro);
      } catch (const Error& e) {
        r.exit_code = kExitConfig;
        r.error = e.what();
      }
      return r;
    }));
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    RunResult r = jobs[i].get();
    out.exit_code = std::max(out.exit_code, r.exit_code);
    out.points.emplace_back(values[i], std::move(r));
  }
  return out;
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream os;
  os.precision(17);
  os << "value,check_name,label,verdict,worst_slack,sobolev_constant,r0,b0,b1,V_alpha_upper,"
        "V_alpha_estimate\n";
  for (const auto& [value, run] : result.points) {
    if (run.reports.empty()) {
      os << detail::shortest(value) << ",error,\"" << run.error << "\",,,,,,,,\n";
      continue;
    }
    for (const auto& r : run.reports) {
      os << detail::shortest(value) << ',' << r.check_name << ",\"" << r.label << "\"," << to_string(r.verdict) << ','
         << r.worst_slack;
      for (const char* key : {"sobolev_constant", "r0", "b0", "b1", "V_alpha_upper", "V_alpha_estimate"}) {
        append_number(os, r, key);
      }
      os << '\n';
    }
  }
  return os.str();
}

Json sweep_json(const SweepResult& result) {
  Json j;
  j["parameter"] = result.parameter;
  j["exit_code"] = result.exit_code;
  j["points"] = Json::array();
  for (const auto& [value, run] : result.points) {
    j["points"].push_back({{"value", value}, {"result", run.payload(false)}});
  }
  return j;
}

}  // namespace becomp
