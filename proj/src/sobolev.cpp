#include "becomp/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "becomp/detail/format.hpp"
#include "becomp/detail/quadrature.hpp"
#include "becomp/errors.hpp"

namespace becomp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kTinyAbs = 1e-300;

// omega_{n-1} int_{inner}^{outer} w phi^{n-1} g
template <class G>
double radial_integral(const ModelManifold& m, const RadialDomain& domain, G&& g,
                       const std::vector<double>& splits, double tol) {
  if (!(tol > 0.0)) throw InputError("quadrature tolerance must be positive");
  const int n = m.dim();
  auto integrand = [&](double r) {
    return density(m, r) * std::pow(warp_derivs(m, r).phi, n - 1) * g(r);
  };
  const auto q = detail::integrate_split(integrand, domain.inner, domain.outer, splits, kTinyAbs, tol);
  if (!q.converged) throw IntegrationError("radial quadrature did not converge");
  return unit_sphere_area(n) * q.value;
}

}  // namespace

RadialDomain RadialDomain::ball(double R) {
  if (!(R > 0.0) || !std::isfinite(R)) throw InputError("ball radius must be positive");
  return {Kind::Ball, 0.0, R};
}

RadialDomain RadialDomain::annulus(double R1, double R2) {
  if (!(R1 > 0.0 && R2 > R1) || !std::isfinite(R2)) {
    throw InputError("annulus needs 0 < R1 < R2");
  }
  return {Kind::Annulus, R1, R2};
}

std::string RadialDomain::describe() const {
  using detail::shortest;
  if (kind == Kind::Ball) return "ball(R=" + shortest(outer) + ")";
  return "annulus(R1=" + shortest(inner) + ",R2=" + shortest(outer) + ")";
}

RadialFunction RadialFunction::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw InputError("constant function needs c > 0");
  return RadialFunction(ConstantFunction{c});
}

RadialFunction RadialFunction::power_bump(double c, double k) {
  if (!(c > 0.0) || !(k > 0.0) || !std::isfinite(c) || !std::isfinite(k)) {
    throw InputError("power bump needs c > 0 and k > 0");
  }
  return RadialFunction(PowerBumpFunction{c, k});
}

RadialFunction RadialFunction::poly(double c0, double c1, double c2) {
  if (!(c0 > 0.0) || !std::isfinite(c0) || !std::isfinite(c1) || !std::isfinite(c2)) {
    throw InputError("polynomial needs c0 > 0 and finite coefficients");
  }
  return RadialFunction(PolyFunction{c0, c1, c2});
}

std::string RadialFunction::describe() const {
  using detail::shortest;
  return std::visit(
      Overloaded{[](const ConstantFunction& f) { return "constant(c=" + shortest(f.c) + ")"; },
                 [](const PowerBumpFunction& f) {
                   return "power_bump(c=" + shortest(f.c) + ",k=" + shortest(f.k) + ")";
                 },
                 [](const PolyFunction& f) {
                   return "poly(c0=" + shortest(f.c0) + ",c1=" + shortest(f.c1) + ",c2=" + shortest(f.c2) + ")";
                 }},
      family_);
}

double RadialFunction::value(double r) const {
  return std::visit(
      Overloaded{[](const ConstantFunction& f) { return f.c; },
                 [r](const PowerBumpFunction& f) { return f.c * std::pow(1.0 + r * r, -f.k); },
                 [r](const PolyFunction& f) { return f.c0 + r * (f.c1 + r * f.c2); }},
      family_);
}

double RadialFunction::deriv(double r) const {
  return std::visit(Overloaded{[](const ConstantFunction&) { return 0.0; },
                               [r](const PowerBumpFunction& f) {
                                 return -2.0 * f.k * f.c * r * std::pow(1.0 + r * r, -f.k - 1.0);
                               },
                               [r](const PolyFunction& f) { return f.c1 + 2.0 * f.c2 * r; }},
                    family_);
}

double RadialFunction::second_deriv(double r) const {
  return std::visit(
      Overloaded{[](const ConstantFunction&) { return 0.0; },
                 [r](const PowerBumpFunction& f) {
                   const double q = 1.0 + r * r;
                   return -2.0 * f.k * f.c * std::pow(q, -f.k - 2.0) *
                          (q - 2.0 * (f.k + 1.0) * r * r);
                 },
                 [](const PolyFunction& f) { return 2.0 * f.c2; }},
      family_);
}

RadialFunction RadialFunction::scaled(double kappa) const {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw InputError("scale must be positive");
  return std::visit(
      Overloaded{[&](const ConstantFunction& f) { return RadialFunction(ConstantFunction{kappa * f.c}); },
                 [&](const PowerBumpFunction& f) {
                   return RadialFunction(PowerBumpFunction{kappa * f.c, f.k});
                 },
                 [&](const PolyFunction& f) {
                   return RadialFunction(PolyFunction{kappa * f.c0, kappa * f.c1, kappa * f.c2});
                 }},
      family_);
}

std::vector<double> RadialFunction::derivative_roots(double a, double b) const {
  std::vector<double> out;
  if (const auto* p = std::get_if<PolyFunction>(&family_)) {
    if (p->c2 != 0.0) {
      const double root = -p->c1 / (2.0 * p->c2);
      if (root > a && root < b) out.push_back(root);
    }
  }
  return out;
}

void RadialFunction::require_positive_on(const RadialDomain& domain) const {
  std::vector<double> probes = derivative_roots(domain.inner, domain.outer);
  const int samples = 1000;
  for (int i = 0; i <= samples; ++i) {
    probes.push_back(domain.inner + (domain.outer - domain.inner) * i / samples);
  }
  for (double r : probes) {
    const double v = value(r);
    if (!(v > 0.0)) {
      std::ostringstream os;
      os << "test function " << describe() << " is not positive at r = " << r;
      throw InputError(os.str());
    }
  }
}

double sobolev_constant(int n, double alpha, double b0, double b1, double r0) {
  const double big_n = n + alpha;
  return std::exp((big_n - 1.0) / big_n * (std::log1p(b0) - 2.0 * r0 * b1 - b0));
}

double boundary_measure(const ModelManifold& m, const RadialDomain& domain) {
  double total = sphere_measure(m, domain.outer);
  if (domain.kind == RadialDomain::Kind::Annulus) total += sphere_measure(m, domain.inner);
  return total;
}

double domain_measure(const ModelManifold& m, const RadialDomain& domain, double tol) {
  return radial_integral(m, domain, [](double) { return 1.0; }, {}, tol);
}

double power_integral(const ModelManifold& m, const RadialDomain& domain,
                      const RadialFunction& f, double alpha, double tol) {
  const double big_n = m.dim() + alpha;
  const double q = big_n / (big_n - 1.0);
  return radial_integral(m, domain, [&](double r) { return std::pow(f.value(r), q); },
                         f.derivative_roots(domain.inner, domain.outer), tol);
}

LhsTerms lhs_terms(const ModelManifold& m, const RadialDomain& domain, const RadialFunction& f,
                   double alpha, const DecayProfile& profile, double tol) {
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  f.require_positive_on(domain);
  const Moments mom = moments(profile, std::max(tol, 1e-14));
  const auto splits = f.derivative_roots(domain.inner, domain.outer);
  LhsTerms t;
  t.boundary = sphere_measure(m, domain.outer) * f.value(domain.outer);
  if (domain.kind == RadialDomain::Kind::Annulus) {
    t.boundary += sphere_measure(m, domain.inner) * f.value(domain.inner);
  }
  t.gradient = radial_integral(m, domain, [&](double r) { return std::abs(f.deriv(r)); }, splits, tol);
  if (mom.b1 > 0.0) {
    t.b1term = 2.0 * mom.b1 * (m.dim() + alpha - 1.0) *
               radial_integral(m, domain, [&](double r) { return f.value(r); }, splits, tol);
  }
  return t;
}

double rhs_value(const ModelManifold& m, const RadialDomain& domain, const RadialFunction& f,
                 double alpha, const DecayProfile& profile, double v_alpha, double tol) {
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  if (!(v_alpha >= 0.0)) throw InputError("V_alpha must be nonnegative");
  f.require_positive_on(domain);
  if (v_alpha == 0.0) return 0.0;
  const Moments mom = moments(profile, std::max(tol, 1e-14));
  const double big_n = m.dim() + alpha;
  const double k = sobolev_constant(m.dim(), alpha, mom.b0, mom.b1, domain.r0());
  const double integral = power_integral(m, domain, f, alpha, tol);
  return big_n * std::pow(v_alpha, 1.0 / big_n) * k * std::pow(integral, (big_n - 1.0) / big_n);
}

Verdict inequality_verdict(double lhs, double rhs, double tol) {
  const double slack = lhs - rhs;
  if (std::isnan(slack)) return Verdict::Fail;
  return slack >= -tol * std::max(lhs, rhs) ? Verdict::Pass : Verdict::Fail;
}

VerificationReport SobolevReport::to_report(const std::string& check_name, double tol) const {
  const double scale = std::max({lhs.total(), rhs_sound, std::numeric_limits<double>::min()});
  VerificationReport rep = make_report(check_name, slack / scale, tol);
  if (rep.verdict != Verdict::Fail && vacuous) rep.verdict = Verdict::Vacuous;
  rep.constants["lhs_boundary"] = lhs.boundary;
  rep.constants["lhs_gradient"] = lhs.gradient;
  rep.constants["lhs_b1term"] = lhs.b1term;
  rep.constants["lhs_total"] = lhs.total();
  rep.constants["rhs_sound"] = rhs_sound;
  rep.constants["rhs_sharp"] = rhs_sharp;
  rep.constants["slack"] = slack;
  rep.constants["slack_sharp"] = slack_sharp;
  rep.constants["b0"] = b0;
  rep.constants["b1"] = b1;
  rep.constants["r0"] = r0;
  rep.constants["V_alpha_upper"] = v_alpha_upper;
  rep.constants["V_alpha_estimate"] = v_alpha_estimate;
  rep.constants["sobolev_constant"] = constant_factor;
  rep.constants["sharp_pass"] = sharp_verdict == Verdict::Pass ? 1.0 : 0.0;
  rep.constants["vacuous"] = vacuous ? 1.0 : 0.0;
  return rep;
}

SobolevReport verify_sobolev(const ModelManifold& m, const RadialDomain& domain,
                             const RadialFunction& f, double alpha, const DecayProfile& profile,
                             const AvrResult& v_alpha, const SobolevOptions& opt) {
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  f.require_positive_on(domain);
  const Moments mom = moments(profile, std::max(opt.tol_quad, 1e-14));
  const double big_n = m.dim() + alpha;
  SobolevReport rep;
  rep.b0 = mom.b0;
  rep.b1 = mom.b1;
  rep.r0 = domain.r0();
  rep.v_alpha_upper = v_alpha.upper_bound;
  rep.v_alpha_estimate = v_alpha.estimate;
  rep.constant_factor = sobolev_constant(m.dim(), alpha, mom.b0, mom.b1, rep.r0);
  rep.lhs = lhs_terms(m, domain, f, alpha, profile, opt.tol_quad);
  const double integral_term =
      std::pow(power_integral(m, domain, f, alpha, opt.tol_quad), (big_n - 1.0) / big_n);
  auto rhs_for = [&](double v) {
    return v > 0.0 ? big_n * std::pow(v, 1.0 / big_n) * rep.constant_factor * integral_term : 0.0;
  };
  rep.rhs_sound = rhs_for(v_alpha.upper_bound);
  rep.rhs_sharp = rhs_for(v_alpha.estimate);
  rep.slack = rep.lhs.total() - rep.rhs_sound;
  rep.slack_sharp = rep.lhs.total() - rep.rhs_sharp;
  rep.sound_verdict = inequality_verdict(rep.lhs.total(), rep.rhs_sound, opt.tol_verdict);
  rep.sharp_verdict = inequality_verdict(rep.lhs.total(), rep.rhs_sharp, opt.tol_verdict);
  rep.vacuous = !(rep.rhs_sharp > 0.0) || v_alpha.estimate == 0.0;
  return rep;
}

SobolevReport verify_sobolev(const ModelManifold& m, const RadialDomain& domain,
                             const RadialFunction& f, double alpha, const DecayProfile& profile,
                             const SobolevOptions& opt) {
  const AvrResult v = avr(m, alpha, profile, opt.r_max, opt.tol_ode);
  return verify_sobolev(m, domain, f, alpha, profile, v, opt);
}

SobolevReport verify_isoperimetric(const ModelManifold& m, const RadialDomain& domain,
                                   double alpha, const DecayProfile& profile,
                                   const AvrResult& v_alpha, const SobolevOptions& opt) {
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  const Moments mom = moments(profile, std::max(opt.tol_quad, 1e-14));
  const double big_n = m.dim() + alpha;
  const double vol = domain_measure(m, domain, opt.tol_quad);
  SobolevReport rep;
  rep.b0 = mom.b0;
  rep.b1 = mom.b1;
  rep.r0 = domain.r0();
  rep.v_alpha_upper = v_alpha.upper_bound;
  rep.v_alpha_estimate = v_alpha.estimate;
  rep.constant_factor = sobolev_constant(m.dim(), alpha, mom.b0, mom.b1, rep.r0);
  rep.lhs.boundary = boundary_measure(m, domain);
  rep.lhs.b1term = mom.b1 > 0.0 ? 2.0 * mom.b1 * (big_n - 1.0) * vol : 0.0;
  const double vol_term = std::pow(vol, (big_n - 1.0) / big_n);
  auto main_term = [&](double v) {
    return v > 0.0 ? big_n * std::pow(v, 1.0 / big_n) * rep.constant_factor * vol_term : 0.0;
  };
  // (n+alpha) V^{1/(n+alpha)} K - 2 (n+alpha-1) b1 |Omega|^{1/(n+alpha)}, times |Omega|^{(n+alpha-1)/(n+alpha)}
  rep.rhs_sound = main_term(v_alpha.upper_bound);
  rep.rhs_sharp = main_term(v_alpha.estimate);
  rep.slack = rep.lhs.total() - rep.rhs_sound;
  rep.slack_sharp = rep.lhs.total() - rep.rhs_sharp;
  rep.sound_verdict = inequality_verdict(rep.lhs.total(), rep.rhs_sound, opt.tol_verdict);
  rep.sharp_verdict = inequality_verdict(rep.lhs.total(), rep.rhs_sharp, opt.tol_verdict);
  const double bracket_rhs = rep.rhs_sharp - rep.lhs.b1term;
  rep.vacuous = !(bracket_rhs > 0.0) || v_alpha.estimate == 0.0;
  return rep;
}

SobolevReport verify_isoperimetric(const ModelManifold& m, const RadialDomain& domain,
                                   double alpha, const DecayProfile& profile,
                                   const SobolevOptions& opt) {
  const AvrResult v = avr(m, alpha, profile, opt.r_max, opt.tol_ode);
  return verify_isoperimetric(m, domain, alpha, profile, v, opt);
}

}  // namespace becomp
