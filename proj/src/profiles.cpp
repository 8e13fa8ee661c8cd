#include "becomp/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

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

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw InputError(std::string(what) + " must be a positive finite number");
  }
}

double fit_tail_exponent(const std::vector<double>& grid, const std::vector<double>& values) {
  const double r_end = grid.back();
  if (values.back() == 0.0) return std::numeric_limits<double>::infinity();
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] > 0.0 && grid[i] >= r_end / 10.0 && values[i] > 0.0) idx.push_back(i);
  }
  if (idx.size() < 2) {
    idx.clear();
    for (std::size_t i = grid.size(); i-- > 0 && idx.size() < 2;) {
      if (grid[i] > 0.0 && values[i] > 0.0) idx.push_back(i);
    }
  }
  if (idx.size() < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i : idx) {
    mx += std::log(grid[i]);
    my += std::log(values[i]);
  }
  mx /= static_cast<double>(idx.size());
  my /= static_cast<double>(idx.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i : idx) {
    const double dx = std::log(grid[i]) - mx;
    sxy += dx * (std::log(values[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) return 0.0;
  return std::max(0.0, -sxy / sxx);
}

double sampled_eval(const SampledProfile& p, double s) {
  const auto& g = p.grid;
  const auto& v = p.values;
  if (s <= g.front()) return v.front();
  if (s >= g.back()) {
    if (s == g.back()) return v.back();
    if (v.back() == 0.0 || std::isinf(p.tail_exponent)) return 0.0;
    return v.back() * std::pow(s / g.back(), -p.tail_exponent);
  }
  auto it = std::upper_bound(g.begin(), g.end(), s);
  const std::size_t i = static_cast<std::size_t>(it - g.begin()) - 1;
  const double w = (s - g[i]) / (g[i + 1] - g[i]);
  return v[i] + w * (v[i + 1] - v[i]);
}

Moments sampled_moments(const SampledProfile& p) {
  const auto& g = p.grid;
  const auto& v = p.values;
  double b0 = 0.0, b1 = 0.0;
  if (g.front() > 0.0) {
    b1 += v.front() * g.front();
    b0 += 0.5 * v.front() * g.front() * g.front();
  }
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    const double d = g[i + 1] - g[i];
    b1 += 0.5 * d * (v[i] + v[i + 1]);
    b0 += d / 6.0 * (v[i] * (2.0 * g[i] + g[i + 1]) + v[i + 1] * (g[i] + 2.0 * g[i + 1]));
  }
  if (v.back() > 0.0 && std::isfinite(p.tail_exponent)) {
    const double r = g.back();
    b1 += v.back() * r / (p.tail_exponent - 1.0);
    b0 += v.back() * r * r / (p.tail_exponent - 2.0);
  }
  const double eps = std::numeric_limits<double>::epsilon();
  return {b0, b1, eps * static_cast<double>(g.size() + 16) * (b0 + b1)};
}

}  // namespace

DecayProfile DecayProfile::zero() { return DecayProfile(ZeroProfile{}); }

DecayProfile DecayProfile::exponential(double lambda0, double a) {
  require_positive(lambda0, "exponential lambda0");
  require_positive(a, "exponential rate a");
  return DecayProfile(ExponentialProfile{lambda0, a});
}

DecayProfile DecayProfile::power_law(double lambda0, double s0, double p) {
  require_positive(lambda0, "power_law lambda0");
  require_positive(s0, "power_law s0");
  require_positive(p, "power_law exponent p");
  return DecayProfile(PowerLawProfile{lambda0, s0, p});
}

DecayProfile DecayProfile::linear_bump(double lambda0, double s1) {
  require_positive(lambda0, "linear_bump lambda0");
  require_positive(s1, "linear_bump s1");
  return DecayProfile(LinearBumpProfile{lambda0, s1});
}

DecayProfile DecayProfile::sampled(std::vector<double> grid, std::vector<double> values) {
  if (grid.empty() || grid.size() != values.size()) {
    throw InputError("sampled profile needs equally long, nonempty grid and values");
  }
  if (!(grid.front() >= 0.0)) throw InputError("sampled profile grid must start at s >= 0");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid[i]) || !std::isfinite(values[i])) {
      throw InputError("sampled profile contains non-finite entries");
    }
    if (values[i] < 0.0) throw InputError("sampled profile has a negative value");
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw InputError("sampled profile grid is not strictly increasing");
    }
    if (i > 0 && values[i] > values[i - 1]) {
      std::ostringstream msg;
      msg << "sampled profile increases between s=" << grid[i - 1] << " and s=" << grid[i];
      throw InputError(msg.str());
    }
  }
  SampledProfile p{std::move(grid), std::move(values), 0.0};
  p.tail_exponent = fit_tail_exponent(p.grid, p.values);
  return DecayProfile(std::move(p));
}

std::string DecayProfile::family_name() const {
  return std::visit(Overloaded{[](const ZeroProfile&) { return "zero"; },
                               [](const ExponentialProfile&) { return "exponential"; },
                               [](const PowerLawProfile&) { return "power_law"; },
                               [](const LinearBumpProfile&) { return "linear_bump"; },
                               [](const SampledProfile&) { return "sampled"; }},
                    family_);
}

double DecayProfile::operator()(double s) const {
  return std::visit(
      Overloaded{[](const ZeroProfile&) { return 0.0; },
                 [s](const ExponentialProfile& p) { return p.lambda0 * std::exp(-p.a * s); },
                 [s](const PowerLawProfile& p) {
                   return p.lambda0 * std::pow(1.0 + s / p.s0, -p.p);
                 },
                 [s](const LinearBumpProfile& p) {
                   return p.lambda0 * std::max(0.0, 1.0 - s / p.s1);
                 },
                 [s](const SampledProfile& p) { return sampled_eval(p, s); }},
      family_);
}

bool DecayProfile::is_zero() const {
  if (std::holds_alternative<ZeroProfile>(family_)) return true;
  if (const auto* p = std::get_if<SampledProfile>(&family_)) {
    return std::all_of(p->values.begin(), p->values.end(), [](double v) { return v == 0.0; });
  }
  return false;
}

bool DecayProfile::admissible() const { return divergence_reason().empty(); }

std::string DecayProfile::divergence_reason() const {
  double p = std::numeric_limits<double>::infinity();
  if (const auto* pl = std::get_if<PowerLawProfile>(&family_)) p = pl->p;
  if (const auto* sp = std::get_if<SampledProfile>(&family_)) {
    if (sp->values.back() > 0.0) p = sp->tail_exponent;
  }
  if (p > 2.0) return {};
  std::ostringstream msg;
  msg << "b0 = int s lambda(s) ds diverges";
  if (p <= 1.0) msg << " (and so does b1 = int lambda(s) ds)";
  msg << ": " << family_name() << " tail decays like s^-" << p << " with exponent <= 2";
  return msg.str();
}

std::vector<double> DecayProfile::breakpoints() const {
  if (const auto* lb = std::get_if<LinearBumpProfile>(&family_)) return {lb->s1};
  if (const auto* sp = std::get_if<SampledProfile>(&family_)) return sp->grid;
  return {};
}

DecayProfile DecayProfile::scaled(double c) const {
  if (!(c >= 0.0) || !std::isfinite(c)) throw InputError("profile scale must be >= 0");
  if (c == 0.0) return zero();
  return std::visit(
      Overloaded{[](const ZeroProfile&) { return zero(); },
                 [c](const ExponentialProfile& p) { return exponential(c * p.lambda0, p.a); },
                 [c](const PowerLawProfile& p) { return power_law(c * p.lambda0, p.s0, p.p); },
                 [c](const LinearBumpProfile& p) { return linear_bump(c * p.lambda0, p.s1); },
                 [c](const SampledProfile& p) {
                   SampledProfile q = p;
                   for (double& v : q.values) v *= c;
                   return DecayProfile(std::move(q));
                 }},
      family_);
}

double eval_lambda(const DecayProfile& profile, double s) {
  if (!(s >= 0.0)) throw InputError("lambda is defined for s >= 0 only");
  return profile(s);
}

Moments moments(const DecayProfile& profile, double tol) {
  if (!(tol > 0.0)) throw InputError("moment tolerance must be positive");
  if (!profile.admissible()) throw AdmissibilityError(profile.divergence_reason());

  struct Window {
    double end = 0.0;
    double tail_b0 = 0.0;
    double tail_b1 = 0.0;
  };
  const auto& fam = profile.family();
  if (std::holds_alternative<ZeroProfile>(fam)) return {};
  if (const auto* sp = std::get_if<SampledProfile>(&fam)) return sampled_moments(*sp);

  // Finite window by quadrature, exact closed-form tail beyond it.
  Window w = std::visit(
      Overloaded{[](const ExponentialProfile& p) {
                   const double S = 40.0 / p.a;
                   const double e = p.lambda0 * std::exp(-p.a * S);
                   return Window{S, e * (S / p.a + 1.0 / (p.a * p.a)), e / p.a};
                 },
                 [](const PowerLawProfile& p) {
                   const double S = 50.0 * p.s0;
                   const double U = 1.0 + S / p.s0;
                   const double t1 = p.lambda0 * p.s0 * std::pow(U, 1.0 - p.p) / (p.p - 1.0);
                   const double t0 = p.lambda0 * p.s0 * p.s0 *
                                     (std::pow(U, 2.0 - p.p) / (p.p - 2.0) -
                                      std::pow(U, 1.0 - p.p) / (p.p - 1.0));
                   return Window{S, t0, t1};
                 },
                 [](const LinearBumpProfile& p) { return Window{p.s1, 0.0, 0.0}; },
                 [](const auto&) { return Window{}; }},
      fam);

  const double budget = 0.5 * tol;
  const auto q1 = detail::integrate([&](double s) { return profile(s); }, 0.0, w.end, budget);
  const auto q0 =
      detail::integrate([&](double s) { return s * profile(s); }, 0.0, w.end, budget);
  if (!q0.converged || !q1.converged) {
    throw IntegrationError("moment quadrature did not reach the requested tolerance");
  }
  const double eps = std::numeric_limits<double>::epsilon();
  Moments m;
  m.b0 = q0.value + w.tail_b0;
  m.b1 = q1.value + w.tail_b1;
  m.abs_error_bound = std::max(q0.abs_error + 8 * eps * std::abs(w.tail_b0),
                               q1.abs_error + 8 * eps * std::abs(w.tail_b1));
  return m;
}

ScalarFunction shifted_profile(const DecayProfile& profile, double d_ox, double speed, int n,
                               double alpha) {
  if (!(speed >= 0.0 && speed < 1.0)) throw InputError("speed |Du| must lie in [0, 1)");
  if (!(d_ox >= 0.0)) throw InputError("distance to the base point must be >= 0");
  if (n < 2 || !(alpha > 0.0)) throw InputError("need n >= 2 and alpha > 0");
  if (speed == 0.0) return ScalarFunction::constant(0.0);
  const double factor = (n + alpha - 1.0) / (n + alpha) * speed * speed;
  ScalarFunction out;
  out.eval = [profile, d_ox, speed, factor](double t) {
    return factor * profile(std::abs(d_ox - t * speed));
  };
  out.breakpoints.push_back(d_ox / speed);
  for (double b : profile.breakpoints()) {
    if (d_ox - b >= 0.0) out.breakpoints.push_back((d_ox - b) / speed);
    out.breakpoints.push_back((d_ox + b) / speed);
  }
  std::sort(out.breakpoints.begin(), out.breakpoints.end());
  return out;
}

}  // namespace becomp
