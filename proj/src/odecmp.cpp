#include "becomp/odecmp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "becomp/detail/dopri5.hpp"
#include "becomp/errors.hpp"

namespace becomp {

namespace {

detail::OdeOptions ode_options(double tol) {
  if (!(tol > 0.0)) throw InputError("ODE tolerance must be positive");
  // Below double precision the error norms overflow.
  if (tol < 1e-15) throw InputError("ODE tolerance must be at least 1e-15");
  detail::OdeOptions opt;
  opt.rtol = tol;
  opt.atol = tol * 1e-3;
  return opt;
}

void require_grid_from_zero(std::span<const double> grid) {
  if (grid.size() < 2 || grid.front() != 0.0) {
    throw InputError("output grid must start at 0 and contain at least two points");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw InputError("output grid must be strictly increasing");
  }
}

void require_nonnegative(const ScalarFunction& f, std::span<const double> grid) {
  auto check = [&](double t) {
    const double v = f(t);
    if (v < 0.0 || std::isnan(v)) {
      throw InputError("ODE coefficient is negative at t = " + std::to_string(t));
    }
  };
  for (double t : grid) check(t);
  for (double b : f.breakpoints) {
    if (b >= grid.front() && b <= grid.back()) check(b);
  }
}

}  // namespace

std::vector<double> uniform_grid(double t_max, std::size_t grid_points) {
  if (!(t_max > 0.0)) throw InputError("window length must be positive");
  if (grid_points < 2) throw InputError("need at least two grid points");
  std::vector<double> g(grid_points);
  const double step = t_max / static_cast<double>(grid_points - 1);
  for (std::size_t i = 0; i < grid_points; ++i) g[i] = step * static_cast<double>(i);
  g.back() = t_max;
  return g;
}

ComparisonSolution solve_h(const ScalarFunction& lambda, std::span<const double> grid,
                           double tol) {
  require_grid_from_zero(grid);
  const auto opt = ode_options(tol);
  // State: h, h', int h lambda.
  auto rhs = [&](double t, const detail::State<3>& y) {
    const double l = lambda(t);
    return detail::State<3>{y[1], l * y[0], l * y[0]};
  };
  const auto states =
      detail::integrate_on_grid<3>(rhs, {0.0, 1.0, 0.0}, grid, lambda.breakpoints, opt);

  ComparisonSolution sol;
  sol.h.grid.assign(grid.begin(), grid.end());
  sol.h.values.reserve(grid.size());
  sol.h.derivs.reserve(grid.size());
  for (const auto& s : states) {
    sol.h.values.push_back(s[0]);
    sol.h.derivs.push_back(s[1]);
  }
  sol.hprime_at_end = states.back()[1];
  sol.hprime_identity = 1.0 + states.back()[2];
  sol.hprime_limit_lower = std::numeric_limits<double>::infinity();
  sol.hprime_limit_upper = std::numeric_limits<double>::infinity();
  sol.b0 = std::numeric_limits<double>::infinity();
  return sol;
}

ComparisonSolution solve_h(const DecayProfile& profile, std::span<const double> grid,
                           double tol) {
  ScalarFunction lambda{[&profile](double t) { return profile(t); }, profile.breakpoints()};
  ComparisonSolution sol = solve_h(lambda, grid, tol);
  if (profile.admissible()) {
    const Moments m = moments(profile, std::max(tol, 1e-13));
    sol.b0 = m.b0;
    sol.hprime_limit_lower = 1.0 + m.b0;
    sol.hprime_limit_upper = 1.0 + m.b0 * std::exp(m.b0);
  }
  return sol;
}

ComparisonSolution solve_h(const DecayProfile& profile, double t_max, double tol,
                           std::size_t grid_points) {
  if (!(t_max > 0.0)) throw InputError("t_max must be positive");
  const auto grid = uniform_grid(t_max, grid_points);
  return solve_h(profile, grid, tol);
}

double PsiPair::wronskian_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < psi1.size(); ++i) {
    const double w = psi2.derivs[i] * psi1.values[i] - psi2.values[i] * psi1.derivs[i];
    worst = std::max(worst, std::abs(w + 1.0));
  }
  return worst;
}

PsiPair solve_psi_pair(const ScalarFunction& coefficient, std::span<const double> grid,
                       double tol) {
  require_grid_from_zero(grid);
  require_nonnegative(coefficient, grid);
  if (!(tol > 0.0)) throw InputError("ODE tolerance must be positive");
  // Local error control two orders below tol keeps the global Wronskian drift under tol.
  const auto opt = ode_options(std::max(tol * 1e-2, 1e-14));
  // State: psi1, psi1', psi2, psi2', int Lambda, int t Lambda.
  auto rhs = [&](double t, const detail::State<6>& y) {
    const double c = coefficient(t);
    return detail::State<6>{y[1], c * y[0], y[3], c * y[2], c, t * c};
  };
  const auto states = detail::integrate_on_grid<6>(rhs, {0.0, 1.0, 1.0, 0.0, 0.0, 0.0}, grid,
                                                   coefficient.breakpoints, opt);
  PsiPair out;
  out.psi1.grid.assign(grid.begin(), grid.end());
  out.psi2.grid = out.psi1.grid;
  for (const auto& s : states) {
    out.psi1.values.push_back(s[0]);
    out.psi1.derivs.push_back(s[1]);
    out.psi2.values.push_back(s[2]);
    out.psi2.derivs.push_back(s[3]);
  }
  out.coefficient_integral = states.back()[4];
  out.coefficient_first_moment = states.back()[5];
  return out;
}

PsiPair solve_psi_pair(const ScalarFunction& coefficient, double r, double tol,
                       std::size_t grid_points) {
  if (!(r > 0.0)) throw InputError("window length r must be positive");
  const auto grid = uniform_grid(r, grid_points);
  return solve_psi_pair(coefficient, grid, tol);
}

VerificationReport riccati_compare(const ScalarCurve& g, const ScalarFunction& G, double beta,
                                   double r, double tol, double initial_slope) {
  g.validate();
  if (!(beta > 0.0 && beta <= 1.0)) throw InputError("beta must lie in (0, 1]");
  if (!(r > 0.0)) throw InputError("r must be positive");
  if (!(initial_slope > 0.0)) throw InputError("initial slope must be positive");

  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g.grid[i] > 0.0 && g.grid[i] <= r * (1.0 + 1e-12)) idx.push_back(i);
  }
  if (idx.empty()) throw InputError("g has no grid points in (0, r]");
  const double t0 = g.grid[idx.front()];

  // Riccati inequality, checked on the stored derivative.
  double max_defect = -std::numeric_limits<double>::infinity();
  for (std::size_t i : idx) {
    const double t = g.grid[i];
    const double gv = g.values[i];
    const double Gv = G(t);
    if (Gv < 0.0) throw InputError("G must be nonnegative");
    const double defect = g.derivs[i] + gv * gv - Gv;
    const double slack = 100.0 * tol * std::max({1.0, std::abs(Gv), gv * gv});
    if (defect > slack || !std::isfinite(defect)) {
      throw HypothesisError("g' + g^2 <= G fails at t = " + std::to_string(t) +
                            " (excess " + std::to_string(defect) + ")");
    }
    max_defect = std::max(max_defect, defect);
  }
  // Leading singular term: t g(t) must stay close to beta on [t0, 2 t0].
  for (std::size_t i : idx) {
    const double t = g.grid[i];
    if (t > 2.0 * t0) break;
    if (std::abs(t * g.values[i] - beta) > 0.5 * beta) {
      throw HypothesisError("g does not behave like beta/t near 0 (t g(t) = " +
                            std::to_string(t * g.values[i]) + ")");
    }
  }

  std::vector<double> grid{0.0};
  for (std::size_t i : idx) grid.push_back(g.grid[i]);
  const auto opt = ode_options(tol * 1e-2);
  auto rhs = [&](double t, const detail::State<2>& y) {
    return detail::State<2>{y[1], G(t) * y[0]};
  };
  const auto states =
      detail::integrate_on_grid<2>(rhs, {0.0, initial_slope}, grid, G.breakpoints, opt);

  double worst = std::numeric_limits<double>::infinity();
  double t_worst = t0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const auto& s = states[k + 1];
    const double slack = s[1] / s[0] - g.values[idx[k]];
    if (slack < worst) {
      worst = slack;
      t_worst = grid[k + 1];
    }
  }
  VerificationReport rep = make_report("riccati_compare", worst, tol);
  rep.constants["beta"] = beta;
  rep.constants["t_first"] = t0;
  rep.constants["t_worst"] = t_worst;
  rep.constants["max_riccati_defect"] = max_defect;
  return rep;
}

VerificationReport psi_ratio_bound_check(const ScalarFunction& coefficient,
                                         double coefficient_total, double r, double tol) {
  const PsiPair pair = solve_psi_pair(coefficient, r, std::min(tol, 1e-10));
  const double p1 = pair.psi1.values.back();
  if (!(p1 > 0.0)) throw IntegrationError("psi1(r) vanished; integrator fault");
  const double ratio = pair.psi2.values.back() / p1;
  const double bound = coefficient_total + 1.0 / r;
  VerificationReport rep = make_report("psi_ratio_bound", bound - ratio, tol);
  rep.constants["ratio"] = ratio;
  rep.constants["bound"] = bound;
  rep.constants["coefficient_integral"] = pair.coefficient_integral;
  rep.constants["wronskian_defect"] = pair.wronskian_defect();
  return rep;
}

VerificationReport psi1_growth_check(const ScalarFunction& coefficient, double t_max,
                                     double moment_bound, double tol) {
  if (!(moment_bound >= 0.0)) throw InputError("moment bound must be >= 0");
  const PsiPair pair = solve_psi_pair(coefficient, t_max, std::min(tol, 1e-10));
  const double growth = std::exp(moment_bound);
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < pair.psi1.size(); ++i) {
    const double t = pair.psi1.grid[i];
    worst = std::min(worst, 1.0 - pair.psi1.values[i] / (t * growth));
  }
  VerificationReport rep = make_report("psi1_growth", worst, tol);
  rep.constants["moment_bound"] = moment_bound;
  rep.constants["first_moment_numeric"] = pair.coefficient_first_moment;
  rep.constants["psi1_end"] = pair.psi1.values.back();
  return rep;
}

VerificationReport comparison_invariants_report(const ComparisonSolution& sol, double tol) {
  const auto& h = sol.h;
  // Every sub-check contributes a relative slack; the report keeps the worst.
  double worst = std::numeric_limits<double>::infinity();
  auto note = [&worst](double s) { worst = std::min(worst, s); };

  note(-std::abs(h.values.front()));
  note(-std::abs(h.derivs.front() - 1.0));
  const double growth = std::isfinite(sol.b0) ? std::exp(sol.b0) : 0.0;
  double min_lower = std::numeric_limits<double>::infinity();
  double min_upper = std::numeric_limits<double>::infinity();
  double min_monotone = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < h.size(); ++i) {
    const double t = h.grid[i];
    min_lower = std::min(min_lower, h.values[i] / t - 1.0);
    if (growth > 0.0) min_upper = std::min(min_upper, 1.0 - h.values[i] / (t * growth));
    min_monotone = std::min(min_monotone, (h.derivs[i] - h.derivs[i - 1]) / h.derivs[i]);
  }
  note(min_lower);
  note(min_upper);
  note(min_monotone);
  note(sol.hprime_at_end - 1.0);
  double end_gap = std::numeric_limits<double>::infinity();
  if (std::isfinite(sol.hprime_limit_upper)) {
    end_gap = (sol.hprime_limit_upper - sol.hprime_at_end) / sol.hprime_limit_upper;
    note(end_gap);
  }
  const double identity_gap =
      std::abs(sol.hprime_at_end - sol.hprime_identity) / std::abs(sol.hprime_at_end);
  note(-identity_gap);

  VerificationReport rep = make_report("ode", worst, tol);
  rep.constants["b0"] = sol.b0;
  rep.constants["t_max"] = h.grid.back();
  rep.constants["h_end"] = h.values.back();
  rep.constants["hprime_end"] = sol.hprime_at_end;
  rep.constants["hprime_identity"] = sol.hprime_identity;
  rep.constants["hprime_limit_lower"] = sol.hprime_limit_lower;
  rep.constants["hprime_limit_upper"] = sol.hprime_limit_upper;
  rep.constants["min_h_over_t_minus_1"] = min_lower;
  rep.constants["min_upper_bound_slack"] = min_upper;
  rep.constants["min_hprime_increment"] = min_monotone;
  rep.constants["identity_gap"] = identity_gap;
  return rep;
}

}  // namespace becomp
