#include "becomp/volume.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "becomp/detail/dopri5.hpp"
#include "becomp/detail/quadrature.hpp"
#include "becomp/errors.hpp"
#include "becomp/odecmp.hpp"

namespace becomp {

namespace {

std::vector<double> geometric_grid(double lo, double hi, std::size_t points) {
  std::vector<double> g(points);
  const double step = std::log(hi / lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) g[i] = lo * std::exp(step * static_cast<double>(i));
  g.front() = lo;
  g.back() = hi;
  return g;
}

}  // namespace

double unit_sphere_area(int n) {
  if (n < 1) throw InputError("sphere dimension must be >= 0");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double sphere_measure(const ModelManifold& m, double r) {
  const WarpJet w = warp_derivs(m, r);
  return unit_sphere_area(m.dim()) * density(m, r) * std::pow(w.phi, m.dim() - 1);
}

double ball_measure(const ModelManifold& m, double r, double tol) {
  if (!(r > 0.0)) throw InputError("ball radius must be positive");
  if (!(tol > 0.0)) throw InputError("quadrature tolerance must be positive");
  const auto q = detail::integrate([&m](double t) { return sphere_measure(m, t); }, 0.0, r, tol,
                                   1e-14);
  if (!q.converged) throw IntegrationError("ball measure quadrature did not converge");
  return q.value;
}

RatioCurve bg_ratio_curve(const ModelManifold& m, double alpha, const DecayProfile& profile,
                          std::span<const double> radii, double tol) {
  if (radii.empty()) throw InputError("no radii requested");
  if (!(radii.front() > 0.0)) throw InputError("radii must be positive");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1])) throw InputError("radii must be strictly increasing");
  }
  if (!(tol > 0.0)) throw InputError("tolerance must be positive");
  const VerificationReport adm = admissibility_check(m, alpha, profile, radii.back(), tol);
  if (!adm.passed()) {
    throw AdmissibilityError("profile does not bound the curvature: " + adm.notes);
  }

  const int n = m.dim();
  const double big_n = n + alpha;
  const double omega = unit_sphere_area(n);

  // Start just off the pole with the leading terms of every component.
  const double t_s = 1e-6 * std::min(1.0, radii.front());
  const double w0 = density(m, 0.0);
  const detail::State<4> y0{t_s, 1.0, omega * w0 * std::pow(t_s, n) / n,
                            std::pow(t_s, big_n) / big_n};
  auto rhs = [&](double t, const detail::State<4>& y) {
    const double l = profile(t);
    return detail::State<4>{y[1], l * y[0], sphere_measure(m, t), std::pow(y[0], big_n - 1.0)};
  };
  std::vector<double> grid;
  grid.reserve(radii.size() + 1);
  grid.push_back(t_s);
  grid.insert(grid.end(), radii.begin(), radii.end());
  detail::OdeOptions opt;
  opt.rtol = std::max(tol, 1e-13);
  opt.atol = 1e-300;
  const auto breaks = profile.breakpoints();
  const auto states = detail::integrate_on_grid<4>(rhs, y0, grid, breaks, opt);

  RatioCurve c;
  c.radii.assign(radii.begin(), radii.end());
  for (std::size_t i = 1; i < states.size(); ++i) {
    const auto& s = states[i];
    const double r = grid[i];
    c.h.push_back(s[0]);
    c.ball.push_back(s[2]);
    c.ratio.push_back(s[2] / (big_n * s[3]));
    c.sphere_ratio.push_back(sphere_measure(m, r) / std::pow(s[0], big_n - 1.0));
  }
  return c;
}

VerificationReport monotonicity_report(const RatioCurve& curve, double rel_slack) {
  double worst_ball = std::numeric_limits<double>::infinity();
  double worst_sphere = std::numeric_limits<double>::infinity();
  double r_ball = 0.0, r_sphere = 0.0;
  for (std::size_t i = 0; i + 1 < curve.radii.size(); ++i) {
    const double b = (curve.ratio[i] - curve.ratio[i + 1]) / curve.ratio[i];
    const double s = (curve.sphere_ratio[i] - curve.sphere_ratio[i + 1]) / curve.sphere_ratio[i];
    if (b < worst_ball) {
      worst_ball = b;
      r_ball = curve.radii[i + 1];
    }
    if (s < worst_sphere) {
      worst_sphere = s;
      r_sphere = curve.radii[i + 1];
    }
  }
  if (curve.radii.size() < 2) worst_ball = worst_sphere = 0.0;
  VerificationReport rep = make_report("bishop_gromov", std::min(worst_ball, worst_sphere), rel_slack);
  rep.constants["ball_ratio_worst_rel_slack"] = worst_ball;
  rep.constants["sphere_ratio_worst_rel_slack"] = worst_sphere;
  rep.constants["ball_ratio_r_worst"] = r_ball;
  rep.constants["sphere_ratio_r_worst"] = r_sphere;
  rep.constants["points"] = static_cast<double>(curve.radii.size());
  if (!curve.ratio.empty()) {
    rep.constants["ratio_first"] = curve.ratio.front();
    rep.constants["ratio_last"] = curve.ratio.back();
  }
  if (worst_sphere >= -rel_slack && worst_ball < -rel_slack) {
    rep.notes = "sphere quotient monotone but ball quotient not: integration fault";
  }
  return rep;
}

VerificationReport mean_curvature_check(const ModelManifold& m, double alpha,
                                        const DecayProfile& profile, double r_max, double tol) {
  if (!(r_max > 1e-3)) throw InputError("r_max must exceed 1e-3");
  std::vector<double> grid{0.0};
  const auto g = geometric_grid(1e-3, r_max, 2000);
  grid.insert(grid.end(), g.begin(), g.end());
  const ComparisonSolution sol = solve_h(profile, grid, 1e-12);
  const int n = m.dim();
  double worst = std::numeric_limits<double>::infinity();
  double r_worst = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double r = grid[i];
    const WarpJet w = warp_derivs(m, r);
    const double lhs = (n - 1) * w.dphi / w.phi + log_density_derivs(m, r).dv;
    const double rhs = (n + alpha - 1.0) * sol.h.derivs[i] / sol.h.values[i];
    if (rhs - lhs < worst) {
      worst = rhs - lhs;
      r_worst = r;
    }
  }
  VerificationReport rep = make_report("mean_curvature", worst, tol);
  rep.constants["r_worst"] = r_worst;
  rep.constants["r_max"] = r_max;
  return rep;
}

AvrResult avr(const ModelManifold& m, double alpha, const DecayProfile& profile, double r_max,
              double tol) {
  if (!(r_max > 0.0)) throw InputError("r_max must be positive");
  const double r_lo = std::min(1e-2, r_max * 1e-3);
  const auto radii = geometric_grid(r_lo, r_max, 600);
  AvrResult out;
  out.r_max = r_max;
  out.curve = bg_ratio_curve(m, alpha, profile, radii, tol);
  out.upper_bound = out.curve.ratio.back();

  std::vector<double> rs, ys;
  double scale = 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] >= r_max / 10.0 * (1.0 - 1e-12)) {
      rs.push_back(radii[i]);
      ys.push_back(out.curve.sphere_ratio[i]);
      scale = std::max(scale, std::abs(out.curve.sphere_ratio[i]));
    }
  }
  const Eigen::Index k = static_cast<Eigen::Index>(rs.size());
  Eigen::VectorXd y(k);
  for (Eigen::Index i = 0; i < k; ++i) y(i) = ys[static_cast<std::size_t>(i)] / scale;

  double best_res = std::numeric_limits<double>::infinity();
  double best_v = 0.0, best_q = 1.0;
  for (int step = 0; step <= 50; ++step) {
    const double q = 0.5 + 0.05 * step;
    Eigen::MatrixXd a(k, 4);
    for (Eigen::Index i = 0; i < k; ++i) {
      const double x = std::pow(r_max / (10.0 * rs[static_cast<std::size_t>(i)]), q);
      a(i, 0) = 1.0;
      a(i, 1) = x;
      a(i, 2) = x * x;
      a(i, 3) = x * x * x;
    }
    const Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);
    const double res = std::sqrt((a * c - y).squaredNorm() / static_cast<double>(k));
    if (res < best_res) {
      best_res = res;
      best_v = c(0) * scale;
      best_q = q;
    }
  }
  out.fit_exponent = best_q;
  out.fit_residual = best_res;
  const double limit = best_v < 1e-6 * scale ? 0.0 : best_v;
  out.estimate = limit / (m.dim() + alpha);
  return out;
}

VerificationReport avr_report(const AvrResult& result, double tol) {
  const double denom = std::max(result.upper_bound, std::numeric_limits<double>::min());
  VerificationReport rep = make_report("avr", (result.upper_bound - result.estimate) / denom, tol);
  rep.constants["V_alpha_estimate"] = result.estimate;
  rep.constants["V_alpha_upper"] = result.upper_bound;
  rep.constants["r_max"] = result.r_max;
  rep.constants["fit_exponent"] = result.fit_exponent;
  rep.constants["fit_residual"] = result.fit_residual;
  return rep;
}

void write_csv(const RatioCurve& curve, std::ostream& os) {
  const auto old = os.precision(17);
  os << "r,ball_ratio,sphere_ratio\n";
  for (std::size_t i = 0; i < curve.radii.size(); ++i) {
    os << curve.radii[i] << ',' << curve.ratio[i] << ',' << curve.sphere_ratio[i] << '\n';
  }
  os.precision(old);
}

}  // namespace becomp
