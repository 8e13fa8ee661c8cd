#include "becomp/abp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "becomp/detail/quadrature.hpp"
#include "becomp/errors.hpp"
#include "becomp/odecmp.hpp"
#include "becomp/volume.hpp"

namespace becomp {

double normalize_f(const ModelManifold& m, const RadialDomain& domain, const RadialFunction& f,
                   double alpha, const DecayProfile& profile, double tol) {
  const double big_n = m.dim() + alpha;
  const double a = lhs_terms(m, domain, f, alpha, profile, tol).total();
  const double b = power_integral(m, domain, f, alpha, tol);
  return std::pow(a / (big_n * b), big_n - 1.0);
}

double neumann_source(const ModelManifold& m, const RadialFunction& f, double alpha, double b1,
                      double r) {
  const double big_n = m.dim() + alpha;
  const double w = density(m, r);
  const double fv = f.value(r);
  return big_n * w * std::pow(fv, big_n / (big_n - 1.0)) - w * std::abs(f.deriv(r)) -
         2.0 * (big_n - 1.0) * b1 * w * fv;
}

NeumannSolution solve_neumann_radial(const ModelManifold& m, const RadialDomain& domain,
                                     const RadialFunction& f, double alpha,
                                     const DecayProfile& profile, const NeumannOptions& opt) {
  if (domain.kind != RadialDomain::Kind::Ball) {
    throw InputError("the radial Neumann solver supports balls only");
  }
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  f.require_positive_on(domain);
  const int n = m.dim();
  const double R = domain.outer;
  const double b1 = moments(profile, 1e-14).b1;
  const auto grid = uniform_grid(R, opt.grid_points);
  const auto roots = f.derivative_roots(0.0, R);

  auto flux_density = [&](double t) {
    return neumann_source(m, f, alpha, b1, t) * std::pow(warp_derivs(m, t).phi, n - 1);
  };
  auto weight = [&](double t) {
    return std::pow(warp_derivs(m, t).phi, n - 1) * density(m, t) * f.value(t);
  };
  auto cell_integral = [&](auto&& g, double a, double b) {
    std::vector<double> splits;
    for (double x : roots) {
      if (x > a && x < b) splits.push_back(x);
    }
    const auto q = detail::integrate_split(g, a, b, splits, opt.tol * (b - a), 1e-15);
    if (!q.converged) throw IntegrationError("Neumann flux quadrature did not converge");
    return q.value;
  };

  const std::size_t k = grid.size();
  std::vector<double> flux(k, 0.0);  // J(r) = int_0^r S phi^{n-1}
  std::vector<double> u(k, 0.0);
  for (std::size_t i = 0; i + 1 < k; ++i) {
    const double a = grid[i];
    const double b = grid[i + 1];
    const double j0 = flux[i];
    flux[i + 1] = j0 + cell_integral(flux_density, a, b);
    auto du = [&](double t) { return (j0 + cell_integral(flux_density, a, t)) / weight(t); };
    u[i + 1] = u[i] + cell_integral(du, a, b);
  }

  NeumannSolution sol;
  sol.R = R;
  sol.b1 = b1;
  sol.u.grid = grid;
  sol.u.values = u;
  sol.u.derivs.resize(k);
  sol.ddu.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double r = grid[i];
    const double s = neumann_source(m, f, alpha, b1, r);
    const double wf = density(m, r) * f.value(r);
    if (i == 0) {
      sol.u.derivs[i] = 0.0;
      sol.ddu[i] = s / (n * wf);
      continue;
    }
    const double du = flux[i] / weight(r);
    const WarpJet w = warp_derivs(m, r);
    const double log_deriv =
        (n - 1) * w.dphi / w.phi + log_density_derivs(m, r).dv + f.deriv(r) / f.value(r);
    sol.u.derivs[i] = du;
    sol.ddu[i] = s / wf - du * log_deriv;
  }
  sol.flux_residual = std::abs(sol.u.derivs.back() - 1.0);
  if (opt.enforce_compatibility && sol.flux_residual > opt.compatibility_tol) {
    std::ostringstream os;
    os << "boundary flux u'(R) = " << sol.u.derivs.back()
       << " differs from 1: f does not satisfy the scaling identity";
    throw CompatibilityError(os.str());
  }
  return sol;
}

double first_integral_residual(const NeumannSolution& sol, const ModelManifold& m,
                               const RadialFunction& f, double alpha) {
  const int n = m.dim();
  const auto& g = sol.u.grid;
  const std::size_t k = g.size();
  if (k < 5) throw InputError("need at least five grid points");
  std::vector<double> p(k);
  for (std::size_t i = 0; i < k; ++i) {
    p[i] = std::pow(warp_derivs(m, g[i]).phi, n - 1) * density(m, g[i]) * f.value(g[i]) *
           sol.u.derivs[i];
  }
  const double h = g[1] - g[0];
  // |f'| kinks the source at critical points of f; stencils never straddle one.
  const auto kinks = f.derivative_roots(0.0, g.back());
  auto smooth_on = [&](std::size_t j) {
    return std::none_of(kinks.begin(), kinks.end(),
                        [&](double x) { return x > g[j] && x < g[j + 4]; });
  };
  static constexpr double kWeights[5][5] = {{-25, 48, -36, 16, -3},
                                            {-3, -10, 18, -6, 1},
                                            {1, -8, 0, 8, -1},
                                            {-1, 6, -18, 10, 3},
                                            {3, -16, 36, -48, 25}};
  double worst = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t centered = std::clamp<std::size_t>(i < 2 ? 0 : i - 2, 0, k - 5);
    std::size_t start = k;
    for (std::size_t shift = 0; shift <= 4 && start == k; ++shift) {
      for (std::size_t j : {centered - shift, centered + shift}) {
        if (j > k - 5 || j > i || j + 4 < i) continue;
        if (smooth_on(j)) {
          start = j;
          break;
        }
      }
    }
    if (start == k) continue;
    const auto& c = kWeights[i - start];
    double dp = 0.0;
    for (std::size_t q = 0; q < 5; ++q) dp += c[q] * p[start + q];
    dp /= 12 * h;
    const double target =
        neumann_source(m, f, alpha, sol.b1, g[i]) * std::pow(warp_derivs(m, g[i]).phi, n - 1);
    worst = std::max(worst, std::abs(dp - target));
  }
  return worst;
}

VerificationReport lemma31_check(const NeumannSolution& sol, const ModelManifold& m,
                                 const RadialFunction& f, double alpha, double tol) {
  const int n = m.dim();
  const double big_n = n + alpha;
  double worst = std::numeric_limits<double>::infinity();
  double r_worst = 0.0;
  std::size_t in_u = 0;
  for (std::size_t i = 0; i < sol.u.size(); ++i) {
    const double r = sol.u.grid[i];
    const double du = sol.u.derivs[i];
    if (!(std::abs(du) < 1.0)) continue;
    ++in_u;
    const double w = density(m, r);
    double laplace;
    if (r == 0.0) {
      laplace = n * sol.ddu[i];
    } else {
      const WarpJet wj = warp_derivs(m, r);
      laplace = sol.ddu[i] + (n - 1) * wj.dphi / wj.phi * du;
    }
    const double lhs = w * laplace + w * log_density_derivs(m, r).dv * du +
                       2.0 * (big_n - 1.0) * sol.b1 * w;
    const double rhs = big_n * w * std::pow(f.value(r), 1.0 / (big_n - 1.0));
    if (rhs - lhs < worst) {
      worst = rhs - lhs;
      r_worst = r;
    }
  }
  if (in_u == 0) worst = 0.0;
  VerificationReport rep = make_report("lemma31", worst, tol);
  rep.constants["r_worst"] = r_worst;
  rep.constants["points_in_U"] = static_cast<double>(in_u);
  return rep;
}

TransportDiagnostics transport_diagnostics(const NeumannSolution& sol, const ModelManifold& m,
                                           const RadialFunction& f, double alpha,
                                           const DecayProfile& profile, double r_param,
                                           double tol) {
  if (!(r_param > 0.0)) throw InputError("transport parameter r must be positive");
  const int n = m.dim();
  const double big_n = n + alpha;
  const Moments mom = moments(profile, 1e-14);
  const double growth = std::exp((big_n - 1.0) * (2.0 * sol.R * mom.b1 + mom.b0));

  TransportDiagnostics d;
  d.r_param = r_param;
  d.worst_slack = std::numeric_limits<double>::infinity();
  double s_worst = 0.0;
  std::size_t valid_count = 0;
  for (std::size_t i = 0; i < sol.u.size(); ++i) {
    const double s = sol.u.grid[i];
    const double du = sol.u.derivs[i];
    const double ddu = sol.ddu[i];
    const double along = s + r_param * du;
    const double image = std::abs(along);
    const double radial = 1.0 + r_param * ddu;
    double ratio;  // phi(image)/phi(s)
    if (s == 0.0) {
      ratio = radial;
    } else {
      ratio = warp_derivs(m, image).phi / warp_derivs(m, s).phi;
    }
    const double jac = radial * std::pow(ratio, n - 1);
    const double bound = density(m, s) *
                         std::pow(1.0 + r_param * std::pow(f.value(s), 1.0 / (big_n - 1.0)), big_n) *
                         growth;
    const bool valid = std::abs(du) < 1.0 && s < sol.R &&
                       1.0 + r_param * std::min(ddu, 0.0) > 0.0 && (s == 0.0 || along > 0.0);
    d.source_radii.push_back(s);
    d.image_radii.push_back(image);
    d.jacobian.push_back(jac);
    d.bound_rhs.push_back(bound);
    d.valid_mask.push_back(valid);
    if (!valid) continue;
    ++valid_count;
    const double slack = bound - density(m, image) * jac;
    if (slack < -tol) ++d.violations;
    if (slack < d.worst_slack) {
      d.worst_slack = slack;
      s_worst = s;
    }
  }
  if (valid_count == 0) d.worst_slack = 0.0;

  const bool closed_form = std::holds_alternative<EuclideanWarp>(m.warp()) &&
                           std::holds_alternative<ConstantDensity>(m.density()) &&
                           profile.is_zero() &&
                           std::holds_alternative<ConstantFunction>(f.family());
  d.report = make_report("transport", d.worst_slack, tol);
  if (d.violations > 0 && !closed_form) {
    d.report.verdict = Verdict::Info;
    d.report.notes = "bound exceeded at radially nondegenerate points; the bound is asserted on the contact set only";
  }
  d.report.constants["r_param"] = r_param;
  d.report.constants["s_worst"] = s_worst;
  d.report.constants["valid_points"] = static_cast<double>(valid_count);
  d.report.constants["violations"] = static_cast<double>(d.violations);
  return d;
}

void write_csv(const NeumannSolution& sol, std::ostream& os) {
  const auto old = os.precision(17);
  os << "r,u,du,ddu\n";
  for (std::size_t i = 0; i < sol.u.size(); ++i) {
    os << sol.u.grid[i] << ',' << sol.u.values[i] << ',' << sol.u.derivs[i] << ',' << sol.ddu[i]
       << '\n';
  }
  os.precision(old);
}

void write_csv(const TransportDiagnostics& diag, std::ostream& os) {
  const auto old = os.precision(17);
  os << "s,image,jacobian,bound,valid\n";
  for (std::size_t i = 0; i < diag.source_radii.size(); ++i) {
    os << diag.source_radii[i] << ',' << diag.image_radii[i] << ',' << diag.jacobian[i] << ','
       << diag.bound_rhs[i] << ',' << (diag.valid_mask[i] ? 1 : 0) << '\n';
  }
  os.precision(old);
}

}  // namespace becomp
