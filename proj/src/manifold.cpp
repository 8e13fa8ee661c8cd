#include "becomp/manifold.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

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

double sech2(double x) {
  const double s = 1.0 / std::cosh(x);
  return s * s;
}

// Least-squares slope of log(y) against log(x), returned as a decay exponent.
double loglog_decay(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  const double k = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= k;
  my /= k;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxx > 0.0 ? -sxy / sxx : 0.0;
}

}  // namespace

ModelManifold::ModelManifold(int n, Warp warp, Density density, bool allow_pole_singularity)
    : n_(n),
      warp_(std::move(warp)),
      density_(std::move(density)),
      allow_pole_singularity_(allow_pole_singularity) {
  if (n_ < 2) throw InputError("manifold dimension must be >= 2");
  if (const auto* cone = std::get_if<SmoothedConeWarp>(&warp_)) {
    if (!(cone->c > 0.0 && cone->c <= 1.0)) throw InputError("smoothed cone needs 0 < c <= 1");
    require_positive(cone->r_s, "smoothed cone r_s");
  }
  std::visit(Overloaded{[](const ConstantDensity& d) { require_positive(d.w0, "density w0"); },
                        [](const LogPolyDensity& d) {
                          require_positive(d.r_w, "log_poly r_w");
                          if (!std::isfinite(d.beta)) throw InputError("log_poly beta");
                        },
                        [](const LogTanhExpDensity& d) {
                          require_positive(d.r_w, "log_tanh_exp r_w");
                          if (!std::isfinite(d.beta)) throw InputError("log_tanh_exp beta");
                        }},
             density_);
  if (!smooth_at_pole() && !allow_pole_singularity_) {
    throw InputError(
        "density has w'(0) != 0 and is not smooth at the pole; set "
        "allow_pole_singularity to use it on the half line");
  }
}

bool ModelManifold::smooth_at_pole() const {
  if (const auto* d = std::get_if<LogTanhExpDensity>(&density_)) return d->beta == 0.0;
  return true;
}

WarpJet warp_derivs(const ModelManifold& m, double r) {
  if (!(r >= 0.0)) throw InputError("radius must be >= 0");
  return std::visit(
      Overloaded{[r](const EuclideanWarp&) { return WarpJet{r, 1.0, 0.0, 0.0, 0.0}; },
                 [r](const SmoothedConeWarp& w) {
                   const double x = r / w.r_s;
                   const double th = std::tanh(x);
                   const double s2 = sech2(x);
                   const double k = 1.0 - w.c;
                   WarpJet j;
                   j.phi = w.c * r + k * w.r_s * th;
                   j.dphi = w.c + k * s2;
                   j.one_minus_dphi = k * th * th;
                   j.ddphi = -2.0 * k * s2 * th / w.r_s;
                   j.dddphi = -2.0 * k / (w.r_s * w.r_s) * (s2 * s2 - 2.0 * s2 * th * th);
                   return j;
                 }},
      m.warp());
}

LogDensityJet log_density_derivs(const ModelManifold& m, double r) {
  if (!(r >= 0.0)) throw InputError("radius must be >= 0");
  return std::visit(
      Overloaded{[](const ConstantDensity& d) { return LogDensityJet{std::log(d.w0), 0.0, 0.0}; },
                 [r](const LogPolyDensity& d) {
                   const double a2 = d.r_w * d.r_w;
                   const double q = a2 + r * r;
                   return LogDensityJet{0.5 * d.beta * std::log1p(r * r / a2), d.beta * r / q,
                                        d.beta * (a2 - r * r) / (q * q)};
                 },
                 [r](const LogTanhExpDensity& d) {
                   const double x = r / d.r_w;
                   const double th = std::tanh(x);
                   const double s2 = sech2(x);
                   return LogDensityJet{d.beta * th, d.beta * s2 / d.r_w,
                                        -2.0 * d.beta * s2 * th / (d.r_w * d.r_w)};
                 }},
      m.density());
}

double density(const ModelManifold& m, double r) { return std::exp(log_density_derivs(m, r).v); }

BEData be_ricci(const ModelManifold& m, double alpha, double r) {
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  if (!(r >= 0.0)) throw InputError("radius must be >= 0");
  const int n = m.dim();
  const WarpJet w = warp_derivs(m, r);
  const LogDensityJet v = log_density_derivs(m, r);
  BEData out;
  out.r = r;
  if (r == 0.0) {
    if (!m.smooth_at_pole()) throw InputError("curvature at the pole is undefined for this density");
    // Limits of phi''/phi, (1 - phi'^2)/phi^2 and phi' v'/phi as r -> 0.
    const double value = -(n - 1) * w.dddphi - v.ddv;
    out.radial_eigen = value;
    out.tangential_eigen = value;
    return out;
  }
  const double radial_sec = -w.ddphi / w.phi;
  const double tangential_sec = w.one_minus_dphi * (1.0 + w.dphi) / (w.phi * w.phi);
  out.radial_eigen = (n - 1) * radial_sec - v.ddv - v.dv * v.dv / alpha;
  out.tangential_eigen = radial_sec + (n - 2) * tangential_sec - w.dphi / w.phi * v.dv;
  return out;
}

double curvature_deficit(const ModelManifold& m, double alpha, double r) {
  const BEData d = be_ricci(m, alpha, r);
  return std::max(0.0, -d.min_eigen() / (m.dim() + alpha - 1.0));
}

std::vector<double> envelope_grid(double r_max, std::size_t points) {
  if (!(r_max > 0.0)) throw InputError("r_max must be positive");
  if (points < 3) throw InputError("envelope grid needs at least three points");
  const double a = std::min(0.05, r_max / static_cast<double>(points));
  const double step = std::log1p(r_max / a) / static_cast<double>(points - 1);
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i) g[i] = a * std::expm1(step * static_cast<double>(i));
  g.front() = 0.0;
  g.back() = r_max;
  return g;
}

DecayProfile required_envelope(const ModelManifold& m, double alpha, double r_max,
                               std::size_t grid_size) {
  const auto grid = envelope_grid(r_max, grid_size);
  const std::size_t n = grid.size();
  auto deficit = [&](double r) {
    if (r == 0.0 && !m.smooth_at_pole()) return curvature_deficit(m, alpha, 1e-12);
    return curvature_deficit(m, alpha, r);
  };

  // Largest sample per cell [s_i, s_{i+1}] from five equispaced points, raised
  // by twice the interpolation error bound |second difference| / 8.
  std::vector<double> node(n);
  for (std::size_t i = 0; i < n; ++i) node[i] = deficit(grid[i]);
  std::vector<double> cell(n, 0.0);
  cell[n - 1] = node[n - 1];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    std::array<double, 5> f{node[i], 0.0, 0.0, 0.0, node[i + 1]};
    for (int k = 1; k <= 3; ++k) f[k] = deficit(grid[i] + 0.25 * k * (grid[i + 1] - grid[i]));
    double c = *std::max_element(f.begin(), f.end());
    double bend = 0.0;
    for (int k = 1; k <= 3; ++k) bend = std::max(bend, std::abs(f[k - 1] - 2.0 * f[k] + f[k + 1]));
    cell[i] = c > 0.0 ? c + 0.25 * bend : 0.0;
  }
  // Running maximum from the right, then shifted by one cell so that linear
  // interpolation between nodes stays above every sample to the right.
  std::vector<double> majorant(n);
  double running = 0.0;
  for (std::size_t i = n; i-- > 0;) {
    running = std::max(running, cell[i]);
    majorant[i] = running;
  }
  std::vector<double> values(n);
  values[0] = majorant[0];
  for (std::size_t i = 1; i < n; ++i) values[i] = majorant[i - 1];

  if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; })) {
    return DecayProfile::zero();
  }
  return DecayProfile::sampled(grid, std::move(values));
}

VerificationReport admissibility_check(const ModelManifold& m, double alpha,
                                       const DecayProfile& profile, double r_max, double tol) {
  if (!(alpha > 0.0)) throw InputError("alpha must be positive");
  const double scale = m.dim() + alpha - 1.0;
  const auto grid = envelope_grid(r_max, 4001);

  double worst = std::numeric_limits<double>::infinity();
  double r_worst = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double r = grid[i];
    if (r == 0.0 && !m.smooth_at_pole()) continue;
    const double slack = be_ricci(m, alpha, r).min_eigen() + scale * profile(r);
    if (slack < worst) {
      worst = slack;
      r_worst = r;
    }
  }

  // Decay rates over the last decade.
  std::vector<double> xs, need, have;
  for (double r : grid) {
    if (r < r_max / 10.0 || r == 0.0) continue;
    const double d = curvature_deficit(m, alpha, r);
    if (d > 0.0) {
      xs.push_back(r);
      need.push_back(d);
      have.push_back(profile(r));
    }
  }
  double need_exp = std::numeric_limits<double>::infinity();
  double have_exp = std::numeric_limits<double>::infinity();
  bool tail_ok = true;
  if (xs.size() >= 2) {
    need_exp = loglog_decay(xs, need);
    if (std::all_of(have.begin(), have.end(), [](double v) { return v > 0.0; })) {
      have_exp = loglog_decay(xs, have);
      tail_ok = have_exp <= need_exp + 0.05 * need_exp + 0.05;
    } else {
      tail_ok = false;
    }
  }

  const bool admissible = profile.admissible();
  std::ostringstream notes;
  double slack = worst;
  if (!admissible) {
    notes << profile.divergence_reason();
    slack = -std::numeric_limits<double>::infinity();
  }
  if (!tail_ok) {
    if (!notes.str().empty()) notes << "; ";
    notes << "profile decays faster than the curvature deficit (exponent " << have_exp
          << " vs " << need_exp << ")";
    slack = -std::numeric_limits<double>::infinity();
  }
  if (worst < -tol) {
    if (!notes.str().empty()) notes << "; ";
    notes << "curvature bound violated at r = " << r_worst;
  }

  VerificationReport rep = make_report("admissibility", slack, tol);
  rep.notes = notes.str();
  rep.constants["pointwise_worst_slack"] = worst;
  rep.constants["r_worst"] = r_worst;
  rep.constants["deficit_tail_exponent"] = need_exp;
  rep.constants["profile_tail_exponent"] = have_exp;
  rep.constants["profile_admissible"] = admissible ? 1.0 : 0.0;
  return rep;
}

}  // namespace becomp
