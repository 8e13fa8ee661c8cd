#pragma once

// Weighted volumes of concentric balls and spheres about the pole, the
// Bishop-Gromov quotient, the mean-curvature comparison for geodesic spheres,
// and the alpha-asymptotic volume ratio.

#include <iosfwd>
#include <span>
#include <vector>

#include "becomp/manifold.hpp"
#include "becomp/profiles.hpp"
#include "becomp/report.hpp"

namespace becomp {

// 2 pi^(n/2) / Gamma(n/2): area of the unit sphere S^{n-1}.
double unit_sphere_area(int n);

// omega_{n-1} w(r) phi(r)^{n-1}
double sphere_measure(const ModelManifold& m, double r);

// int_0^r sphere_measure. Error <= max(tol, 1e-14 |value|).
double ball_measure(const ModelManifold& m, double r, double tol);

struct RatioCurve {
  std::vector<double> radii;
  std::vector<double> ratio;         // ball / ((n+alpha) int_0^r h^{n+alpha-1})
  std::vector<double> sphere_ratio;  // sphere / h^{n+alpha-1}
  std::vector<double> ball;
  std::vector<double> h;
};

// Refuses (AdmissibilityError) unless admissibility_check passes on
// [0, radii.back()]. radii must be positive and strictly increasing.
RatioCurve bg_ratio_curve(const ModelManifold& m, double alpha, const DecayProfile& profile,
                          std::span<const double> radii, double tol);

// Largest relative increase of ratio and sphere_ratio between neighbours;
// FAIL when either exceeds rel_slack.
VerificationReport monotonicity_report(const RatioCurve& curve, double rel_slack = 1e-8);

// (n-1) phi'/phi + v' <= (n+alpha-1) h'/h + tol on a geometric grid of [1e-3, r_max].
VerificationReport mean_curvature_check(const ModelManifold& m, double alpha,
                                        const DecayProfile& profile, double r_max, double tol);

struct AvrResult {
  double estimate = 0.0;     // extrapolated limit
  double upper_bound = 0.0;  // ratio(r_max)
  double r_max = 0.0;
  double fit_exponent = 0.0;
  double fit_residual = 0.0;  // RMS residual of the tail fit, relative to the data scale
  RatioCurve curve;
};

// upper_bound is the Bishop-Gromov quotient at r_max. The estimate fits
// sphere_ratio ~ V + c1 x + c2 x^2 + c3 x^3, x = (r_max/(10 r))^q, on the last
// decade and reports V/(n+alpha), the limit of the quotient.
AvrResult avr(const ModelManifold& m, double alpha, const DecayProfile& profile, double r_max,
              double tol);

VerificationReport avr_report(const AvrResult& result, double tol);

// Columns r,ball_ratio,sphere_ratio.
void write_csv(const RatioCurve& curve, std::ostream& os);

}  // namespace becomp
