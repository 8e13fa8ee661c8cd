#pragma once

// Radial form of the ABP argument: scaling normalization of f, the Neumann
// problem
//   div(w f Du) = (n+alpha) w f^{(n+alpha)/(n+alpha-1)} - w|Df| - 2(n+alpha-1) b1 w f  in Omega,
//   <Du, nu> = 1                                                               on dOmega,
// solved through its first integral on balls centred at the pole, the
// pointwise Hessian bound on U = {|Du| < 1}, and the Jacobian of the
// transport map x -> exp_x(r Du(x)) along radial geodesics.

#include <iosfwd>
#include <vector>

#include "becomp/curve.hpp"
#include "becomp/manifold.hpp"
#include "becomp/profiles.hpp"
#include "becomp/report.hpp"
#include "becomp/sobolev.hpp"

namespace becomp {

// kappa with lhs(kappa f) = (n+alpha) int_Omega w (kappa f)^{(n+alpha)/(n+alpha-1)}.
double normalize_f(const ModelManifold& m, const RadialDomain& domain, const RadialFunction& f,
                   double alpha, const DecayProfile& profile, double tol);

struct NeumannOptions {
  std::size_t grid_points = 2001;
  double tol = 1e-13;  // per-cell quadrature tolerance
  bool enforce_compatibility = true;
  double compatibility_tol = 1e-6;
};

struct NeumannSolution {
  double R = 1.0;
  double b1 = 0.0;
  ScalarCurve u;            // values u, derivs u'
  std::vector<double> ddu;  // u'' from the differentiated first integral
  double flux_residual = 0.0;  // |u'(R) - 1|
};

// Uniform grid on [0, R]. Throws InputError for annuli and CompatibilityError
// when f is not normalized (unless enforce_compatibility is off).
NeumannSolution solve_neumann_radial(const ModelManifold& m, const RadialDomain& domain,
                                     const RadialFunction& f, double alpha,
                                     const DecayProfile& profile, const NeumannOptions& opt = {});

// Right-hand side density S = (n+alpha) w f^q - w|f'| - 2(n+alpha-1) b1 w f.
double neumann_source(const ModelManifold& m, const RadialFunction& f, double alpha, double b1,
                      double r);

// Sup norm of d/dr[phi^{n-1} w f u'] - S phi^{n-1}, derivative by five-point
// differences of the solved flux.
double first_integral_residual(const NeumannSolution& sol, const ModelManifold& m,
                               const RadialFunction& f, double alpha);

// w(u'' + (n-1)(phi'/phi) u') + w v' u' + 2(n+alpha-1) b1 w <= (n+alpha) w f^{1/(n+alpha-1)}
// on grid points with |u'| < 1.
VerificationReport lemma31_check(const NeumannSolution& sol, const ModelManifold& m,
                                 const RadialFunction& f, double alpha, double tol);

struct TransportDiagnostics {
  double r_param = 0.0;
  std::vector<double> source_radii;
  std::vector<double> image_radii;
  std::vector<double> jacobian;
  std::vector<double> bound_rhs;  // right side of the bound on w(image) jacobian
  std::vector<bool> valid_mask;
  std::size_t violations = 0;
  double worst_slack = 0.0;
  VerificationReport report;
};

// A source radius s is valid when |u'(s)| < 1, s < R, 1 + r min(u''(s), 0) > 0
// and s + r u'(s) > 0. At valid points checks
//   w(image) jacobian <= w(s) (1 + r f^{1/(n+alpha-1)})^{n+alpha} e^{(n+alpha-1)(2 R b1 + b0)} + tol.
// Violations are FAIL only for the flat closed-form case (Euclidean warp,
// constant density, zero profile, constant f); otherwise the report is INFO.
TransportDiagnostics transport_diagnostics(const NeumannSolution& sol, const ModelManifold& m,
                                           const RadialFunction& f, double alpha,
                                           const DecayProfile& profile, double r_param,
                                           double tol);

// Columns r,u,du,ddu.
void write_csv(const NeumannSolution& sol, std::ostream& os);
// Columns s,image,jacobian,bound,valid.
void write_csv(const TransportDiagnostics& diag, std::ostream& os);

}  // namespace becomp
