#pragma once

// Comparison ODEs: the model solution h'' = lambda h, the pair psi_1, psi_2
// driven by the curvature bound along a transport geodesic, and numerical
// checks of the Riccati comparison and the bounds derived from it.

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "becomp/curve.hpp"
#include "becomp/profiles.hpp"
#include "becomp/report.hpp"

namespace becomp {

struct ComparisonSolution {
  ScalarCurve h;
  double hprime_limit_lower = 1.0;  // 1 + b0
  double hprime_limit_upper = 1.0;  // 1 + b0 e^{b0}
  double hprime_at_end = 1.0;
  // 1 + int_0^{t_max} h lambda, which must equal h'(t_max).
  double hprime_identity = 1.0;
  double b0 = 0.0;
};

// Uniform grid with grid_points nodes on [0, t_max].
std::vector<double> uniform_grid(double t_max, std::size_t grid_points);

ComparisonSolution solve_h(const DecayProfile& profile, double t_max, double tol,
                           std::size_t grid_points = 1001);
// Output on a caller grid (must start at 0).
ComparisonSolution solve_h(const DecayProfile& profile, std::span<const double> grid,
                           double tol);
// ODE-only variant for arbitrary nonnegative coefficients. The limit fields
// are +inf since no moments are available.
ComparisonSolution solve_h(const ScalarFunction& lambda, std::span<const double> grid,
                           double tol);

struct PsiPair {
  ScalarCurve psi1;  // psi1(0)=0, psi1'(0)=1
  ScalarCurve psi2;  // psi2(0)=1, psi2'(0)=0
  double coefficient_integral = 0.0;         // int_0^r Lambda
  double coefficient_first_moment = 0.0;     // int_0^r t Lambda
  // max |psi2' psi1 - psi2 psi1' + 1| over the grid.
  double wronskian_defect() const;
};

PsiPair solve_psi_pair(const ScalarFunction& coefficient, double r, double tol,
                       std::size_t grid_points = 1001);
PsiPair solve_psi_pair(const ScalarFunction& coefficient, std::span<const double> grid,
                       double tol);

// Compares g (given with g' in derivs) to psi'/psi where psi'' = G psi,
// psi(0) = 0, psi'(0) = initial_slope. Verifies the hypotheses g' + g^2 <= G
// and g ~ beta/t first and throws HypothesisError when they fail. The report
// passes when g - psi'/psi <= tol on every grid point of (0, r].
VerificationReport riccati_compare(const ScalarCurve& g, const ScalarFunction& G, double beta,
                                   double r, double tol, double initial_slope = 1.0);

// psi2(r)/psi1(r) <= coefficient_total + 1/r.
VerificationReport psi_ratio_bound_check(const ScalarFunction& coefficient,
                                         double coefficient_total, double r, double tol);

// psi1(t) <= t exp(moment_bound) on [0, t_max]; slack is relative.
VerificationReport psi1_growth_check(const ScalarFunction& coefficient, double t_max,
                                     double moment_bound, double tol);

// Structural checks of a ComparisonSolution: initial data, t <= h <= t e^{b0},
// h' nondecreasing, h'(end) within the limit bounds, and the integral identity.
VerificationReport comparison_invariants_report(const ComparisonSolution& sol, double tol);

}  // namespace becomp
