#pragma once

// Curvature decay profiles: the nonincreasing function lambda that bounds the
// weighted Ricci curvature from below by -(n+alpha-1) lambda(d(o, .)), and
// its moments b0 = int s lambda(s) ds and b1 = int lambda(s) ds.

#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "becomp/curve.hpp"

namespace becomp {

struct ZeroProfile {};

// lambda0 * exp(-a s)
struct ExponentialProfile {
  double lambda0 = 1.0;
  double a = 1.0;
};

// lambda0 * (1 + s/s0)^(-p)
struct PowerLawProfile {
  double lambda0 = 1.0;
  double s0 = 1.0;
  double p = 3.0;
};

// lambda0 * max(0, 1 - s/s1)
struct LinearBumpProfile {
  double lambda0 = 1.0;
  double s1 = 1.0;
};

// Piecewise linear on grid, power-law tail values.back() * (s/grid.back())^-p
// beyond it. tail_exponent is +inf when the tail is identically zero.
struct SampledProfile {
  std::vector<double> grid;
  std::vector<double> values;
  double tail_exponent = std::numeric_limits<double>::infinity();
};

class DecayProfile {
 public:
  using Family = std::variant<ZeroProfile, ExponentialProfile, PowerLawProfile,
                              LinearBumpProfile, SampledProfile>;

  DecayProfile() = default;

  static DecayProfile zero();
  static DecayProfile exponential(double lambda0, double a);
  static DecayProfile power_law(double lambda0, double s0, double p);
  static DecayProfile linear_bump(double lambda0, double s1);
  // Rejects non-monotone or negative samples. The tail exponent is fitted by
  // least squares in log-log coordinates over the last decade of the grid.
  static DecayProfile sampled(std::vector<double> grid, std::vector<double> values);

  const Family& family() const { return family_; }
  std::string family_name() const;

  double operator()(double s) const;
  bool is_zero() const;
  // b0 < infinity.
  bool admissible() const;
  // Empty when admissible; otherwise names the divergent moment(s).
  std::string divergence_reason() const;
  // Points where lambda is not differentiable.
  std::vector<double> breakpoints() const;
  // c * lambda (c >= 0).
  DecayProfile scaled(double c) const;

 private:
  explicit DecayProfile(Family f) : family_(std::move(f)) {}
  Family family_ = ZeroProfile{};
};

// lambda(s); s must be nonnegative.
double eval_lambda(const DecayProfile& profile, double s);

struct Moments {
  double b0 = 0.0;
  double b1 = 0.0;
  double abs_error_bound = 0.0;
};

// Throws AdmissibilityError when b0 diverges and IntegrationError when the
// quadrature cannot meet tol.
Moments moments(const DecayProfile& profile, double tol = 1e-10);

// t -> ((n+alpha-1)/(n+alpha)) speed^2 lambda(|d_ox - t speed|): the bound on
// the curvature seen along a transport geodesic of speed |Du| starting at
// distance d_ox from the base point.
ScalarFunction shifted_profile(const DecayProfile& profile, double d_ox, double speed, int n,
                               double alpha);

}  // namespace becomp
