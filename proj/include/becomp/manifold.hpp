#pragma once

// Rotationally symmetric weighted model manifolds
//   g = dr^2 + phi(r)^2 g_{S^{n-1}},   measure w(r) dvol_g,
// with a pole at r = 0, and their Bakry-Emery Ricci curvature
//   Ric_alpha^w = Ric - D^2 log w - (1/alpha) d log w (x) d log w.

#include <cstddef>
#include <variant>
#include <vector>

#include "becomp/profiles.hpp"
#include "becomp/report.hpp"

namespace becomp {

// phi(r) = r
struct EuclideanWarp {};
// phi(r) = c r + (1 - c) r_s tanh(r / r_s), 0 < c <= 1.
struct SmoothedConeWarp {
  double c = 1.0;
  double r_s = 1.0;
};
using Warp = std::variant<EuclideanWarp, SmoothedConeWarp>;

struct ConstantDensity {
  double w0 = 1.0;
};
// w = (1 + (r/r_w)^2)^(beta/2)
struct LogPolyDensity {
  double beta = 0.0;
  double r_w = 1.0;
};
// w = exp(beta tanh(r/r_w)); not smooth at the pole (w'(0) != 0).
struct LogTanhExpDensity {
  double beta = 0.0;
  double r_w = 1.0;
};
using Density = std::variant<ConstantDensity, LogPolyDensity, LogTanhExpDensity>;

class ModelManifold {
 public:
  // Throws InputError for n < 2, bad family parameters, or a density with
  // w'(0) != 0 unless allow_pole_singularity is set.
  ModelManifold(int n, Warp warp, Density density, bool allow_pole_singularity = false);

  static ModelManifold euclidean(int n) { return {n, EuclideanWarp{}, ConstantDensity{1.0}}; }

  int dim() const { return n_; }
  const Warp& warp() const { return warp_; }
  const Density& density() const { return density_; }
  bool allows_pole_singularity() const { return allow_pole_singularity_; }
  bool smooth_at_pole() const;

 private:
  int n_;
  Warp warp_;
  Density density_;
  bool allow_pole_singularity_;
};

struct WarpJet {
  double phi = 0.0;
  double dphi = 1.0;
  double ddphi = 0.0;
  double dddphi = 0.0;
  double one_minus_dphi = 0.0;  // 1 - phi', without cancellation
};

struct LogDensityJet {
  double v = 0.0;  // log w
  double dv = 0.0;
  double ddv = 0.0;
};

WarpJet warp_derivs(const ModelManifold& m, double r);
LogDensityJet log_density_derivs(const ModelManifold& m, double r);
double density(const ModelManifold& m, double r);

struct BEData {
  double r = 0.0;
  double radial_eigen = 0.0;      // Ric_alpha^w(d_r, d_r)
  double tangential_eigen = 0.0;  // Ric_alpha^w(e, e), e unit and tangent to S_r
  double min_eigen() const { return radial_eigen < tangential_eigen ? radial_eigen : tangential_eigen; }
};

// r >= 0; r = 0 uses the limit values at the pole.
BEData be_ricci(const ModelManifold& m, double alpha, double r);

// max(0, -min eigenvalue / (n + alpha - 1)): the smallest admissible lambda at r.
double curvature_deficit(const ModelManifold& m, double alpha, double r);

// Stretched grid on [0, r_max]: fine near the pole, geometric far out.
std::vector<double> envelope_grid(double r_max, std::size_t points);

// The least nonincreasing majorant of the pointwise curvature deficit on
// [0, r_max], with a fitted power-law tail. Returns the zero profile when the
// deficit vanishes identically; the result may be non-admissible (tail
// exponent <= 2), which callers detect through DecayProfile::admissible().
DecayProfile required_envelope(const ModelManifold& m, double alpha, double r_max,
                               std::size_t grid_size = 2000);

// Checks min eigenvalue >= -(n+alpha-1) lambda - tol on a dense grid of
// (0, r_max], compares the asymptotic decay rates of the deficit and lambda,
// and requires the profile to be admissible.
VerificationReport admissibility_check(const ModelManifold& m, double alpha,
                                       const DecayProfile& profile, double r_max, double tol);

}  // namespace becomp
