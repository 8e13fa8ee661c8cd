#pragma once

// Randomized and named test data shared by the unit and acceptance tests.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "becomp/curve.hpp"
#include "becomp/manifold.hpp"
#include "becomp/profiles.hpp"
#include "oracles.hpp"

namespace fixtures {

using namespace becomp;

inline DecayProfile random_admissible_profile(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> amp(0.05, 2.0);
  std::uniform_int_distribution<int> fam(0, 2);
  switch (fam(rng)) {
    case 0:
      return DecayProfile::exponential(amp(rng), std::uniform_real_distribution<double>(0.3, 3.0)(rng));
    case 1:
      return DecayProfile::power_law(amp(rng), std::uniform_real_distribution<double>(0.2, 3.0)(rng),
                                     std::uniform_real_distribution<double>(2.2, 5.0)(rng));
    default:
      return DecayProfile::linear_bump(amp(rng), std::uniform_real_distribution<double>(0.5, 5.0)(rng));
  }
}

// A smooth nonnegative coefficient a e^{-b t} + c / (1 + t)^2.
struct Coefficient {
  double a, b, c;
  double operator()(double t) const { return a * std::exp(-b * t) + c / ((1 + t) * (1 + t)); }
};

inline Coefficient random_coefficient(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(0.0, 1.5);
  return {U(rng), 0.2 + U(rng), U(rng)};
}

// g = psi'/psi for psi'' = G psi, psi(0) = 0, psi'(0) = 1, from the
// fixed-step oracle; g' = G - g^2 holds exactly on the samples. g(0) is
// stored as 0 and never compared.
inline ScalarCurve riccati_curve(const Coefficient& G, double r, std::size_t steps) {
  const auto states = oracle::rk4<2>(
      [&G](double t, const std::array<double, 2>& y) { return std::array<double, 2>{y[1], G(t) * y[0]}; },
      {0.0, 1.0}, 0.0, r, steps);
  ScalarCurve g;
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = r * static_cast<double>(k) / static_cast<double>(steps);
    g.grid.push_back(t);
    if (k == 0) {
      g.values.push_back(0.0);
      g.derivs.push_back(0.0);
      continue;
    }
    const double v = states[k][1] / states[k][0];
    g.values.push_back(v);
    g.derivs.push_back(G(t) - v * v);
  }
  return g;
}

struct NamedManifold {
  std::string name;
  ModelManifold m;
  double alpha;
};

// Configurations with a nontrivial envelope and a positive alpha-asymptotic
// volume ratio: a cone end with density growth r^beta, beta = alpha.
inline std::vector<NamedManifold> cone_logpoly_battery() {
  return {
      {"cone(0.6,1)+logpoly(1,1) n=3 a=1", ModelManifold(3, SmoothedConeWarp{0.6, 1.0}, LogPolyDensity{1.0, 1.0}), 1.0},
      {"cone(0.5,1)+logpoly(0.5,1) n=3 a=0.5", ModelManifold(3, SmoothedConeWarp{0.5, 1.0}, LogPolyDensity{0.5, 1.0}), 0.5},
      {"cone(0.5,2)+logpoly(2,1) n=4 a=2", ModelManifold(4, SmoothedConeWarp{0.5, 2.0}, LogPolyDensity{2.0, 1.0}), 2.0},
  };
}

struct Config {
  std::string name;
  ModelManifold m;
  double alpha;
  DecayProfile profile;
};

// Admissible configurations for the volume comparison; cone ends use the
// curvature envelope on [0, r_max].
inline std::vector<Config> volume_battery(double r_max) {
  std::vector<Config> out;
  out.push_back({"flat", ModelManifold::euclidean(3), 1.0, DecayProfile::zero()});
  out.push_back({"flat, exponential profile", ModelManifold::euclidean(4), 0.5, DecayProfile::exponential(0.5, 1.0)});
  const ModelManifold c1(3, SmoothedConeWarp{0.6, 1.0}, ConstantDensity{1.0});
  const ModelManifold c2(4, SmoothedConeWarp{0.3, 2.0}, ConstantDensity{1.0});
  out.push_back({"cone(0.6,1) auto", c1, 1.0, required_envelope(c1, 1.0, r_max)});
  out.push_back({"cone(0.3,2) auto", c2, 2.0, required_envelope(c2, 2.0, r_max)});
  for (const auto& nm : cone_logpoly_battery()) {
    out.push_back({nm.name + " auto", nm.m, nm.alpha, required_envelope(nm.m, nm.alpha, r_max)});
  }
  return out;
}

// Admissible configurations for the Sobolev battery.
inline std::vector<Config> sobolev_battery() {
  std::vector<Config> out;
  out.push_back({"flat a=1", ModelManifold::euclidean(3), 1.0, DecayProfile::zero()});
  out.push_back({"flat exp a=0.5", ModelManifold::euclidean(3), 0.5, DecayProfile::exponential(0.2, 1.0)});
  const ModelManifold cone(3, SmoothedConeWarp{0.6, 1.0}, ConstantDensity{1.0});
  out.push_back({"cone const a=1e-6", cone, 1e-6, required_envelope(cone, 1e-6, 1e3)});
  out.push_back({"cone const a=1", cone, 1.0, required_envelope(cone, 1.0, 1e3)});
  for (const auto& nm : cone_logpoly_battery()) {
    out.push_back({nm.name, nm.m, nm.alpha, required_envelope(nm.m, nm.alpha, 1e3)});
  }
  return out;
}

}  // namespace fixtures
