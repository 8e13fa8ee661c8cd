#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "becomp/errors.hpp"
#include "becomp/odecmp.hpp"
#include "becomp/volume.hpp"
#include "fixtures.hpp"

using namespace becomp;
using std::numbers::pi;

namespace {

std::vector<double> geometric(double lo, double hi, std::size_t count) {
  std::vector<double> r(count);
  for (std::size_t i = 0; i < count; ++i) {
    r[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return r;
}

}  // namespace

TEST_CASE("unit sphere areas") {
  CHECK(unit_sphere_area(2) == doctest::Approx(2 * pi).epsilon(1e-15));
  CHECK(unit_sphere_area(3) == doctest::Approx(4 * pi).epsilon(1e-15));
  CHECK(unit_sphere_area(4) == doctest::Approx(2 * pi * pi).epsilon(1e-15));
  for (int n = 2; n <= 9; ++n) CHECK(unit_sphere_area(n) == doctest::Approx(oracle::unit_sphere_area(n)));
}

TEST_CASE("sphere and ball measures") {
  CHECK(sphere_measure(ModelManifold::euclidean(3), 1.0) == doctest::Approx(4 * pi).epsilon(1e-15));
  CHECK(sphere_measure(ModelManifold::euclidean(2), 2.0) == doctest::Approx(4 * pi).epsilon(1e-15));
  for (double beta : {-1.0, 0.5, 2.0}) {
    const ModelManifold m(3, EuclideanWarp{}, LogPolyDensity{beta, 1.0});
    CHECK(sphere_measure(m, 1.0) == doctest::Approx(4 * pi * std::pow(2.0, beta / 2)).epsilon(1e-14));
  }
  CHECK(ball_measure(ModelManifold::euclidean(3), 1.0, 1e-12) == doctest::Approx(4 * pi / 3).epsilon(1e-12));
  CHECK(ball_measure(ModelManifold::euclidean(2), 1.0, 1e-12) == doctest::Approx(pi).epsilon(1e-12));
  CHECK_THROWS_AS(ball_measure(ModelManifold::euclidean(3), -1.0, 1e-12), InputError);
}

TEST_CASE("ball_measure is monotone and differentiates to sphere_measure") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.05, 20.0);
  const ModelManifold m(3, SmoothedConeWarp{0.6, 1.0}, LogPolyDensity{1.0, 1.0});
  for (int k = 0; k < 30; ++k) {
    double a = U(rng), b = U(rng);
    if (a > b) std::swap(a, b);
    CHECK(ball_measure(m, b, 1e-12) > ball_measure(m, a, 1e-12));

    const double r = U(rng);
    const double h = 1e-3 * r;
    auto B = [&](double x) { return ball_measure(m, x, 1e-13); };
    const double d = (B(r - 2 * h) - 8 * B(r - h) + 8 * B(r + h) - B(r + 2 * h)) / (12 * h);
    CHECK(d == doctest::Approx(sphere_measure(m, r)).epsilon(1e-7));
  }
}

TEST_CASE("bg_ratio_curve: flat closed form") {
  const auto radii = geometric(0.01, 100.0, 300);
  const auto c = bg_ratio_curve(ModelManifold::euclidean(3), 1.0, DecayProfile::zero(), radii, 1e-10);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    CHECK(c.ratio[i] == doctest::Approx(4 * pi / (3 * r)).epsilon(1e-6));
    CHECK(c.sphere_ratio[i] == doctest::Approx(4 * pi / r).epsilon(1e-6));
    if (i > 0) CHECK(c.ratio[i] < c.ratio[i - 1]);
  }
  CHECK(monotonicity_report(c).verdict == Verdict::Pass);
}

TEST_CASE("bg_ratio_curve refuses profiles that do not bound the curvature") {
  const ModelManifold m(3, SmoothedConeWarp{0.6, 1.0}, LogPolyDensity{1.0, 1.0});
  const auto radii = geometric(0.1, 10.0, 20);
  CHECK_THROWS_AS(bg_ratio_curve(m, 1.0, DecayProfile::zero(), radii, 1e-10), AdmissibilityError);
}

TEST_CASE("Bishop-Gromov monotonicity on admissible configurations") {
  const double r_max = 1e3;
  const auto radii = geometric(1e-2, r_max, 400);
  for (const auto& c : fixtures::volume_battery(r_max)) {
    CAPTURE(c.name);
    const auto curve = bg_ratio_curve(c.m, c.alpha, c.profile, radii, 1e-10);
    const auto rep = monotonicity_report(curve, 1e-8);
    CHECK(rep.verdict == Verdict::Pass);
    // Both quotients are checked independently.
    CHECK(rep.constants.at("sphere_ratio_worst_rel_slack") >= -1e-8);
    CHECK(rep.constants.at("ball_ratio_worst_rel_slack") >= -1e-8);
  }
}

TEST_CASE("mean-curvature comparison") {
  CHECK(mean_curvature_check(ModelManifold::euclidean(3), 1.0, DecayProfile::zero(), 100.0, 1e-8).verdict ==
        Verdict::Pass);
  for (const auto& c : fixtures::volume_battery(1e3)) {
    CAPTURE(c.name);
    CHECK(mean_curvature_check(c.m, c.alpha, c.profile, 1e3, 1e-8).verdict == Verdict::Pass);
  }
  // Density growth r^2 exceeds what alpha = 1 allows without a decay profile.
  const ModelManifold lp(3, EuclideanWarp{}, LogPolyDensity{2.0, 1.0});
  CHECK(mean_curvature_check(lp, 1.0, DecayProfile::zero(), 100.0, 1e-8).verdict == Verdict::Fail);
}

TEST_CASE("avr: flat space") {
  const auto a = avr(ModelManifold::euclidean(3), 1.0, DecayProfile::zero(), 1e4, 1e-10);
  CHECK(a.estimate >= 0.0);
  CHECK(a.estimate <= 1e-3);
  CHECK(a.upper_bound == doctest::Approx(4 * pi / (3 * 1e4)).epsilon(1e-6));
  CHECK(avr_report(a, 1e-8).verdict == Verdict::Pass);

  const auto u = avr(ModelManifold::euclidean(3), 1e-6, DecayProfile::zero(), 1e4, 1e-10);
  CHECK(u.estimate == doctest::Approx(4 * pi / 3).epsilon(1e-2));
}

TEST_CASE("avr: cone with constant density") {
  const double alpha = 1e-6;
  const ModelManifold cone(3, SmoothedConeWarp{0.6, 1.0}, ConstantDensity{1.0});
  const auto env = required_envelope(cone, alpha, 1e4);
  const auto a3 = avr(cone, alpha, env, 1e3, 1e-10);
  const auto a4 = avr(cone, alpha, env, 1e4, 1e-10);
  CHECK(a3.estimate > 0.0);
  CHECK(std::abs(a3.estimate - a4.estimate) <= 0.01 * a4.estimate);
  CHECK(a4.upper_bound <= a3.upper_bound);

  const auto one = bg_ratio_curve(cone, alpha, env, std::vector<double>{1.0}, 1e-10);
  CHECK(a4.estimate < one.ratio[0]);

  // Direct quadrature of the quotient at large radii, with h from the ODE.
  const int n = 3;
  const double N = n + alpha;
  for (double R : {1e3, 1e4}) {
    const auto h = solve_h(env, R, 1e-12, 20001);
    double integral = 0.0;  // trapezoid with end corrections is enough at 1%
    for (std::size_t i = 1; i < h.h.size(); ++i) {
      const double dt = h.h.grid[i] - h.h.grid[i - 1];
      integral += 0.5 * dt * (std::pow(h.h.values[i], N - 1) + std::pow(h.h.values[i - 1], N - 1));
    }
    const double q = ball_measure(cone, R, 1e-10) / (N * integral);
    CHECK(std::abs(q - a4.estimate) <= 0.01 * a4.estimate);
  }
}

TEST_CASE("avr: weighted cones have a positive ratio") {
  for (const auto& nm : fixtures::cone_logpoly_battery()) {
    CAPTURE(nm.name);
    const auto env3 = required_envelope(nm.m, nm.alpha, 1e3);
    const auto env4 = required_envelope(nm.m, nm.alpha, 1e4);
    const auto a3 = avr(nm.m, nm.alpha, env3, 1e3, 1e-10);
    const auto a4 = avr(nm.m, nm.alpha, env4, 1e4, 1e-10);
    CHECK(a3.estimate > 0.0);
    CHECK(a3.estimate <= a3.upper_bound);
    CHECK(std::abs(a3.estimate - a4.estimate) <= 0.01 * a4.estimate);
  }
}

TEST_CASE("avr upper bound is antitone in r_max") {
  const ModelManifold m(3, SmoothedConeWarp{0.6, 1.0}, LogPolyDensity{1.0, 1.0});
  const auto env = required_envelope(m, 1.0, 1e4);
  double prev = std::numeric_limits<double>::infinity();
  for (double r_max : {100.0, 1e3, 3e3, 1e4}) {
    const auto a = avr(m, 1.0, env, r_max, 1e-10);
    CHECK(a.upper_bound <= prev);
    prev = a.upper_bound;
  }
}
