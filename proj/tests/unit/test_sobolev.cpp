#include <doctest.h>

#include <cmath>
#include <numbers>

#include "becomp/errors.hpp"
#include "becomp/sobolev.hpp"
#include "becomp/volume.hpp"
#include "fixtures.hpp"

using namespace becomp;
using std::numbers::pi;

namespace {

const std::vector<RadialDomain> kDomains = {RadialDomain::ball(0.5), RadialDomain::ball(2.0),
                                            RadialDomain::annulus(0.5, 2.0), RadialDomain::annulus(1.0, 4.0)};

const std::vector<RadialFunction> kFunctions = {RadialFunction::constant(1.0), RadialFunction::constant(3.0),
                                                RadialFunction::power_bump(1.0, 1.0),
                                                RadialFunction::poly(1.0, -0.5, 0.3)};

}  // namespace

TEST_CASE("radial functions") {
  const auto f = RadialFunction::power_bump(2.0, 1.5);
  for (double r : {0.0, 0.3, 2.0}) {
    const double h = 1e-5;
    CHECK(f.value(r) == doctest::Approx(2.0 * std::pow(1 + r * r, -1.5)));
    CHECK(f.deriv(r) == doctest::Approx((f.value(r + h) - f.value(r - h)) / (2 * h)).epsilon(1e-8));
    CHECK(f.second_deriv(r) == doctest::Approx((f.deriv(r + h) - f.deriv(r - h)) / (2 * h)).epsilon(1e-7));
  }
  const auto p = RadialFunction::poly(1.0, -1.0, 0.5);
  const auto roots = p.derivative_roots(0.0, 3.0);
  REQUIRE(roots.size() == 1);
  CHECK(roots[0] == doctest::Approx(1.0));
  CHECK(p.scaled(4.0).value(2.0) == doctest::Approx(4.0 * p.value(2.0)));

  CHECK_THROWS_AS(RadialFunction::poly(1.0, -1.0, 0.0).require_positive_on(RadialDomain::ball(2.0)), InputError);
  CHECK_NOTHROW(RadialFunction::poly(1.0, -1.0, 0.0).require_positive_on(RadialDomain::ball(0.5)));
  CHECK_THROWS_AS(RadialDomain::annulus(2.0, 1.0), InputError);
  CHECK_THROWS_AS(RadialDomain::ball(0.0), InputError);
}

TEST_CASE("lhs_terms closed forms") {
  const auto flat = ModelManifold::euclidean(3);
  const auto zero = DecayProfile::zero();
  const auto one = RadialFunction::constant(1.0);

  const auto t = lhs_terms(flat, RadialDomain::ball(1.0), one, 1.0, zero, 1e-12);
  CHECK(t.boundary == doctest::Approx(4 * pi).epsilon(1e-14));
  CHECK(t.gradient == 0.0);
  CHECK(t.b1term == 0.0);

  const auto a = lhs_terms(flat, RadialDomain::annulus(1.0, 2.0), one, 1.0, zero, 1e-12);
  CHECK(a.boundary == doctest::Approx(20 * pi).epsilon(1e-14));

  // int_0^1 r^2 2r/(1+r^2)^2 dr = log 2 - 1/2
  const auto g = lhs_terms(flat, RadialDomain::ball(1.0), RadialFunction::power_bump(1.0, 1.0), 1.0, zero, 1e-12);
  CHECK(g.gradient == doctest::Approx(4 * pi * (std::log(2.0) - 0.5)).epsilon(1e-11));

  // b1 term: 2 b1 (n+alpha-1) int f w with b1 = 1 and |B_1| = 4 pi / 3.
  const auto e = lhs_terms(flat, RadialDomain::ball(1.0), one, 1.0, DecayProfile::exponential(1, 1), 1e-12);
  CHECK(e.b1term == doctest::Approx(2 * 1 * 3 * 4 * pi / 3).epsilon(1e-8));
}

TEST_CASE("sobolev constant and rhs") {
  for (double alpha : {0.5, 1.0, 3.0}) {
    const double N = 3 + alpha;
    CHECK(sobolev_constant(3, alpha, 0.0, 0.0, 5.0) == 1.0);
    CHECK(sobolev_constant(3, alpha, 1.0, 1.0, 1.0) ==
          doctest::Approx(std::pow(2 / std::exp(3.0), (N - 1) / N)).epsilon(1e-14));
  }
  const auto flat = ModelManifold::euclidean(3);
  const auto f = RadialFunction::power_bump(1.0, 0.5);
  const auto dom = RadialDomain::ball(2.0);
  CHECK(rhs_value(flat, dom, f, 1.0, DecayProfile::zero(), 0.0, 1e-12) == 0.0);

  // Zero profile, constant density: rhs = N V^{1/N} (int f^{N/(N-1)} w)^{(N-1)/N}.
  const double alpha = 1.0, N = 4.0, V = 0.7;
  const double P = power_integral(flat, dom, f, alpha, 1e-13);
  CHECK(rhs_value(flat, dom, f, alpha, DecayProfile::zero(), V, 1e-13) ==
        doctest::Approx(N * std::pow(V, 1 / N) * std::pow(P, (N - 1) / N)).epsilon(1e-14));
}

TEST_CASE("verify_sobolev: flat ball is vacuous") {
  const auto flat = ModelManifold::euclidean(3);
  for (double alpha : {0.5, 1.0, 2.0}) {
    const auto r = verify_sobolev(flat, RadialDomain::ball(1.0), RadialFunction::constant(1.0), alpha,
                                  DecayProfile::zero());
    CHECK(r.vacuous);
    CHECK(r.sound_verdict == Verdict::Pass);
    CHECK(r.v_alpha_estimate == 0.0);
    CHECK(r.rhs_sharp == 0.0);
    CHECK(r.slack_sharp == doctest::Approx(4 * pi).epsilon(1e-12));
    CHECK(r.to_report("sobolev", 1e-8).verdict == Verdict::Vacuous);
  }
}

TEST_CASE("verify_sobolev: cone with constant density") {
  const ModelManifold cone(3, SmoothedConeWarp{0.6, 1.0}, ConstantDensity{1.0});
  const auto env = required_envelope(cone, 1.0, 1e3);
  const auto r = verify_sobolev(cone, RadialDomain::ball(2.0), RadialFunction::constant(1.0), 1.0, env);
  CHECK(r.sound_verdict == Verdict::Pass);
  CHECK(r.rhs_sound > 0.0);

  const auto env0 = required_envelope(cone, 1e-6, 1e3);
  const auto u = verify_sobolev(cone, RadialDomain::ball(2.0), RadialFunction::constant(1.0), 1e-6, env0);
  CHECK(u.sound_verdict == Verdict::Pass);
  CHECK_FALSE(u.vacuous);
  CHECK(u.rhs_sharp > 0.0);
}

TEST_CASE("verify_sobolev battery: sound, conservative, homogeneous") {
  int non_vacuous = 0;
  for (const auto& in : fixtures::sobolev_battery()) {
    const AvrResult v = avr(in.m, in.alpha, in.profile, 1e3, 1e-10);
    for (const auto& dom : kDomains) {
      for (const auto& f : kFunctions) {
        CAPTURE(in.name);
        CAPTURE(dom.describe());
        CAPTURE(f.describe());
        const auto r = verify_sobolev(in.m, dom, f, in.alpha, in.profile, v);
        CHECK(r.sound_verdict == Verdict::Pass);
        CHECK(r.rhs_sound >= r.rhs_sharp);
        if (r.sound_verdict == Verdict::Pass) CHECK(r.sharp_verdict == Verdict::Pass);
        if (!r.vacuous) ++non_vacuous;

        for (double kappa : {0.1, 10.0}) {
          const auto s = verify_sobolev(in.m, dom, f.scaled(kappa), in.alpha, in.profile, v);
          CHECK(s.lhs.total() == doctest::Approx(kappa * r.lhs.total()).epsilon(1e-10));
          CHECK(s.rhs_sound == doctest::Approx(kappa * r.rhs_sound).epsilon(1e-10));
          CHECK(s.rhs_sharp == doctest::Approx(kappa * r.rhs_sharp).epsilon(1e-10));
          CHECK(s.sound_verdict == r.sound_verdict);
          const double a = r.slack / std::max(r.lhs.total(), r.rhs_sound);
          const double b = s.slack / std::max(s.lhs.total(), s.rhs_sound);
          CHECK(b == doctest::Approx(a).epsilon(1e-9));
        }
      }
    }
  }
  CHECK(non_vacuous >= 3);
}

TEST_CASE("constant factor is nonincreasing in r0") {
  const auto nm = fixtures::cone_logpoly_battery()[0];
  const auto env = required_envelope(nm.m, nm.alpha, 1e3);
  const AvrResult v = avr(nm.m, nm.alpha, env, 1e3, 1e-10);
  double prev = std::numeric_limits<double>::infinity();
  for (double R : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    const auto r = verify_sobolev(nm.m, RadialDomain::ball(R), RadialFunction::constant(1.0), nm.alpha, env, v);
    CHECK(r.constant_factor <= prev);
    prev = r.constant_factor;
    const auto a = verify_sobolev(nm.m, RadialDomain::annulus(R / 2, R), RadialFunction::constant(1.0), nm.alpha,
                                  env, v);
    CHECK(a.constant_factor == doctest::Approx(r.constant_factor).epsilon(1e-15));
  }
}

TEST_CASE("isoperimetric verdict matches the constant-function Sobolev verdict") {
  for (const auto& in : fixtures::sobolev_battery()) {
    const AvrResult v = avr(in.m, in.alpha, in.profile, 1e3, 1e-10);
    for (const auto& dom : kDomains) {
      CAPTURE(in.name);
      CAPTURE(dom.describe());
      const auto iso = verify_isoperimetric(in.m, dom, in.alpha, in.profile, v);
      const auto sob = verify_sobolev(in.m, dom, RadialFunction::constant(1.0), in.alpha, in.profile, v);
      CHECK(iso.sound_verdict == sob.sound_verdict);
      CHECK(iso.sharp_verdict == sob.sharp_verdict);
      // Vacuity may differ: moving the b1 term right can make the isoperimetric bracket nonpositive.
      CHECK(iso.to_report("isoperimetric", 1e-8).passed() == sob.to_report("sobolev", 1e-8).passed());
    }
  }
}

TEST_CASE("isoperimetric: flat ball and large b1") {
  const auto flat = ModelManifold::euclidean(3);
  const auto r = verify_isoperimetric(flat, RadialDomain::ball(1.0), 1.0, DecayProfile::zero());
  CHECK(r.sound_verdict == Verdict::Pass);
  CHECK(r.rhs_sharp == 0.0);
  CHECK(r.lhs.boundary == doctest::Approx(4 * pi).epsilon(1e-14));

  const auto big = verify_isoperimetric(flat, RadialDomain::ball(1.0), 1.0, DecayProfile::exponential(50.0, 1.0));
  CHECK(big.sound_verdict == Verdict::Pass);
  CHECK(big.vacuous);
}
