#include <doctest.h>

#include <cmath>
#include <random>

#include "becomp/errors.hpp"
#include "becomp/profiles.hpp"

using namespace becomp;

namespace {

std::vector<DecayProfile> families() {
  return {DecayProfile::zero(),
          DecayProfile::exponential(1.0, 1.0),
          DecayProfile::exponential(0.3, 2.5),
          DecayProfile::power_law(2.0, 1.0, 3.0),
          DecayProfile::power_law(0.5, 0.2, 2.5),
          DecayProfile::linear_bump(0.7, 3.0),
          DecayProfile::sampled({0.0, 1.0, 2.0, 10.0}, {1.0, 0.5, 0.5, 0.0})};
}

}  // namespace

TEST_CASE("eval_lambda closed forms") {
  CHECK(eval_lambda(DecayProfile::zero(), 3.7) == 0.0);
  CHECK(eval_lambda(DecayProfile::exponential(1, 1), 0.0) == 1.0);
  CHECK(eval_lambda(DecayProfile::power_law(2, 1, 3), 1.0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(eval_lambda(DecayProfile::linear_bump(2, 4), 1.0) == doctest::Approx(1.5));
  CHECK(eval_lambda(DecayProfile::linear_bump(2, 4), 5.0) == 0.0);
  CHECK_THROWS_AS(eval_lambda(DecayProfile::zero(), -1.0), InputError);
}

TEST_CASE("moments match closed forms") {
  const Moments z = moments(DecayProfile::zero());
  CHECK(z.b0 == 0.0);
  CHECK(z.b1 == 0.0);

  const Moments e = moments(DecayProfile::exponential(1, 1), 1e-10);
  CHECK(std::abs(e.b0 - 1.0) <= 1e-8);
  CHECK(std::abs(e.b1 - 1.0) <= 1e-8);

  for (double l0 : {0.5, 1.0, 3.0}) {
    const Moments p = moments(DecayProfile::power_law(l0, 1, 3), 1e-10);
    CHECK(std::abs(p.b0 - l0 / 2) <= 1e-8);
    CHECK(std::abs(p.b1 - l0 / 2) <= 1e-8);
  }

  // lambda0 s1 / 2 and lambda0 s1^2 / 6 for the bump.
  const Moments b = moments(DecayProfile::linear_bump(0.7, 3.0), 1e-12);
  CHECK(b.b1 == doctest::Approx(0.7 * 3.0 / 2).epsilon(1e-10));
  CHECK(b.b0 == doctest::Approx(0.7 * 9.0 / 6).epsilon(1e-10));

  // lambda0 e^{-a s}: b1 = lambda0/a, b0 = lambda0/a^2.
  const Moments ea = moments(DecayProfile::exponential(0.3, 2.5), 1e-12);
  CHECK(ea.b1 == doctest::Approx(0.3 / 2.5).epsilon(1e-10));
  CHECK(ea.b0 == doctest::Approx(0.3 / 6.25).epsilon(1e-10));
}

TEST_CASE("sampled moments integrate the interpolant and the tail exactly") {
  // Exactly linear samples, identically zero tail.
  const auto p = DecayProfile::sampled({0.0, 1.0, 2.0}, {2.0, 1.0, 0.0});
  const Moments m = moments(p);
  CHECK(m.b1 == doctest::Approx(2.0).epsilon(1e-14));
  // int_0^2 s (2 - s) ds = 4 - 8/3
  CHECK(m.b0 == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("profiles are nonincreasing") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 30.0);
  for (const auto& p : families()) {
    for (int k = 0; k < 500; ++k) {
      double s = U(rng), t = U(rng);
      if (s > t) std::swap(s, t);
      CHECK(eval_lambda(p, s) >= eval_lambda(p, t));
    }
  }
}

TEST_CASE("moments scale linearly with the amplitude") {
  const double tol = 1e-10;
  for (const auto& p : families()) {
    const Moments base = moments(p, tol);
    for (double c : {0.1, 2.0, 7.5}) {
      const Moments sc = moments(p.scaled(c), tol);
      CHECK(std::abs(sc.b0 - c * base.b0) <= 2 * tol * std::max(1.0, c));
      CHECK(std::abs(sc.b1 - c * base.b1) <= 2 * tol * std::max(1.0, c));
    }
  }
}

TEST_CASE("power-law admissibility flips at p = 2") {
  CHECK_FALSE(DecayProfile::power_law(1, 1, 2.0).admissible());
  CHECK(DecayProfile::power_law(1, 1, 2.0 + 1e-9).admissible());
  CHECK(DecayProfile::power_law(1, 1, 2.001).admissible());
  CHECK_FALSE(DecayProfile::power_law(1, 1, 1.5).admissible());
  try {
    moments(DecayProfile::power_law(1, 1, 2.0));
    FAIL("expected AdmissibilityError");
  } catch (const AdmissibilityError& e) {
    CHECK(std::string(e.what()).find("b0") != std::string::npos);
  }
}

TEST_CASE("sampled construction rejects bad input") {
  CHECK_THROWS_AS(DecayProfile::sampled({0, 1, 2}, {1.0, 1.5, 0.5}), InputError);
  CHECK_THROWS_AS(DecayProfile::sampled({0, 1, 2}, {1.0, -0.5, -1.0}), InputError);
  CHECK_THROWS_AS(DecayProfile::sampled({0, 2, 1}, {1.0, 0.5, 0.2}), InputError);
  CHECK_THROWS_AS(DecayProfile::sampled({0, 1}, {1.0}), InputError);
}

TEST_CASE("sampled tail exponent is fitted on the last decade") {
  std::vector<double> g, v;
  for (int i = 0; i <= 400; ++i) {
    const double s = std::pow(10.0, -1.0 + 4.0 * i / 400.0);
    g.push_back(s);
    v.push_back(std::pow(1.0 + s, -3.0));
  }
  g.insert(g.begin(), 0.0);
  v.insert(v.begin(), 1.0);
  const auto p = DecayProfile::sampled(g, v);
  const auto& sp = std::get<SampledProfile>(p.family());
  CHECK(sp.tail_exponent == doctest::Approx(3.0).epsilon(1e-2));
  CHECK(p.admissible());

  std::vector<double> slow;
  for (double s : g) slow.push_back(std::pow(1.0 + s, -1.5));
  CHECK_FALSE(DecayProfile::sampled(g, slow).admissible());
}

TEST_CASE("shifted_profile") {
  const auto lam = DecayProfile::exponential(1, 1);
  const int n = 3;
  const double alpha = 1.0;

  const auto zero = shifted_profile(lam, 2.0, 0.0, n, alpha);
  for (double t : {0.0, 1.0, 4.0, 100.0}) CHECK(zero(t) == 0.0);

  const auto sp = shifted_profile(lam, 2.0, 0.5, n, alpha);
  for (double t : {0.0, 1.0, 3.0, 4.0, 7.5, 20.0}) {
    CHECK(sp(t) == doctest::Approx(0.75 * 0.25 * std::exp(-std::abs(2.0 - 0.5 * t))).epsilon(1e-14));
  }

  const double cap = (n + alpha - 1) / (n + alpha) * 0.25 * eval_lambda(lam, 0.0);
  CHECK(sp(4.0) == doctest::Approx(cap).epsilon(1e-14));
  double prev = sp(4.0);
  for (double t = 0.0; t < 40.0; t += 0.01) {
    CHECK(sp(t) >= 0.0);
    CHECK(sp(t) <= cap * (1 + 1e-15));
    if (t >= 4.0) {
      CHECK(sp(t) <= prev);
      prev = sp(t);
    }
  }
}
