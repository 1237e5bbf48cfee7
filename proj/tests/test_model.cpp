#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "viab/errors.hpp"
#include "viab/model.hpp"

using namespace viab;

TEST_SUITE("model") {
  const ModelParams m;

  TEST_CASE("demand") {
    CHECK(demand(75, 1, 40, m) == doctest::Approx(3.4));
    CHECK(demand(120, 0, 33, m) == 0.0);
    ModelParams quad = m;
    quad.demand_variant = DemandVariant::quadratic;
    CHECK(demand(10, 1, 40, quad) == doctest::Approx(2.4));
  }

  TEST_CASE("short-term dynamics") {
    const State2 d = dynamics2({2.5, 2.5}, {75, 1, 0}, m);
    CHECK(d.P == doctest::Approx(2.22));
    CHECK(d.I == doctest::Approx(-1.15));
    const State2 z = dynamics2({2.5, 2.5}, {150, 0, 0}, m);
    CHECK(z.P == doctest::Approx(-0.5));
    CHECK(z.I == doctest::Approx(2.25));
    const State2 o = dynamics2({0, 0}, {100, 0, 0}, m);
    CHECK(o.P == 0.0);
    CHECK(o.I == 0.0);
  }

  TEST_CASE("long-term dynamics") {
    const State3 d = dynamics3({2.5, 40, 2.5}, {75, 1, 100}, m);
    CHECK(d.P == doctest::Approx(2.22));
    CHECK(d.q == doctest::Approx(2.0));
    CHECK(d.I == doctest::Approx(-1.15));
    CHECK(dynamics3({2.5, 40, 2.5}, {75, 1, 0}, m).q == doctest::Approx(-8.0));
    CHECK(dynamics3({2.5, 40, 2.5}, {75, 1, 64}, m).q == doctest::Approx(0.0));
    CHECK_THROWS_AS(dynamics3({2.5, 40, 2.5}, {75, 1, -1}, m), std::invalid_argument);
  }

  TEST_CASE("dynamics match the reference formulas") {
    const oracle::Ref ref;
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> s(1, 4), p(75, 150), u(0, 1);
    for (int i = 0; i < 500; ++i) {
      const double P = s(rng), I = s(rng), pp = p(rng), U = u(rng);
      const auto [fP, fI] = ref.f2(P, I, pp, U, 40);
      const State2 d = dynamics2({P, I}, {pp, U, 0}, m);
      CHECK(d.P == doctest::Approx(fP).epsilon(1e-14));
      CHECK(d.I == doctest::Approx(fI).epsilon(1e-14));
    }
  }

  TEST_CASE("equilibrium") {
    const Equilibrium2 e = equilibrium2({75, 1, 0}, m);
    CHECK(e.state.P == doctest::Approx(3.4 * 0.18 / 0.11));
    CHECK(e.state.I == doctest::Approx(0.7 * 3.4 / 0.11));
    CHECK(e.trace == doctest::Approx(-0.2));
    CHECK(e.det == doctest::Approx(0.11));
    CHECK(e.stable);
    const State2 r = dynamics2(e.state, {75, 1, 0}, m);
    CHECK(std::abs(r.P) <= 1e-12);
    CHECK(std::abs(r.I) <= 1e-12);
    const Equilibrium2 z = equilibrium2({75, 0, 0}, m);
    CHECK(z.state.P == 0.0);
    CHECK(z.state.I == 0.0);
    ModelParams singular = m;
    singular.beta = 0;
    singular.gamma = 0;
    singular.alpha = 0.5;
    CHECK_THROWS_AS(equilibrium2({75, 1, 0}, singular), std::domain_error);
  }

  TEST_CASE("demand monotonicity and affinity in the state") {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> p(75, 150), u(0, 1), q(20, 50), x(0, 5), l(0, 1);
    for (int i = 0; i < 500; ++i) {
      const double p1 = p(rng), p2 = p(rng), U = u(rng), qq = q(rng);
      CHECK((demand(std::min(p1, p2), U, qq, m) >= demand(std::max(p1, p2), U, qq, m)));
      CHECK(demand(p1, U, qq, m) == doctest::Approx(U * demand(p1, 1.0, qq, m)).epsilon(1e-14));
      CHECK(demand(p1, U, 50, m) >= demand(p1, U, qq, m));
      const State3 a{x(rng), 20 + 6 * x(rng), x(rng)}, b{x(rng), 20 + 6 * x(rng), x(rng)};
      const double lam = l(rng);
      const Control w{p1, U, 50};
      const State3 mix{lam * a.P + (1 - lam) * b.P, lam * a.q + (1 - lam) * b.q, lam * a.I + (1 - lam) * b.I};
      const State3 fa = dynamics3(a, w, m), fb = dynamics3(b, w, m), fm = dynamics3(mix, w, m);
      CHECK(fm.P == doctest::Approx(lam * fa.P + (1 - lam) * fb.P).epsilon(1e-12));
      CHECK(fm.I == doctest::Approx(lam * fa.I + (1 - lam) * fb.I).epsilon(1e-12));
    }
  }

  TEST_CASE("parameter validation") {
    CHECK_NOTHROW(m.validate());
    ModelParams bad = m;
    bad.gamma = 0.9;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = m;
    bad.p_max = 50;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = m;
    bad.rho = -0.1;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
  }
}
