#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "viab/levelset.hpp"

using namespace viab;

namespace {
const double b14[] = {1, 1}, t14[] = {4, 4};

double norm_diff(const Point& a, const Point& b, std::size_t dim, Norm n) {
  double s = 0.0;
  for (std::size_t i = 0; i < dim; ++i)
    s = n == Norm::infinity ? std::max(s, std::abs(a[i] - b[i])) : s + (a[i] - b[i]) * (a[i] - b[i]);
  return n == Norm::infinity ? s : std::sqrt(s);
}
}  // namespace

TEST_SUITE("levelset") {
  TEST_CASE("capped box level") {
    CHECK(capped_box_level({3.5, 3.5, 0}, {3.5, 3.5, 0}, 0.5, 0.5, 2) == -0.5);
    CHECK(capped_box_level({2.5, 2.5, 0}, {2.5, 2.5, 0}, 2.5, 2.5, 2) == -2.5);
    CHECK(capped_box_level({10, 10, 0}, {3.5, 3.5, 0}, 0.5, 0.5, 2) == 0.5);
    CHECK(capped_box_level({4, 3.2, 0}, {3.5, 3.5, 0}, 0.5, 0.5, 2) == 0.0);
  }

  TEST_CASE("per-axis box level matches the scalar form for cubes") {
    const BoxSet box = BoxSet::from_bounds(std::span<const double>(b14), std::span<const double>(t14));
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0, 5);
    for (int i = 0; i < 1000; ++i) {
      const Point x{u(rng), u(rng), 0};
      CHECK(capped_box_level(x, box, 1.0) == capped_box_level(x, {2.5, 2.5, 0}, 1.5, 1.0, 2));
    }
  }

  TEST_CASE("signed distance to a box") {
    const BoxSet box = BoxSet::from_bounds(std::span<const double>(b14), std::span<const double>(t14));
    CHECK(signed_distance_box({2.5, 2.5, 0}, box, Norm::euclidean) == doctest::Approx(-1.5));
    CHECK(signed_distance_box({4, 2, 0}, box, Norm::euclidean) == 0.0);
    CHECK(signed_distance_box({1, 3, 0}, box, Norm::infinity) == 0.0);
    CHECK(signed_distance_box({5, 5, 0}, box, Norm::euclidean) == doctest::Approx(std::sqrt(2.0)));
    CHECK(signed_distance_box({5, 5, 0}, box, Norm::infinity) == doctest::Approx(1.0));
  }

  TEST_CASE("sign consistency and 1-Lipschitz property") {
    const double lo[] = {1, 20, 1}, hi[] = {2, 45, 4};
    const BoxSet box = BoxSet::from_bounds(std::span<const double>(lo), std::span<const double>(hi));
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u0(0, 3), u1(15, 50), u2(0, 5);
    for (int i = 0; i < 2000; ++i) {
      const Point x{u0(rng), u1(rng), u2(rng)}, y{u0(rng), u1(rng), u2(rng)};
      const bool inside = box.contains(x);
      CHECK((capped_box_level(x, box, 0.5) <= 0.0) == inside);
      CHECK((signed_distance_box(x, box, Norm::euclidean) <= 0.0) == inside);
      CHECK((signed_distance_box(x, box, Norm::infinity) <= 0.0) == inside);
      CHECK(std::abs(capped_box_level(x, box, 0.5) - capped_box_level(y, box, 0.5)) <=
            norm_diff(x, y, 3, Norm::infinity) + 1e-12);
      for (Norm n : {Norm::euclidean, Norm::infinity})
        CHECK(std::abs(signed_distance_box(x, box, n) - signed_distance_box(y, box, n)) <= norm_diff(x, y, 3, n) + 1e-12);
    }
  }

  TEST_CASE("redistance of a 1D node set") {
    // nodes 0, 0.25, 0.5, 0.75, 1; members {0, 0.25}
    const ScalarField f(oracle::line(0, 1, 5), std::vector<double>{-1, -1, 1, 1, 1});
    const Redistanced r = redistance(f, 1.0);
    CHECK_FALSE(r.degenerate);
    CHECK(r.field[4] == doctest::Approx(0.75));
    CHECK(r.field[3] == doctest::Approx(0.5));
    CHECK(r.field[2] == doctest::Approx(0.25));
    CHECK(r.field[1] == doctest::Approx(-0.25));
    CHECK(r.field[0] == doctest::Approx(-0.5));  // nearest non-member (0.5) is two cells away
    CHECK(redistance(f, 0.3).field[4] == 0.3);
  }

  TEST_CASE("degenerate sets give a constant capped field") {
    const ScalarField neg(oracle::line(0, 1, 5), -1.0);
    const Redistanced r = redistance(neg, 0.4);
    CHECK(r.degenerate);
    for (double v : r.field.values()) CHECK(v == -0.4);
    const Redistanced p = redistance(ScalarField(oracle::line(0, 1, 5), 2.0), 0.4);
    CHECK(p.degenerate);
    for (double v : p.field.values()) CHECK(v == 0.4);
  }

  TEST_CASE("brute force and axis sweep agree bitwise; sign preserved; near-idempotent") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> u(-1, 1);
    for (auto g : {make_grid({0, 0}, {1, 2}, {17, 23}), make_grid({1, 20, 1}, {4, 50, 4}, {9, 11, 7})}) {
      std::vector<double> v(g.size());
      for (double& x : v) x = u(rng) + 0.3;
      const ScalarField f(g, v);
      const Redistanced a = redistance(f, 0.8, RedistanceMethod::brute_force);
      const Redistanced b = redistance(f, 0.8, RedistanceMethod::axis_sweep);
      CHECK(a.field == b.field);
      double h = 0.0;
      for (std::size_t i = 0; i < g.dim(); ++i) h = std::max(h, g.spacing(i));
      const Redistanced twice = redistance(a.field, 0.8);
      for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK((a.field[k] <= 0.0) == (f[k] <= 0.0));
        CHECK(std::abs(twice.field[k] - a.field[k]) <= h + 1e-12);
      }
    }
  }
}
