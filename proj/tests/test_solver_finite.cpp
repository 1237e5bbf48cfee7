#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "viab/errors.hpp"
#include "viab/solver_finite.hpp"

using namespace viab;

namespace {
// xdot = u, |u| <= 1 on [-2, 2]; constraint [-1.5, 1.5], target [-0.25, 0.25].
FiniteHorizonProblem toy(std::size_t nodes, double horizon) {
  const Grid g = oracle::line(-2, 2, nodes);
  FiniteHorizonProblem pb;
  pb.hamiltonian = oracle::h_controlled;
  pb.dissipation = oracle::global_c(1.0);
  pb.obstacle = oracle::interval_level(g, -1.5, 1.5, 0.5);
  pb.terminal = oracle::interval_level(g, -0.25, 0.25, 0.5);
  pb.horizon = horizon;
  return pb;
}
}  // namespace

TEST_SUITE("solver_finite") {
  TEST_CASE("zero horizon returns max(v0, g)") {
    const FiniteHorizonProblem pb = toy(65, 0.0);
    const ValueEvolution e = solve_finite(pb);
    REQUIRE(e.slices.size() == 1);
    for (std::size_t k = 0; k < 65; ++k) CHECK(e.initial()[k] == std::max(pb.terminal[k], pb.obstacle[k]));
  }

  TEST_CASE("terminal slice is exact; tags run from T to 0") {
    FiniteHorizonProblem pb = toy(129, 0.5);
    pb.retention = SliceRetention::all();
    const ValueEvolution e = solve_finite(pb);
    CHECK(e.slices.size() == e.steps + 1);
    CHECK(e.terminal().time_tag() == 0.5);
    CHECK(e.initial().time_tag() == 0.0);
    CHECK(e.dt * static_cast<double>(e.steps) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(e.dt <= cfl_time_step(pb.obstacle.grid(), {1, 0, 0}, 0.8) * (1 + 1e-12));
    for (std::size_t k = 0; k < 129; ++k) CHECK(e.terminal()[k] == std::max(pb.terminal[k], pb.obstacle[k]));
    for (std::size_t n = 1; n < e.slices.size(); ++n) CHECK(e.slices[n].time_tag() < e.slices[n - 1].time_tag());
  }

  TEST_CASE("1D capture basin grows at unit speed") {
    const ValueEvolution e = solve_finite(toy(513, 0.5));
    const auto [lo, hi] = oracle::sublevel_extent(e.initial());
    const double h = 4.0 / 512.0;
    CHECK(std::abs(lo + 0.75) <= h + 1e-12);
    CHECK(std::abs(hi - 0.75) <= h + 1e-12);
  }

  TEST_CASE("value dominates the obstacle; basins nest with the horizon") {
    FiniteHorizonProblem pb = toy(257, 0.8);
    pb.retention = SliceRetention::every(5);
    const ValueEvolution e = solve_finite(pb);
    for (const ScalarField& s : e.slices)
      for (std::size_t k = 0; k < 257; ++k) CHECK(s[k] >= pb.obstacle[k]);
    // slices at earlier t have a longer remaining horizon
    for (std::size_t n = 1; n < e.slices.size(); ++n)
      for (std::size_t k = 0; k < 257; ++k)
        if (e.slices[n - 1][k] <= 0.0) CHECK(e.slices[n][k] <= 0.0);
  }

  TEST_CASE("partial stride still keeps t = 0") {
    FiniteHorizonProblem pb = toy(65, 0.5);
    pb.dt = 0.5 / 11.0;
    pb.retention = SliceRetention::every(3);
    const ValueEvolution e = solve_finite(pb);
    CHECK(e.steps == 11);
    CHECK(e.slices.size() == 5);  // steps 0, 3, 6, 9, 11
    CHECK(e.initial().time_tag() == 0.0);
    CHECK(&e.at_time(0.0) == &e.initial());
  }

  TEST_CASE("invalid steps are rejected") {
    FiniteHorizonProblem pb = toy(65, 0.5);
    pb.dt = 1.0;
    CHECK_THROWS_AS(solve_finite(pb), CflError);
    pb.dt = -1.0;
    CHECK_THROWS_AS(solve_finite(pb), CflError);
    pb = toy(65, 0.5);
    pb.cfl = 1.5;
    CHECK_THROWS_AS(solve_finite(pb), ConfigError);
  }

  TEST_CASE("non-finite values abort") {
    FiniteHorizonProblem pb = toy(65, 0.5);
    pb.hamiltonian = [](const Point&, const Point&) { return NAN; };
    CHECK_THROWS_AS(solve_finite(pb), NumericalError);
  }

  TEST_CASE("serial and parallel runs agree bitwise") {
    FiniteHorizonProblem pb = toy(257, 0.5);
    const ValueEvolution a = solve_finite(pb);
    pb.execution = Execution::serial_reference;
    const ValueEvolution b = solve_finite(pb);
    CHECK(a.initial() == b.initial());
    CHECK(solve_finite(pb).initial() == b.initial());
  }

  TEST_CASE("min update marks the whole constraint set") {
    FiniteHorizonProblem pb = toy(257, 0.5);
    pb.update = ObstacleUpdate::min;
    const ValueEvolution bad = solve_finite(pb);
    pb.update = ObstacleUpdate::max;
    const ValueEvolution good = solve_finite(pb);
    const auto [blo, bhi] = oracle::sublevel_extent(bad.initial());
    const auto [glo, ghi] = oracle::sublevel_extent(good.initial());
    CHECK(ghi - glo == doctest::Approx(1.5).epsilon(0.02));
    // min(., g) makes every constraint node a member, regardless of reachability
    CHECK(blo <= -1.5);
    CHECK(bhi >= 1.5);
  }
}
