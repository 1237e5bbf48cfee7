// Acceptance checks. Usage: viab_acceptance [id...]; no ids runs all twelve.
// Prints one "PASS|FAIL <id> <name>: <detail>" line per criterion and exits
// non-zero when any selected criterion fails.

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "viab/config.hpp"
#include "viab/contour.hpp"
#include "viab/hamiltonian.hpp"
#include "viab/pipelines.hpp"
#include "viab/solver_finite.hpp"
#include "viab/solver_stationary.hpp"

using namespace viab;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

// ---------------------------------------------------------------------------
// Shared runs (computed once per process)

const ShortTermResult& default_short_term() {
  static const ShortTermResult r = [] {
    RunConfig c = default_config(RunMode::short_term);
    c.trajectory.starts = {{2.5, 2.5}};
    return solve_short_term(c);
  }();
  return r;
}

// ---------------------------------------------------------------------------

Outcome terminal_exactness() {
  std::size_t checked = 0, bad = 0;
  auto check = [&](const ValueEvolution& e, const ScalarField& v0, const ScalarField& g) {
    for (std::size_t k = 0; k < g.values().size(); ++k, ++checked)
      bad += e.terminal()[k] != std::max(v0[k], g[k]);
    bad += e.terminal().time_tag() != e.slices.front().time_tag();
  };
  for (double T : {0.0, 0.3, 1.0}) {
    RunConfig c = default_config(RunMode::short_term);
    c.grid = c.grid.with_nodes(65);
    c.solver.horizon = T;
    c.target.kind = LevelSpec::Kind::signed_distance;
    const ShortTermResult r = solve_short_term(c);
    check(r.evolution, r.target, r.obstacle);
  }
  RunConfig lt = default_config(RunMode::long_term);
  lt.grid = lt.grid.with_nodes(17);
  const LongTermResult r = solve_long_term(lt);
  if (r.evolution) check(*r.evolution, r.target->field, r.obstacle);
  const bool ran_3d = r.evolution.has_value();
  return {bad == 0 && ran_3d, std::to_string(checked) + " terminal nodes compared, " + std::to_string(bad) +
                                  " mismatches" + (ran_3d ? "" : "; 3D phase 2 did not run")};
}

Outcome capture_basin_1d() {
  const Grid g = oracle::line(-1, 1, 257);
  FiniteHorizonProblem pb;
  pb.hamiltonian = oracle::h_controlled;
  pb.dissipation = oracle::global_c(1.0);
  pb.obstacle = oracle::interval_level(g, -1, 1, 0.5);
  pb.terminal = oracle::interval_level(g, -0.25, 0.25, 0.5);
  pb.horizon = 0.5;
  const ValueEvolution e = solve_finite(pb);
  const auto [lo, hi] = oracle::sublevel_extent(e.initial());
  const double h = 1.0 / 128.0;
  const bool ok = std::abs(lo + 0.75) <= h && std::abs(hi - 0.75) <= h;
  return {ok, "zero level [" + fmt(lo) + ", " + fmt(hi) + "], tolerance " + fmt(h)};
}

Outcome plateau_value() {
  const double vmax = default_short_term().value().max();
  return {vmax >= 0.45 && vmax <= 0.55, "max v(0) = " + fmt(vmax)};
}

Outcome basin_contains_target() {
  const ShortTermResult& r = default_short_term();
  const ScalarField& v = r.value();
  const Grid& g = v.grid();
  double worst = -INFINITY;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Point x = g.node_position(k);
    if (x[0] >= 3.0 && x[1] >= 3.0) worst = std::max(worst, v[k]);
  }
  // The target contour must sit strictly inside {v(0) < 0}. Where it ends on
  // the faces of the constraint box, v(0) >= g = 0 holds by construction, so
  // only v(0) <= 0 is possible there.
  double interior_worst = -INFINITY, face_worst = -INFINITY;
  std::size_t vertices = 0;
  auto on_face = [&](const Vertex2& p) {
    for (std::size_t a = 0; a < 2; ++a)
      if (p[a] <= g.lower(a) || p[a] >= g.upper(a)) return true;
    return false;
  };
  for (const Polyline& l : extract_zero_levelset(r.target))
    for (const Vertex2& p : l.vertices) {
      double& w = on_face(p) ? face_worst : interior_worst;
      w = std::max(w, interpolate(v, {p[0], p[1], 0}));
      ++vertices;
    }
  // Reported only: the basin boundary may run inside C within a cell of the
  // I = 4 face, where every control pushes the inventory out of K.
  std::size_t inside = 0;
  double deepest = 0.0;
  for (const Polyline& l : extract_zero_levelset(v))
    for (const Vertex2& p : l.vertices)
      if (p[0] >= 3.0 && p[1] >= 3.0) {
        ++inside;
        deepest = std::max(deepest, std::min(4.0 - p[0], 4.0 - p[1]));
      }
  const bool ok = worst <= 0.02 && vertices > 0 && interior_worst < 0.0 && face_worst <= 0.0;
  return {ok, "max v(0) on C nodes = " + fmt(worst) + ", max v(0) on C contour: interior " + fmt(interior_worst) +
                  ", at K faces " + fmt(face_worst) + "; basin contour vertices inside C: " + std::to_string(inside) +
                  " (deepest " + fmt(deepest) + " from a face)"};
}

Outcome grid_convergence() {
  RunConfig c = default_config(RunMode::short_term);
  c.convergence.resolutions = {65, 129, 257, 513};
  c.convergence.reference = 1025;
  const ConvergenceTable t = convergence_study(c);
  bool decreasing = true;
  std::string errs;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (i > 0) decreasing = decreasing && t.rows[i].error < t.rows[i - 1].error;
    errs += (i ? ", " : "") + std::to_string(t.rows[i].nodes) + ": " + fmt(t.rows[i].error);
  }
  const double last = t.rows.back().error;
  return {decreasing && last <= 0.05, "errors {" + errs + "}"};
}

Outcome sensitivity_monotonicity() {
  bool ok = true;
  std::string detail;
  for (const char* p : {"a", "b", "c", "rho"}) {
    RunConfig c = default_config(RunMode::short_term);
    c.sweep.parameter = p;
    c.sweep.nodes = 129;
    const auto [lo, hi] = sweep_range(p);
    c.sweep.values.clear();
    for (int i = 0; i < 5; ++i) c.sweep.values.push_back(lo + (hi - lo) * i / 4.0);
    const SweepResult s = sweep_study(c);
    const bool shrinking = std::string(p) == "b";
    bool mono = true;
    for (std::size_t i = 1; i < s.areas.size(); ++i)
      mono = mono && (shrinking ? s.areas[i] <= s.areas[i - 1] : s.areas[i] >= s.areas[i - 1]);
    ok = ok && mono;
    detail += std::string(detail.empty() ? "" : "; ") + p + (mono ? " ok" : " VIOLATED") + " [";
    for (std::size_t i = 0; i < s.areas.size(); ++i) detail += (i ? " " : "") + fmt(s.areas[i]);
    detail += "]";
  }
  return {ok, detail};
}

Outcome trajectory_viability() {
  const ShortTermResult& r = default_short_term();
  if (r.trajectories.size() != 1) return {false, "no trajectory"};
  const Trajectory& t = r.trajectories.front();
  const ModelParams m;
  double max_g = -INFINITY;
  for (double g : t.levels) max_g = std::max(max_g, g);
  const Point end = t.states.back();
  const bool in_target = end[0] >= 3.0 && end[0] <= 4.0 && end[1] >= 3.0 && end[1] <= 4.0;
  std::size_t non_vertex = 0, bad_pairing = 0;
  for (const Control& w : t.controls) {
    non_vertex += !((w.p == m.p_min || w.p == m.p_max) && (w.U == 0.0 || w.U == m.U_max));
    bad_pairing += w.U == m.U_max && w.p != m.p_min;
  }
  const bool ok = max_g <= 0.02 && in_target && t.times.back() == 1.0 && non_vertex == 0 && bad_pairing == 0;
  return {ok, "max g = " + fmt(max_g) + ", end (" + fmt(end[0]) + ", " + fmt(end[1]) + ") at t = " +
                  fmt(t.times.back()) + ", " + std::to_string(t.controls.size()) + " controls, non-vertex " +
                  std::to_string(non_vertex) + ", U=1 without p=75: " + std::to_string(bad_pairing)};
}

Outcome hamiltonian_oracle() {
  const ModelParams m;
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> P(1, 4), q(20, 50), I(1, 4), z(-10, 10);
  const Hamiltonian2 h2(m);
  const Hamiltonian3 h3(m);
  const auto lat2 = control_lattice(ControlBox::short_term(m), 2);
  const auto lat3 = control_lattice(ControlBox::long_term(m), 2);
  const DynamicsFn f2 = model_dynamics(m, Phase::short_term), f3 = model_dynamics(m, Phase::long_term);
  double worst2 = 0, worst3 = 0;
  for (int i = 0; i < 10000; ++i) {
    const Point x2{P(rng), I(rng), 0}, c2{z(rng), z(rng), 0};
    const Point x3{P(rng), q(rng), I(rng)}, c3{z(rng), z(rng), z(rng)};
    worst2 = std::max(worst2, std::abs(h2(x2, c2) - hamiltonian_bruteforce(x2, c2, f2, lat2, 2)));
    worst3 = std::max(worst3, std::abs(h3(x3, c3) - hamiltonian_bruteforce(x3, c3, f3, lat3, 3)));
  }
  return {worst2 <= 1e-12 && worst3 <= 1e-12, "max |analytic - brute force|: 2D " + fmt(worst2) + ", 3D " + fmt(worst3)};
}

Outcome stationary_oracles() {
  const Grid g = oracle::line(-2, 2, 257);
  const double h = g.spacing(0);
  struct Case {
    const char* name;
    HamiltonianFn ham;
    bool local;
    double lo, hi;
  };
  const Case cases[] = {{"full", oracle::h_controlled, false, -1, 1},
                        {"empty", oracle::h_drift, false, 0, 1},
                        {"decay", oracle::h_decay, true, -1, 1}};
  bool ok = true;
  std::string detail;
  for (const Case& cs : cases) {
    StationaryProblem pb;
    pb.hamiltonian = cs.ham;
    pb.obstacle = oracle::interval_level(g, cs.lo, cs.hi, 0.5);
    if (cs.local) {
      for (std::size_t k = 0; k < g.size(); ++k) pb.dissipation.local.push_back({std::abs(g.coordinate(0, k)), 0, 0});
    } else {
      pb.dissipation = oracle::global_c(1.0);
    }
    pb.lambda = 1.0;
    std::size_t below = 0;
    pb.inspect = [&](const ScalarField&, const ScalarField& next) {
      for (std::size_t k = 0; k < g.size(); ++k) below += next[k] < pb.obstacle[k];
    };
    const KernelResult r = solve_stationary(pb);
    const auto [lo, hi] = oracle::sublevel_extent(r.value);
    bool match;
    if (std::string(cs.name) == "empty") {
      // nothing survives except possibly the node at the exit point
      match = r.kernel_nodes.empty() || (lo >= cs.hi - h - 1e-12 && hi <= cs.hi + 1e-12);
    } else {
      match = std::abs(lo - cs.lo) <= h && std::abs(hi - cs.hi) <= h;
    }
    ok = ok && match && below == 0 && r.converged;
    detail += std::string(detail.empty() ? "" : "; ") + cs.name + ": " + std::to_string(r.kernel_nodes.size()) +
              " nodes [" + fmt(lo) + ", " + fmt(hi) + "], below-obstacle " + std::to_string(below) +
              (r.converged ? "" : ", not converged");
  }
  return {ok, detail};
}

Outcome long_term_pipeline() {
  const RunConfig c = default_config(RunMode::long_term);
  const LongTermResult r = solve_long_term(c);
  const std::size_t n = r.kernel.kernel_nodes.size();
  if (n == 0 || !r.evolution) return {false, "kernel is empty"};
  std::size_t outside_gamma = 0;
  for (std::size_t k : r.kernel.kernel_nodes) outside_gamma += r.kernel_obstacle[k] > 0.0;
  const Point C = r.basin_dissipation.max_per_axis();
  const double margin = (C[0] + C[1] + C[2]) * r.evolution->dt;
  double worst = -INFINITY;
  for (std::size_t k : r.kernel.kernel_nodes) worst = std::max(worst, r.evolution->initial()[k]);
  const bool ok = r.kernel.converged && outside_gamma == 0 && worst <= margin;
  return {ok, std::to_string(n) + " kernel nodes (" + std::to_string(r.kernel.iterations) + " iterations" +
                  (r.kernel.converged ? "" : ", not converged") + "), outside Gamma " + std::to_string(outside_gamma) +
                  ", max phase-2 v(0) on kernel " + fmt(worst) + " vs margin " + fmt(margin) + ", basin volume " +
                  fmt(basin_area(r.evolution->initial()))};
}

std::string file_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "viab_acceptance_determinism";
  fs::remove_all(root);
  RunConfig st = default_config(RunMode::short_term);
  const RunConfig lt = default_config(RunMode::long_term);
  const int threads[] = {1, 2, 8};
  std::map<std::string, std::string> first;
  std::size_t compared = 0, differ = 0;
  for (int n : threads) {
    omp_set_num_threads(n);
    const fs::path d = root / std::to_string(n);
    run_short_term(st, d / "short");
    run_long_term(lt, d / "long");
    for (const auto& e : fs::recursive_directory_iterator(d)) {
      if (e.path().extension() != ".bin") continue;
      const std::string rel = fs::relative(e.path(), d).string();
      const std::string bytes = file_bytes(e.path());
      if (n == threads[0]) {
        first[rel] = bytes;
      } else {
        ++compared;
        differ += first.count(rel) == 0 || first[rel] != bytes;
      }
    }
  }
  fs::remove_all(root);
  const bool ok = compared == 2 * first.size() && !first.empty() && differ == 0;
  return {ok, std::to_string(first.size()) + " field files x 3 thread counts, " + std::to_string(differ) + " differ"};
}

Outcome equilibrium_residual() {
  const ModelParams m;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> p(m.p_min, m.p_max), U(0, m.U_max);
  double worst = 0;
  std::size_t unstable = 0, wrong_invariants = 0;
  for (int i = 0; i < 100; ++i) {
    const Control w{p(rng), U(rng), 0};
    const Equilibrium2 e = equilibrium2(w, m);
    const State2 f = dynamics2(e.state, w, m);
    worst = std::max({worst, std::abs(f.P), std::abs(f.I)});
    unstable += !e.stable;
    wrong_invariants += std::abs(e.trace + 0.2) > 1e-15 || std::abs(e.det - 0.11) > 1e-15;
  }
  return {worst <= 1e-12 && unstable == 0 && wrong_invariants == 0,
          "max residual " + fmt(worst) + ", unstable " + std::to_string(unstable) + ", trace/det mismatches " +
              std::to_string(wrong_invariants)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

const Criterion kCriteria[] = {
    {1, "terminal_exactness", terminal_exactness},
    {2, "capture_basin_1d", capture_basin_1d},
    {3, "plateau_value", plateau_value},
    {4, "basin_contains_target", basin_contains_target},
    {5, "grid_convergence", grid_convergence},
    {6, "sensitivity_monotonicity", sensitivity_monotonicity},
    {7, "trajectory_viability", trajectory_viability},
    {8, "hamiltonian_oracle", hamiltonian_oracle},
    {9, "stationary_oracles", stationary_oracles},
    {10, "long_term_pipeline", long_term_pipeline},
    {11, "determinism", determinism},
    {12, "equilibrium_residual", equilibrium_residual},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty())
    for (const Criterion& c : kCriteria) ids.push_back(c.id);
  int failures = 0;
  for (int id : ids) {
    const auto it = std::find_if(std::begin(kCriteria), std::end(kCriteria), [&](const Criterion& c) { return c.id == id; });
    if (it == std::end(kCriteria)) {
      std::cout << "FAIL " << id << " unknown criterion\n";
      ++failures;
      continue;
    }
    Outcome o;
    try {
      o = it->run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << it->id << ' ' << it->name << ": " << o.detail << std::endl;
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
