#include "viab/solver_finite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "viab/errors.hpp"

namespace viab {

const ScalarField& ValueEvolution::at_time(double t) const {
  if (slices.empty()) throw std::logic_error("value evolution has no slices");
  const ScalarField* best = &slices.front();
  for (const ScalarField& s : slices)
    if (std::abs(s.time_tag() - t) < std::abs(best->time_tag() - t)) best = &s;
  return *best;
}

double cfl_time_step(const Grid& grid, const Point& dissipation, double cfl) {
  double total = 0.0;
  for (std::size_t i = 0; i < grid.dim(); ++i) total += dissipation[i];
  if (total <= 0.0) return std::numeric_limits<double>::infinity();
  return cfl * grid.min_spacing() / total;
}

namespace {

void check_problem(const FiniteHorizonProblem& pb) {
  if (!pb.hamiltonian) throw ConfigError("finite solver: no Hamiltonian");
  if (!(pb.obstacle.grid() == pb.terminal.grid()))
    throw ConfigError("finite solver: obstacle and terminal fields live on different grids");
  if (!(pb.cfl > 0.0 && pb.cfl <= 1.0)) throw ConfigError("finite solver: cfl must lie in (0, 1]");
  if (!(pb.horizon >= 0.0) || !std::isfinite(pb.horizon))
    throw ConfigError("finite solver: horizon must be finite and >= 0");
  if (pb.dissipation.is_local() && pb.dissipation.local.size() != pb.obstacle.grid().size())
    throw ConfigError("finite solver: local dissipation size does not match the grid");
  if (pb.retention.mode == SliceRetention::Mode::stride && pb.retention.stride == 0)
    throw ConfigError("finite solver: slice stride must be >= 1");
}

}  // namespace

ValueEvolution solve_finite(const FiniteHorizonProblem& pb) {
  check_problem(pb);
  const Grid& grid = pb.obstacle.grid();
  const std::size_t n = grid.size();
  const double T = pb.horizon;

  ScalarField current(grid, 0.0, T);
  for (std::size_t k = 0; k < n; ++k) current[k] = std::max(pb.terminal[k], pb.obstacle[k]);

  ValueEvolution evo;
  if (T == 0.0) {
    evo.slices.push_back(std::move(current));
    return evo;
  }

  const double dt_max = cfl_time_step(grid, pb.dissipation.max_per_axis(), 1.0) * pb.cfl;
  double dt = 0.0;
  std::size_t steps = 0;
  if (pb.dt) {
    const double requested = *pb.dt;
    if (!(requested > 0.0)) throw CflError("finite solver: requested dt must be > 0");
    if (requested > dt_max * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "finite solver: requested dt " << requested << " exceeds the CFL bound " << dt_max;
      throw CflError(msg.str());
    }
    steps = static_cast<std::size_t>(std::ceil(T / requested - 1e-9));
  } else {
    steps = std::isfinite(dt_max) ? static_cast<std::size_t>(std::ceil(T / dt_max - 1e-9)) : 1;
  }
  steps = std::max<std::size_t>(steps, 1);
  dt = T / static_cast<double>(steps);
  evo.dt = dt;
  evo.steps = steps;

  std::size_t stride = steps;  // final_only keeps T and 0
  if (pb.retention.mode == SliceRetention::Mode::all) stride = 1;
  if (pb.retention.mode == SliceRetention::Mode::stride) stride = pb.retention.stride;
  evo.slice_stride = stride;
  evo.slices.push_back(current);

  const std::span<const double> g = pb.obstacle.values();
  const bool use_max = pb.update == ObstacleUpdate::max;
  auto update = [&](std::size_t k, double v, double hlf) {
    const double advected = v - dt * hlf;
    return use_max ? std::max(advected, g[k]) : std::min(advected, g[k]);
  };

  ScalarField next(grid, 0.0, T);
  for (std::size_t step = 1; step <= steps; ++step) {
    const SweepStats st = run_sweep(pb.execution, grid, current.values(), pb.hamiltonian, pb.dissipation,
                                    pb.boundary, update, next.values());
    if (!st.finite) throw NumericalError("finite solver: non-finite value", step);
    const double t = step == steps ? 0.0 : T - static_cast<double>(step) * dt;
    next.set_time_tag(t);
    std::swap(current, next);
    if (pb.progress) pb.progress({step, steps, t, st.min, st.max});
    // t = 0 is always kept, even when it ends a partial stride.
    if (step == steps || step % stride == 0) evo.slices.push_back(current);
  }
  return evo;
}

}  // namespace viab
