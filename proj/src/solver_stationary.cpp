#include "viab/solver_stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "viab/errors.hpp"

namespace viab {

double stationary_time_step(const Grid& grid, const Point& dissipation, double lambda, double cfl) {
  double total = 0.0;
  for (std::size_t i = 0; i < grid.dim(); ++i) total += dissipation[i];
  return cfl / (lambda + total / grid.min_spacing());
}

KernelResult solve_stationary(const StationaryProblem& pb) {
  if (!pb.hamiltonian) throw ConfigError("stationary solver: no Hamiltonian");
  if (!(pb.lambda > 0.0)) throw ConfigError("stationary solver: lambda must be > 0");
  if (!(pb.tol > 0.0)) throw ConfigError("stationary solver: tol must be > 0");
  if (!(pb.cfl > 0.0 && pb.cfl <= 1.0)) throw ConfigError("stationary solver: cfl must lie in (0, 1]");
  const Grid& grid = pb.obstacle.grid();
  if (pb.dissipation.is_local() && pb.dissipation.local.size() != grid.size())
    throw ConfigError("stationary solver: local dissipation size does not match the grid");

  const double dtau = stationary_time_step(grid, pb.dissipation.max_per_axis(), pb.lambda, pb.cfl);
  const double lambda = pb.lambda;
  const std::span<const double> gamma = pb.obstacle.values();
  auto update = [&](std::size_t k, double u, double hlf) {
    return std::max(u - dtau * (lambda * u + hlf), gamma[k]);
  };

  KernelResult result{pb.obstacle, 0, std::numeric_limits<double>::infinity(), false, dtau, {}, {}};
  ScalarField current = pb.obstacle;
  ScalarField next(grid, 0.0, 0.0);
  for (std::size_t it = 1; it <= pb.max_iter; ++it) {
    const SweepStats st = run_sweep(pb.execution, grid, current.values(), pb.hamiltonian, pb.dissipation,
                                    pb.boundary, update, next.values());
    if (!st.finite) throw NumericalError("stationary solver: non-finite value", it);
    next.set_time_tag(static_cast<double>(it));
    if (pb.inspect) pb.inspect(current, next);
    std::swap(current, next);
    result.iterations = it;
    result.residual = st.max_change;
    if (pb.record_history) result.residual_history.push_back(st.max_change);
    if (pb.on_iteration) pb.on_iteration({it, st.max_change, st.nonpositive});
    if (st.max_change <= pb.tol) {
      result.converged = true;
      break;
    }
  }
  result.value = std::move(current);
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (result.value[k] <= 0.0) result.kernel_nodes.push_back(k);
  return result;
}

double default_lambda(const ModelParams& m) {
  // Rows of d f / d(P, q, I); demand enters through c q, scaled by U <= U_fixed.
  const double coupling = m.rho * m.U_fixed * m.c;
  const double row_P = m.gamma + m.alpha * coupling + m.beta;
  const double row_q = m.delta;
  const double row_I = 1.0 + coupling + m.theta;
  return 1.1 * std::max({row_P, row_q, row_I});
}

TargetLevel kernel_to_target_level(const KernelResult& kernel, double cap) {
  const Grid& grid = kernel.value.grid();
  ScalarField indicator(grid, 1.0, kernel.value.time_tag());
  for (std::size_t k : kernel.kernel_nodes) indicator[k] = -1.0;
  Redistanced r = redistance(indicator, cap);
  TargetLevel out{std::move(r.field), kernel.kernel_nodes.empty(), kernel.kernel_nodes.size() == grid.size()};
  return out;
}

}  // namespace viab
