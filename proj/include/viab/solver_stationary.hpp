#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "viab/grid.hpp"
#include "viab/hamiltonian.hpp"
#include "viab/lax_friedrichs.hpp"
#include "viab/levelset.hpp"
#include "viab/model.hpp"

namespace viab {

struct IterationRecord {
  std::size_t iteration = 0;
  double residual = 0.0;
  std::size_t kernel_nodes = 0;
};

/// Discounted obstacle problem min{lambda u + H(x, Du), u - Gamma} = 0, solved
/// as the steady state of pseudo-time iteration started from u = Gamma.
struct StationaryProblem {
  HamiltonianFn hamiltonian;
  Dissipation dissipation;
  ScalarField obstacle;  // Gamma: level function of the set to stay in
  double lambda = 1.0;
  double cfl = 0.8;
  double tol = 1e-6;
  std::size_t max_iter = 100000;
  Boundary boundary = Boundary::linear;
  Execution execution = Execution::parallel;
  /// Keep the full residual sequence in the result.
  bool record_history = true;
  std::function<void(const IterationRecord&)> on_iteration;
  /// Test hook: called with (previous iterate, new iterate) after each sweep.
  std::function<void(const ScalarField&, const ScalarField&)> inspect;
};

struct KernelResult {
  ScalarField value;
  std::size_t iterations = 0;
  double residual = 0.0;
  bool converged = false;
  double dtau = 0.0;
  std::vector<std::size_t> kernel_nodes;  // flat indices with value <= 0
  std::vector<double> residual_history;
};

/// Pseudo-time step cfl / (lambda + sum_i C_i / min_i dx_i).
double stationary_time_step(const Grid& grid, const Point& dissipation, double lambda, double cfl);

/// Iterates u <- max(u - dtau (lambda u + H_LF(u)), Gamma) until the sup-norm
/// change drops to tol. Non-convergence is reported through `converged`, not thrown.
KernelResult solve_stationary(const StationaryProblem& problem);

/// 1.1 times the max-row-sum norm of the state Jacobian of the (P, q, I)
/// dynamics over the admissible controls (the Jacobian is state independent).
double default_lambda(const ModelParams& params);

struct TargetLevel {
  ScalarField field;
  bool empty_kernel = false;
  bool full_kernel = false;
};

/// Capped signed infinity-norm distance to the kernel node set, used as the
/// terminal level function of the follow-up capture problem.
TargetLevel kernel_to_target_level(const KernelResult& kernel, double cap);

}  // namespace viab
