#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "viab/grid.hpp"
#include "viab/hamiltonian.hpp"
#include "viab/lax_friedrichs.hpp"

namespace viab {

/// How the obstacle enters each backward step.
///   max: v^n = max(v^{n+1} - dt H_LF, g), the obstacle equation min{-v_t + H, v - g} = 0
///   min: v^n = min(v^{n+1} - dt H_LF, g), demonstration only; collapses the basin
enum class ObstacleUpdate { max, min };

/// Which backward slices to keep. `stride` k keeps every k-th slice plus t = 0.
struct SliceRetention {
  enum class Mode { final_only, all, stride } mode = Mode::final_only;
  std::size_t stride = 1;

  static SliceRetention final_only() { return {}; }
  static SliceRetention all() { return {Mode::all, 1}; }
  static SliceRetention every(std::size_t k) { return {Mode::stride, k}; }
};

struct StepProgress {
  std::size_t step = 0;   // backward steps completed
  std::size_t steps = 0;
  double time = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct FiniteHorizonProblem {
  HamiltonianFn hamiltonian;
  Dissipation dissipation;
  ScalarField obstacle;  // g: constraint level function
  ScalarField terminal;  // v0: target level function
  double horizon = 1.0;
  double cfl = 0.8;
  /// When set, used instead of the CFL-derived step (rejected if it violates the bound).
  std::optional<double> dt;
  Boundary boundary = Boundary::linear;
  ObstacleUpdate update = ObstacleUpdate::max;
  SliceRetention retention;
  Execution execution = Execution::parallel;
  std::function<void(const StepProgress&)> progress;
};

/// Backward slices, ordered from t = T down to t = 0.
struct ValueEvolution {
  std::vector<ScalarField> slices;
  double dt = 0.0;
  std::size_t steps = 0;
  /// Backward steps between consecutive retained slices.
  std::size_t slice_stride = 1;

  const ScalarField& initial() const { return slices.back(); }
  const ScalarField& terminal() const { return slices.front(); }
  double slice_spacing() const { return dt * static_cast<double>(slice_stride); }
  /// Slice whose time tag is closest to t.
  const ScalarField& at_time(double t) const;
};

/// Largest admissible step: cfl * min_i dx_i / sum_i C_i (horizon when C = 0).
double cfl_time_step(const Grid& grid, const Point& dissipation, double cfl);

/// Solves the finite-horizon obstacle problem backward from T to 0 with the
/// Lax-Friedrichs scheme. The step is rounded down so an integer number of
/// steps lands exactly on t = 0. Throws CflError or NumericalError.
ValueEvolution solve_finite(const FiniteHorizonProblem& problem);

}  // namespace viab
