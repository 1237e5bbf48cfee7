#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "viab/grid.hpp"
#include "viab/hamiltonian.hpp"
#include "viab/model.hpp"
#include "viab/solver_finite.hpp"

namespace viab {

enum class Integrator { euler, rk2 };

struct ReconstructOptions {
  /// Forward step; must be a whole multiple of the evolution's slice spacing.
  double step_dt = 0.0;
  /// Start is rejected when v(0, x0) exceeds this.
  double admission_tol = 0.0;
  bool allow_nonviable_start = false;
  Integrator integrator = Integrator::euler;
  /// Abort after this many consecutive steps in which every trial state left the box.
  std::size_t max_clamped_steps = 5;
  /// Only try controls whose velocity f(x, w) is an extreme point of the
  /// sampled velocity set. A control whose velocity is a convex combination of
  /// others merely imitates chattering between them; with this off, every
  /// lattice control competes.
  bool extreme_velocities_only = true;
};

/// Forward path. States, times and diagnostics have one entry per visited
/// state; controls[n] is the control applied from states[n] to states[n+1].
struct Trajectory {
  std::size_t dim = 0;
  std::vector<double> times;
  std::vector<Point> states;
  std::vector<Control> controls;
  std::vector<double> values;  // v(t_n, x_n), interpolated
  std::vector<double> levels;  // g(x_n), interpolated
  std::vector<double> scores;  // committed max(v_next, g_next) per step
  std::vector<char> clamped;   // state was clamped back into the grid box

  std::size_t size() const noexcept { return states.size(); }
};

class TrajectoryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Greedy feedback reconstruction: at each step every candidate control is
/// tried with one explicit step and scored by max(v(t_{n+1}, x'), g(x')); the
/// lowest score wins, ties going to the earliest control in lattice order.
Trajectory reconstruct(const ValueEvolution& evolution, const ScalarField& g, const Point& x0,
                       const DynamicsFn& dynamics, const std::vector<Control>& lattice,
                       const ReconstructOptions& options);

/// Flags the controls whose velocities are extreme points of their convex
/// hull. Coincident velocities keep only the first control in lattice order.
/// Exact for velocity sets spanning up to two affine dimensions; for a full
/// three-dimensional set every distinct velocity is kept.
std::vector<char> extreme_velocity_mask(const std::vector<Point>& velocities, std::size_t dim);

struct ControlSeries {
  std::vector<double> times;
  std::vector<double> p;
  std::vector<double> U;
  std::vector<double> s;
};

ControlSeries control_signals(const Trajectory& trajectory);

/// CSV columns: t, x0..x{d-1} (named by `axis_names`), p, U, s, v, g, clamped.
/// The final row has no control.
void write_trajectory_csv(const Trajectory& trajectory, const std::vector<std::string>& axis_names,
                          const std::filesystem::path& path);

}  // namespace viab
