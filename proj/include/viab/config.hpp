#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "viab/hamiltonian.hpp"
#include "viab/lax_friedrichs.hpp"
#include "viab/levelset.hpp"
#include "viab/model.hpp"
#include "viab/solver_finite.hpp"
#include "viab/trajectory.hpp"

namespace viab {

enum class RunMode { short_term, long_term };

/// Level function of a box. capped_box: min(cap, max_i(|x_i - c_i| - r_i));
/// signed_distance: signed distance to the box in `norm`.
struct LevelSpec {
  enum class Kind { capped_box, signed_distance } kind = Kind::capped_box;
  std::vector<double> lower;
  std::vector<double> upper;
  double cap = 0.5;
  Norm norm = Norm::infinity;

  BoxSet box() const;
  ScalarField sample(const Grid& grid) const;
  friend bool operator==(const LevelSpec&, const LevelSpec&) = default;
};

struct GridSpec {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::size_t> nodes;

  Grid build() const;
  /// Same box with every axis resampled to `n` nodes.
  GridSpec with_nodes(std::size_t n) const;
  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

enum class DissipationKind { global, local };

struct SolverSpec {
  double horizon = 1.0;
  double cfl = 0.8;
  Boundary boundary = Boundary::linear;
  ObstacleUpdate obstacle = ObstacleUpdate::max;
  DissipationKind dissipation = DissipationKind::global;         // finite-horizon solves
  DissipationKind kernel_dissipation = DissipationKind::local;  // stationary solve
  double tol = 1e-6;
  std::size_t max_iter = 100000;
  double lambda = 0.0;  // resolved: default_lambda(model) unless overridden
  Hamiltonian3Form hamiltonian3_form = Hamiltonian3Form::exact_max;
  double kernel_cap = 0.5;  // cap of the redistanced kernel level
  friend bool operator==(const SolverSpec&, const SolverSpec&) = default;
};

struct TrajectorySpec {
  std::vector<std::vector<double>> starts;
  std::size_t samples = 2;  // per control axis; 2 = vertices only
  std::size_t stride = 10;  // backward steps per reconstruction step
  double admission_tol = 0.0;
  Integrator integrator = Integrator::euler;
  bool extreme_velocities_only = true;
  friend bool operator==(const TrajectorySpec&, const TrajectorySpec&) = default;
};

struct ConvergenceSpec {
  std::vector<std::size_t> resolutions{65, 129, 257, 513};
  std::size_t reference = 1025;
  friend bool operator==(const ConvergenceSpec&, const ConvergenceSpec&) = default;
};

struct SweepSpec {
  std::string parameter = "a";
  std::vector<double> values;  // resolved: 5 evenly spaced over the parameter range unless given
  std::size_t nodes = 129;
  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct RunConfig {
  RunMode mode = RunMode::short_term;
  std::string output_dir = "out";
  std::vector<double> cross_sections{30.0, 1.2};  // long-term contour slices at q and I
  ModelParams model;
  GridSpec grid;
  LevelSpec constraint;
  LevelSpec target;
  SolverSpec solver;
  TrajectorySpec trajectory;
  ConvergenceSpec convergence;
  SweepSpec sweep;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Reference setup for a mode with every default applied.
RunConfig default_config(RunMode mode);

/// Parses TOML-style text (sections, key = value, numbers, strings, booleans,
/// arrays). Every key of [model] that names a calibration constant is
/// required; everything else falls back to the mode's defaults. Unknown
/// sections or keys are errors. When `expected` is given, a different
/// run.mode is rejected. Throws ConfigError; the result is validated.
RunConfig parse_config(std::string_view text, std::optional<RunMode> expected = std::nullopt);
RunConfig load_config(const std::filesystem::path& path, std::optional<RunMode> expected = std::nullopt);

/// Fully resolved config as text; parse_config(to_toml(c)) == c.
std::string to_toml(const RunConfig& config);

/// Semantic checks; throws ConfigError naming the offending key.
void validate(const RunConfig& config);

/// Inclusive range a sweep parameter may take.
std::pair<double, double> sweep_range(const std::string& parameter);
/// Reference params with one sweep parameter replaced.
ModelParams with_parameter(const ModelParams& params, const std::string& parameter, double value);

std::string to_string(RunMode mode);

}  // namespace viab
