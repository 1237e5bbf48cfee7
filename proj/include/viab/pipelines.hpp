#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "viab/config.hpp"
#include "viab/contour.hpp"
#include "viab/solver_finite.hpp"
#include "viab/solver_stationary.hpp"
#include "viab/trajectory.hpp"

namespace viab {

/// Record of one run: config echo, settings actually used, timing, files
/// written (relative to the run directory) and warnings.
struct RunManifest {
  std::string command;
  std::string status = "ok";  // ok | not_converged | error
  std::string error;
  std::string config;  // resolved config as TOML text
  nlohmann::ordered_json settings = nlohmann::ordered_json::object();
  nlohmann::ordered_json timing = nlohmann::ordered_json::object();
  std::vector<std::string> files;
  std::vector<std::string> warnings;

  nlohmann::ordered_json to_json() const;
  /// Writes <dir>/manifest.json.
  void write(const std::filesystem::path& dir) const;
};

/// (count of nodes with value <= 0 / total nodes) * box volume.
double basin_area(const ScalarField& field);

/// Per-axis Lax-Friedrichs constants for a solve: term-wise bounds over the
/// grid box, or node-local bounds when `kind` is local.
Dissipation make_dissipation(const Grid& grid, const ModelParams& params, Phase phase, DissipationKind kind);

// ---------------------------------------------------------------------------
// In-memory stages (no file output)

struct ShortTermResult {
  ScalarField obstacle;  // g
  ScalarField target;    // v0
  ValueEvolution evolution;
  Dissipation dissipation;
  std::vector<Trajectory> trajectories;
  double solve_seconds = 0.0;

  const ScalarField& value() const { return evolution.initial(); }
};

/// Finite-horizon capture basin. Slices are kept for trajectory
/// reconstruction when `keep_slices` is set or the config lists starts.
ShortTermResult solve_short_term(const RunConfig& config, Execution execution = Execution::parallel,
                                 bool keep_slices = false);

struct LongTermResult {
  ScalarField kernel_obstacle;  // Gamma, level of C'
  ScalarField obstacle;         // g, level of K
  KernelResult kernel;
  std::vector<IterationRecord> kernel_log;
  std::optional<TargetLevel> target;         // absent when the kernel is empty
  std::optional<ValueEvolution> evolution;   // phase 2; absent when the kernel is empty
  Dissipation kernel_dissipation;
  Dissipation basin_dissipation;
  std::vector<Trajectory> trajectories;
  std::vector<std::string> warnings;
  double kernel_seconds = 0.0;
  double basin_seconds = 0.0;
};

/// Phase 1: discounted kernel problem on C'; phase 2: capture basin of the
/// kernel under the constraint K over [0, horizon].
LongTermResult solve_long_term(const RunConfig& config, Execution execution = Execution::parallel,
                               bool keep_slices = false);

struct ConvergenceRow {
  std::size_t nodes = 0;
  double dx = 0.0;
  double dt = 0.0;
  std::size_t steps = 0;
  double error = 0.0;  // max over coarse nodes of |v_M - v_ref|
};

struct ConvergenceTable {
  std::size_t reference = 0;
  double reference_dt = 0.0;
  std::vector<ConvergenceRow> rows;
};

/// max over the nodes of `coarse` of |coarse - fine| at the shared nodes.
/// Throws ConfigError when the grids do not nest.
double restriction_error(const ScalarField& coarse, const ScalarField& fine);

ConvergenceTable convergence_study(const RunConfig& config);

struct SweepResult {
  std::string parameter;
  std::vector<double> values;
  std::vector<double> areas;
  std::vector<ScalarField> fields;  // v(0, .) per value
};

SweepResult sweep_study(const RunConfig& config);

// ---------------------------------------------------------------------------
// Full runs: compute, write everything under `dir`, and always leave
// manifest.json behind (the manifest records the error before rethrowing).

RunManifest run_short_term(const RunConfig& config, const std::filesystem::path& dir,
                           const std::string& command = "capture-basin");
RunManifest run_long_term(const RunConfig& config, const std::filesystem::path& dir,
                          const std::string& command = "long-term");
/// Phase 1 only: kernel value, cross-section contours and iteration log.
RunManifest run_viability_kernel(const RunConfig& config, const std::filesystem::path& dir);
/// Solve plus feedback reconstruction from every configured start (default
/// (2.5, 2.5) in short-term mode).
RunManifest run_trajectory(const RunConfig& config, const std::filesystem::path& dir);
RunManifest run_convergence(const RunConfig& config, const std::filesystem::path& dir);
RunManifest run_sweep(const RunConfig& config, const std::filesystem::path& dir);

}  // namespace viab
