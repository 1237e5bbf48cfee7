#include "viab/pipelines.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <fstream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "viab/errors.hpp"
#include "viab/field_io.hpp"

namespace viab {
namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

json point_json(const Point& p, std::size_t dim) {
  json out = json::array();
  for (std::size_t i = 0; i < dim; ++i) out.push_back(p[i]);
  return out;
}

Point to_grid_point(const std::vector<double>& v) {
  Point p{};
  for (std::size_t i = 0; i < v.size() && i < kMaxDim; ++i) p[i] = v[i];
  return p;
}

const std::vector<std::string>& axis_names(RunMode mode) {
  static const std::vector<std::string> two{"P", "I"};
  static const std::vector<std::string> three{"P", "q", "I"};
  return mode == RunMode::short_term ? two : three;
}

std::string dissipation_name(DissipationKind k) { return k == DissipationKind::global ? "global" : "local"; }

SliceRetention retention_for(const RunConfig& c, bool keep_slices) {
  return keep_slices || !c.trajectory.starts.empty() ? SliceRetention::every(c.trajectory.stride)
                                                     : SliceRetention::final_only();
}

std::vector<Trajectory> reconstruct_all(const RunConfig& c, const ValueEvolution& evo, const ScalarField& g,
                                        Phase phase) {
  const ControlBox box = phase == Phase::short_term ? ControlBox::short_term(c.model) : ControlBox::long_term(c.model);
  const std::vector<Control> lattice = control_lattice(box, c.trajectory.samples);
  const DynamicsFn f = model_dynamics(c.model, phase);
  ReconstructOptions opt;
  opt.step_dt = evo.slice_spacing();
  opt.admission_tol = c.trajectory.admission_tol;
  opt.integrator = c.trajectory.integrator;
  opt.extreme_velocities_only = c.trajectory.extreme_velocities_only;
  std::vector<Trajectory> out(c.trajectory.starts.size());
  // Independent paths; each one is sequential.
  std::vector<std::string> errors(out.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(out.size()); ++i) {
    try {
      out[i] = reconstruct(evo, g, to_grid_point(c.trajectory.starts[i]), f, lattice, opt);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const std::string& e : errors)
    if (!e.empty()) throw TrajectoryError(e);
  return out;
}

class RunWriter {
 public:
  RunWriter(const fs::path& dir, RunManifest& manifest) : dir_(dir), manifest_(manifest) {
    fs::create_directories(dir_);
  }

  void field(const ScalarField& f, const std::string& stem) {
    const auto [bin, meta] = write_field(f, dir_ / stem);
    add(bin.filename().string());
    add(meta.filename().string());
  }

  void contour(const std::vector<Polyline>& lines, const std::string& name) {
    write_contour_csv(lines, dir_ / name);
    add(name);
  }

  void trajectory(const Trajectory& t, const std::vector<std::string>& axes, const std::string& name) {
    write_trajectory_csv(t, axes, dir_ / name);
    add(name);
  }

  std::ofstream table(const std::string& name) {
    std::ofstream out(dir_ / name);
    if (!out) throw std::runtime_error("cannot open " + (dir_ / name).string() + " for writing");
    add(name);
    return out;
  }

  void add(const std::string& name) { manifest_.files.push_back(name); }

 private:
  fs::path dir_;
  RunManifest& manifest_;
};

template <class Body>
RunManifest guarded_run(const std::string& command, const RunConfig& config, const fs::path& dir, Body&& body) {
  RunManifest m;
  m.command = command;
  m.config = to_toml(config);
#ifdef _OPENMP
  m.timing["threads"] = omp_get_max_threads();
#else
  m.timing["threads"] = 1;
#endif
  const auto t0 = Clock::now();
  fs::create_directories(dir);
  try {
    RunWriter writer(dir, m);
    {
      std::ofstream echo(dir / "config.toml");
      echo << m.config;
      writer.add("config.toml");
    }
    body(m, writer);
  } catch (const std::exception& e) {
    m.status = "error";
    m.error = e.what();
    m.timing["total_seconds"] = seconds_since(t0);
    m.write(dir);
    throw;
  }
  m.timing["total_seconds"] = seconds_since(t0);
  m.write(dir);
  return m;
}

json dissipation_json(const Dissipation& d, std::size_t dim) { return point_json(d.max_per_axis(), dim); }

void describe_trajectories(const std::vector<Trajectory>& ts, json& settings) {
  json list = json::array();
  for (const Trajectory& t : ts) {
    double max_g = -std::numeric_limits<double>::infinity();
    std::size_t clamped = 0;
    for (std::size_t n = 0; n < t.size(); ++n) {
      max_g = std::max(max_g, t.levels[n]);
      clamped += t.clamped[n] ? 1 : 0;
    }
    list.push_back({{"start", point_json(t.states.front(), t.dim)},
                    {"end", point_json(t.states.back(), t.dim)},
                    {"steps", t.controls.size()},
                    {"max_g", max_g},
                    {"final_v", t.values.back()},
                    {"clamped_states", clamped}});
  }
  settings["trajectories"] = list;
}

void write_short_term(const RunConfig& c, const ShortTermResult& r, RunManifest& m, RunWriter& w) {
  const Grid& grid = r.value().grid();
  json& s = m.settings;
  s["grid_nodes"] = c.grid.nodes;
  s["dx"] = point_json({grid.spacing(0), grid.spacing(1), 0.0}, 2);
  s["horizon"] = c.solver.horizon;
  s["dt"] = r.evolution.dt;
  s["steps"] = r.evolution.steps;
  s["cfl"] = c.solver.cfl;
  s["dissipation"] = dissipation_name(c.solver.dissipation);
  s["C"] = dissipation_json(r.dissipation, 2);
  s["retained_slices"] = r.evolution.slices.size();
  s["value_min"] = r.value().min();
  s["value_max"] = r.value().max();
  s["basin_area"] = basin_area(r.value());
  m.timing["solve_seconds"] = r.solve_seconds;

  w.field(r.value(), "value_t0");
  w.field(r.obstacle, "constraint_level");
  w.field(r.target, "target_level");
  w.contour(extract_zero_levelset(r.value()), "basin_contour.csv");
  w.contour(extract_zero_levelset(r.target), "target_contour.csv");
  for (std::size_t i = 0; i < r.trajectories.size(); ++i)
    w.trajectory(r.trajectories[i], axis_names(c.mode), "trajectory_" + std::to_string(i) + ".csv");
  if (!r.trajectories.empty()) describe_trajectories(r.trajectories, s);
}

void write_cross_sections(const RunConfig& c, const ScalarField& field, const std::string& prefix, RunManifest& m,
                          RunWriter& w) {
  const Grid& g = field.grid();
  const std::pair<std::size_t, const char*> axes[] = {{1, "q"}, {2, "I"}};
  for (std::size_t k = 0; k < 2; ++k) {
    const auto [axis, name] = axes[k];
    const double at = c.cross_sections[k];
    if (at < g.lower(axis) || at > g.upper(axis)) {
      m.warnings.push_back(std::string("cross section ") + name + " = " + format_real(at) + " lies outside the grid");
      continue;
    }
    w.contour(extract_zero_levelset(slice_field(field, axis, at)), prefix + "_contour_" + name + ".csv");
  }
}

void write_kernel(const RunConfig& c, const LongTermResult& r, RunManifest& m, RunWriter& w) {
  const Grid& grid = r.kernel.value.grid();
  json& s = m.settings;
  s["grid_nodes"] = c.grid.nodes;
  s["dx"] = point_json({grid.spacing(0), grid.spacing(1), grid.spacing(2)}, 3);
  s["lambda"] = c.solver.lambda;
  s["kernel_dissipation"] = dissipation_name(c.solver.kernel_dissipation);
  s["kernel_C"] = dissipation_json(r.kernel_dissipation, 3);
  s["dtau"] = r.kernel.dtau;
  s["iterations"] = r.kernel.iterations;
  s["residual"] = r.kernel.residual;
  s["converged"] = r.kernel.converged;
  s["kernel_nodes"] = r.kernel.kernel_nodes.size();
  s["kernel_volume"] = basin_area(r.kernel.value);
  m.timing["kernel_seconds"] = r.kernel_seconds;

  w.field(r.kernel.value, "kernel_value");
  w.field(r.kernel_obstacle, "kernel_obstacle");
  write_cross_sections(c, r.kernel.value, "kernel", m, w);
  std::ofstream log = w.table("kernel_iterations.csv");
  log << "iteration,residual,kernel_nodes\n";
  for (const IterationRecord& rec : r.kernel_log)
    log << rec.iteration << ',' << format_real(rec.residual) << ',' << rec.kernel_nodes << '\n';
  for (const std::string& warning : r.warnings) m.warnings.push_back(warning);
  if (!r.kernel.converged) m.status = "not_converged";
}

void write_basin(const RunConfig& c, const LongTermResult& r, RunManifest& m, RunWriter& w) {
  if (!r.evolution) return;
  const ScalarField& v = r.evolution->initial();
  json& s = m.settings;
  s["horizon"] = c.solver.horizon;
  s["dt"] = r.evolution->dt;
  s["steps"] = r.evolution->steps;
  s["cfl"] = c.solver.cfl;
  s["dissipation"] = dissipation_name(c.solver.dissipation);
  s["C"] = dissipation_json(r.basin_dissipation, 3);
  s["kernel_cap"] = c.solver.kernel_cap;
  s["basin_volume"] = basin_area(v);
  s["value_min"] = v.min();
  s["value_max"] = v.max();
  m.timing["basin_seconds"] = r.basin_seconds;

  w.field(v, "basin_value");
  w.field(r.target->field, "kernel_target_level");
  w.field(r.obstacle, "constraint_level");
  write_cross_sections(c, v, "basin", m, w);
  for (std::size_t i = 0; i < r.trajectories.size(); ++i)
    w.trajectory(r.trajectories[i], axis_names(c.mode), "trajectory_" + std::to_string(i) + ".csv");
  if (!r.trajectories.empty()) describe_trajectories(r.trajectories, s);
}

LongTermResult solve_kernel(const RunConfig& c, Execution execution) {
  if (c.mode != RunMode::long_term) throw ConfigError("run.mode must be \"long_term\" for the kernel computation");
  const Grid grid = c.grid.build();
  LongTermResult r{c.target.sample(grid), c.constraint.sample(grid), KernelResult{ScalarField(grid), 0, 0.0, false, 0.0, {}, {}}, {}, {}, {}, {}, {}, {}, {}, 0.0, 0.0};
  r.kernel_dissipation = make_dissipation(grid, c.model, Phase::long_term, c.solver.kernel_dissipation);

  StationaryProblem pb{.hamiltonian = Hamiltonian3(c.model, c.solver.hamiltonian3_form),
                       .dissipation = r.kernel_dissipation,
                       .obstacle = r.kernel_obstacle,
                       .lambda = c.solver.lambda,
                       .cfl = c.solver.cfl,
                       .tol = c.solver.tol,
                       .max_iter = c.solver.max_iter,
                       .boundary = c.solver.boundary,
                       .execution = execution,
                       .record_history = false,
                       .on_iteration = [&](const IterationRecord& rec) { r.kernel_log.push_back(rec); },
                       .inspect = {}};
  const auto t0 = Clock::now();
  r.kernel = solve_stationary(pb);
  r.kernel_seconds = seconds_since(t0);
  if (!r.kernel.converged)
    r.warnings.push_back("kernel iteration stopped at max_iter = " + std::to_string(c.solver.max_iter) +
                         " with residual " + format_real(r.kernel.residual));
  if (r.kernel.kernel_nodes.empty()) r.warnings.push_back("viability kernel is empty; capture-basin phase skipped");
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------

json RunManifest::to_json() const {
  json out;
  out["command"] = command;
  out["status"] = status;
  if (!error.empty()) out["error"] = error;
  out["config"] = config;
  out["settings"] = settings;
  out["timing"] = timing;
  out["files"] = files;
  out["warnings"] = warnings;
  return out;
}

void RunManifest::write(const fs::path& dir) const {
  fs::create_directories(dir);
  std::ofstream out(dir / "manifest.json");
  if (!out) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
  out << to_json().dump(2) << '\n';
}

double basin_area(const ScalarField& field) {
  std::size_t inside = 0;
  for (double v : field.values()) inside += v <= 0.0 ? 1 : 0;
  return static_cast<double>(inside) / static_cast<double>(field.values().size()) * field.grid().volume();
}

Dissipation make_dissipation(const Grid& grid, const ModelParams& params, Phase phase, DissipationKind kind) {
  Dissipation d;
  if (kind == DissipationKind::global) {
    std::vector<double> lo(grid.dim()), hi(grid.dim());
    for (std::size_t i = 0; i < grid.dim(); ++i) {
      lo[i] = grid.lower(i);
      hi[i] = grid.upper(i);
    }
    d.global = dissipation_bounds(BoxSet::from_bounds(lo, hi), params, phase);
  } else {
    d.local.resize(grid.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(grid.size()); ++k)
      d.local[k] = local_dissipation(grid.node_position(static_cast<std::size_t>(k)), params, phase);
  }
  return d;
}

ShortTermResult solve_short_term(const RunConfig& c, Execution execution, bool keep_slices) {
  if (c.mode != RunMode::short_term) throw ConfigError("run.mode must be \"short_term\" for the capture basin");
  const Grid grid = c.grid.build();
  ShortTermResult r{c.constraint.sample(grid), c.target.sample(grid), {}, {}, {}, 0.0};
  r.dissipation = make_dissipation(grid, c.model, Phase::short_term, c.solver.dissipation);
  FiniteHorizonProblem pb{.hamiltonian = Hamiltonian2(c.model),
                          .dissipation = r.dissipation,
                          .obstacle = r.obstacle,
                          .terminal = r.target,
                          .horizon = c.solver.horizon,
                          .cfl = c.solver.cfl,
                          .dt = std::nullopt,
                          .boundary = c.solver.boundary,
                          .update = c.solver.obstacle,
                          .retention = retention_for(c, keep_slices),
                          .execution = execution,
                          .progress = {}};
  const auto t0 = Clock::now();
  r.evolution = solve_finite(pb);
  r.solve_seconds = seconds_since(t0);
  if (!c.trajectory.starts.empty())
    r.trajectories = reconstruct_all(c, r.evolution, r.obstacle, Phase::short_term);
  return r;
}

LongTermResult solve_long_term(const RunConfig& c, Execution execution, bool keep_slices) {
  LongTermResult r = solve_kernel(c, execution);
  if (r.kernel.kernel_nodes.empty()) return r;

  const Grid& grid = r.obstacle.grid();
  r.target = kernel_to_target_level(r.kernel, c.solver.kernel_cap);
  r.basin_dissipation = make_dissipation(grid, c.model, Phase::long_term, c.solver.dissipation);
  FiniteHorizonProblem pb{.hamiltonian = Hamiltonian3(c.model, c.solver.hamiltonian3_form),
                          .dissipation = r.basin_dissipation,
                          .obstacle = r.obstacle,
                          .terminal = r.target->field,
                          .horizon = c.solver.horizon,
                          .cfl = c.solver.cfl,
                          .dt = std::nullopt,
                          .boundary = c.solver.boundary,
                          .update = c.solver.obstacle,
                          .retention = retention_for(c, keep_slices),
                          .execution = execution,
                          .progress = {}};
  const auto t0 = Clock::now();
  r.evolution = solve_finite(pb);
  r.basin_seconds = seconds_since(t0);
  if (!c.trajectory.starts.empty())
    r.trajectories = reconstruct_all(c, *r.evolution, r.obstacle, Phase::long_term);
  return r;
}

double restriction_error(const ScalarField& coarse, const ScalarField& fine) {
  const Grid& gc = coarse.grid();
  const Grid& gf = fine.grid();
  if (gc.dim() != gf.dim()) throw ConfigError("restriction_error: dimension mismatch");
  Index ratio{};
  for (std::size_t a = 0; a < gc.dim(); ++a) {
    const std::size_t mc = gc.nodes(a) - 1, mf = gf.nodes(a) - 1;
    if (gc.lower(a) != gf.lower(a) || gc.upper(a) != gf.upper(a) || mc == 0 || mf % mc != 0)
      throw ConfigError("restriction_error: grids do not nest");
    ratio[a] = mf / mc;
  }
  double err = 0.0;
  for (std::size_t k = 0; k < gc.size(); ++k) {
    Index i = gc.unflatten(k);
    for (std::size_t a = 0; a < gc.dim(); ++a) i[a] *= ratio[a];
    err = std::max(err, std::abs(coarse[k] - fine.at(i)));
  }
  return err;
}

ConvergenceTable convergence_study(const RunConfig& config) {
  RunConfig c = config;
  c.trajectory.starts.clear();
  ConvergenceTable table;
  table.reference = c.convergence.reference;
  c.grid = config.grid.with_nodes(c.convergence.reference);
  const ShortTermResult ref = solve_short_term(c);
  table.reference_dt = ref.evolution.dt;
  for (std::size_t m : config.convergence.resolutions) {
    c.grid = config.grid.with_nodes(m);
    const ShortTermResult r = solve_short_term(c);
    const Grid& g = r.value().grid();
    table.rows.push_back({m, g.min_spacing(), r.evolution.dt, r.evolution.steps, restriction_error(r.value(), ref.value())});
  }
  return table;
}

SweepResult sweep_study(const RunConfig& config) {
  RunConfig c = config;
  c.trajectory.starts.clear();
  c.grid = config.grid.with_nodes(config.sweep.nodes);
  SweepResult out;
  out.parameter = config.sweep.parameter;
  for (double value : config.sweep.values) {
    c.model = with_parameter(config.model, config.sweep.parameter, value);
    ShortTermResult r = solve_short_term(c);
    out.values.push_back(value);
    out.areas.push_back(basin_area(r.value()));
    out.fields.push_back(r.value());
  }
  return out;
}

// ---------------------------------------------------------------------------

RunManifest run_short_term(const RunConfig& config, const fs::path& dir, const std::string& command) {
  return guarded_run(command, config, dir, [&](RunManifest& m, RunWriter& w) {
    write_short_term(config, solve_short_term(config), m, w);
  });
}

RunManifest run_trajectory(const RunConfig& config, const fs::path& dir) {
  RunConfig c = config;
  if (c.trajectory.starts.empty()) {
    if (c.mode != RunMode::short_term)
      throw ConfigError("trajectory.starts: at least one start is required in long_term mode");
    c.trajectory.starts = {{2.5, 2.5}};
  }
  return guarded_run("trajectory", c, dir, [&](RunManifest& m, RunWriter& w) {
    if (c.mode == RunMode::short_term) {
      write_short_term(c, solve_short_term(c, Execution::parallel, true), m, w);
    } else {
      const LongTermResult r = solve_long_term(c, Execution::parallel, true);
      write_kernel(c, r, m, w);
      write_basin(c, r, m, w);
    }
  });
}

RunManifest run_viability_kernel(const RunConfig& config, const fs::path& dir) {
  return guarded_run("viability-kernel", config, dir, [&](RunManifest& m, RunWriter& w) {
    write_kernel(config, solve_kernel(config, Execution::parallel), m, w);
  });
}

RunManifest run_long_term(const RunConfig& config, const fs::path& dir, const std::string& command) {
  return guarded_run(command, config, dir, [&](RunManifest& m, RunWriter& w) {
    const LongTermResult r = solve_long_term(config);
    write_kernel(config, r, m, w);
    write_basin(config, r, m, w);
  });
}

RunManifest run_convergence(const RunConfig& config, const fs::path& dir) {
  return guarded_run("converge", config, dir, [&](RunManifest& m, RunWriter& w) {
    const auto t0 = Clock::now();
    const ConvergenceTable table = convergence_study(config);
    m.timing["study_seconds"] = seconds_since(t0);
    m.settings["reference_nodes"] = table.reference;
    m.settings["reference_dt"] = table.reference_dt;
    std::ofstream out = w.table("convergence.csv");
    out << "nodes,dx,dt,steps,error\n";
    for (const ConvergenceRow& row : table.rows)
      out << row.nodes << ',' << format_real(row.dx) << ',' << format_real(row.dt) << ',' << row.steps << ','
          << format_real(row.error) << '\n';
    for (std::size_t i = 1; i < table.rows.size(); ++i)
      if (table.rows[i].nodes > table.rows[i - 1].nodes && !(table.rows[i].error < table.rows[i - 1].error))
        m.warnings.push_back("error does not decrease from " + std::to_string(table.rows[i - 1].nodes) + " to " +
                             std::to_string(table.rows[i].nodes) + " nodes");
  });
}

RunManifest run_sweep(const RunConfig& config, const fs::path& dir) {
  return guarded_run("sweep", config, dir, [&](RunManifest& m, RunWriter& w) {
    const auto t0 = Clock::now();
    const SweepResult sweep = sweep_study(config);
    m.timing["study_seconds"] = seconds_since(t0);
    m.settings["parameter"] = sweep.parameter;
    m.settings["nodes"] = config.sweep.nodes;
    std::vector<std::string> contours;
    for (std::size_t i = 0; i < sweep.values.size(); ++i) {
      const std::string name = "sweep_" + sweep.parameter + "_" + std::to_string(i) + "_contour.csv";
      w.contour(extract_zero_levelset(sweep.fields[i]), name);
      contours.push_back(name);
    }
    std::ofstream out = w.table("sweep_" + sweep.parameter + ".csv");
    out << "parameter,value,basin_area,contour_file\n";
    for (std::size_t i = 0; i < sweep.values.size(); ++i)
      out << sweep.parameter << ',' << format_real(sweep.values[i]) << ',' << format_real(sweep.areas[i]) << ','
          << contours[i] << '\n';
  });
}

}  // namespace viab
