#include "viab/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "viab/field_io.hpp"

namespace viab {
namespace {

struct Trial {
  Point state;
  bool clamped;
};

Trial advance(const Grid& grid, const Point& x, const Control& w, double dt, const DynamicsFn& f,
              Integrator integrator) {
  Point y = x;
  const Point k1 = f(x, w);
  if (integrator == Integrator::euler) {
    for (std::size_t i = 0; i < grid.dim(); ++i) y[i] = x[i] + dt * k1[i];
  } else {
    Point mid = x;
    for (std::size_t i = 0; i < grid.dim(); ++i) mid[i] = x[i] + dt * k1[i];
    const Point k2 = f(mid, w);
    for (std::size_t i = 0; i < grid.dim(); ++i) y[i] = x[i] + 0.5 * dt * (k1[i] + k2[i]);
  }
  if (grid.contains(y)) return {y, false};
  return {grid.clamp(y), true};
}

double dot(const Point& a, const Point& b, std::size_t dim) {
  double s = 0.0;
  for (std::size_t i = 0; i < dim; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

std::vector<char> extreme_velocity_mask(const std::vector<Point>& vel, std::size_t dim) {
  const std::size_t n = vel.size();
  std::vector<char> keep(n, 0);
  if (n == 0) return keep;

  double scale = 0.0;
  for (const Point& v : vel)
    for (std::size_t i = 0; i < dim; ++i) scale = std::max(scale, std::abs(v[i]));
  const double tol = 1e-10 * std::max(scale, 1e-300);

  std::vector<std::size_t> distinct;
  for (std::size_t i = 0; i < n; ++i) {
    bool duplicate = false;
    for (std::size_t j : distinct) {
      double d = 0.0;
      for (std::size_t a = 0; a < dim; ++a) d = std::max(d, std::abs(vel[i][a] - vel[j][a]));
      duplicate = duplicate || d <= tol;
    }
    if (!duplicate) distinct.push_back(i);
  }

  // Orthonormal basis of the affine hull, anchored at the first distinct velocity.
  const Point& origin = vel[distinct.front()];
  std::vector<Point> basis;
  for (std::size_t i : distinct) {
    Point u{};
    for (std::size_t a = 0; a < dim; ++a) u[a] = vel[i][a] - origin[a];
    for (const Point& e : basis) {
      const double c = dot(u, e, dim);
      for (std::size_t a = 0; a < dim; ++a) u[a] -= c * e[a];
    }
    const double norm = std::sqrt(dot(u, u, dim));
    if (norm > 1e-8 * std::max(scale, 1e-300)) {
      for (std::size_t a = 0; a < dim; ++a) u[a] /= norm;
      basis.push_back(u);
    }
  }

  auto coords = [&](std::size_t i, std::size_t axis) {
    Point u{};
    for (std::size_t a = 0; a < dim; ++a) u[a] = vel[i][a] - origin[a];
    return dot(u, basis[axis], dim);
  };

  if (basis.empty()) {
    keep[distinct.front()] = 1;
  } else if (basis.size() == 1) {
    std::size_t lo = distinct.front(), hi = distinct.front();
    for (std::size_t i : distinct) {
      if (coords(i, 0) < coords(lo, 0)) lo = i;
      if (coords(i, 0) > coords(hi, 0)) hi = i;
    }
    keep[lo] = keep[hi] = 1;
  } else if (basis.size() == 2) {
    // Monotone-chain hull; collinear boundary points are not extreme.
    struct P2 {
      double x, y;
      std::size_t id;
    };
    std::vector<P2> pts;
    for (std::size_t i : distinct) pts.push_back({coords(i, 0), coords(i, 1), i});
    std::sort(pts.begin(), pts.end(), [](const P2& a, const P2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    const double eps = 1e-12 * std::max(scale * scale, 1e-300);
    auto cross = [](const P2& o, const P2& a, const P2& b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); };
    std::vector<P2> hull;
    for (int pass = 0; pass < 2; ++pass) {
      const std::size_t start = hull.size();
      for (const P2& p : pts) {
        while (hull.size() >= start + 2 && cross(hull[hull.size() - 2], hull.back(), p) <= eps) hull.pop_back();
        hull.push_back(p);
      }
      hull.pop_back();
      std::reverse(pts.begin(), pts.end());
    }
    for (const P2& p : hull) keep[p.id] = 1;
  } else {
    for (std::size_t i : distinct) keep[i] = 1;
  }
  return keep;
}

Trajectory reconstruct(const ValueEvolution& evo, const ScalarField& g, const Point& x0, const DynamicsFn& f,
                       const std::vector<Control>& lattice, const ReconstructOptions& opt) {
  if (evo.slices.empty()) throw TrajectoryError("reconstruct: empty value evolution");
  if (lattice.empty()) throw TrajectoryError("reconstruct: empty control lattice");
  const Grid& grid = g.grid();
  const double T = evo.terminal().time_tag();

  // Slices in increasing time; every r-th one (counted back from T) is a step target.
  std::vector<const ScalarField*> targets;
  if (T > 0.0) {
    if (!(opt.step_dt > 0.0)) throw TrajectoryError("reconstruct: step_dt must be > 0");
    const double ratio = opt.step_dt / evo.slice_spacing();
    if (std::abs(ratio - std::round(ratio)) > 1e-6 || std::round(ratio) < 1.0)
      throw TrajectoryError("reconstruct: step_dt is not a whole multiple of the slice spacing");
    const auto r = static_cast<std::size_t>(std::round(ratio));
    // slices run T -> 0; index 0 is t = T.
    for (std::size_t i = 0; i + 1 < evo.slices.size(); i += r) targets.push_back(&evo.slices[i]);
    std::reverse(targets.begin(), targets.end());
  }
  Trajectory traj;
  traj.dim = grid.dim();
  Point x = grid.contains(x0) ? x0 : grid.clamp(x0);
  const double v_start = interpolate(evo.initial(), x);
  if (v_start > opt.admission_tol && !opt.allow_nonviable_start) {
    std::ostringstream msg;
    msg << "reconstruct: start is outside the computed basin (v = " << v_start << ")";
    throw TrajectoryError(msg.str());
  }
  traj.times.push_back(0.0);
  traj.states.push_back(x);
  traj.values.push_back(v_start);
  traj.levels.push_back(interpolate(g, x));
  traj.clamped.push_back(grid.contains(x0) ? 0 : 1);

  std::size_t clamped_run = 0;
  for (const ScalarField* target : targets) {
    const ScalarField& v_next = *target;
    const double t_next = v_next.time_tag();
    const double dt = t_next - traj.times.back();

    double best_score = std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    Trial best_trial{x, false};
    bool all_clamped = true;
    std::vector<char> candidate(lattice.size(), 1);
    if (opt.extreme_velocities_only) {
      std::vector<Point> velocities;
      velocities.reserve(lattice.size());
      for (const Control& w : lattice) velocities.push_back(f(x, w));
      candidate = extreme_velocity_mask(velocities, grid.dim());
    }
    for (std::size_t c = 0; c < lattice.size(); ++c) {
      if (!candidate[c]) continue;
      const Trial trial = advance(grid, x, lattice[c], dt, f, opt.integrator);
      all_clamped = all_clamped && trial.clamped;
      const double score = std::max(interpolate(v_next, trial.state), interpolate(g, trial.state));
      if (score < best_score) {
        best_score = score;
        best = c;
        best_trial = trial;
      }
    }
    clamped_run = all_clamped ? clamped_run + 1 : 0;
    if (clamped_run >= opt.max_clamped_steps)
      throw TrajectoryError("reconstruct: every control left the grid box for " +
                            std::to_string(clamped_run) + " consecutive steps (t = " + std::to_string(t_next) + ")");

    x = best_trial.state;
    traj.controls.push_back(lattice[best]);
    traj.scores.push_back(best_score);
    traj.times.push_back(t_next);
    traj.states.push_back(x);
    traj.values.push_back(interpolate(v_next, x));
    traj.levels.push_back(interpolate(g, x));
    traj.clamped.push_back(best_trial.clamped ? 1 : 0);
  }
  return traj;
}

ControlSeries control_signals(const Trajectory& traj) {
  ControlSeries out;
  for (std::size_t n = 0; n < traj.controls.size(); ++n) {
    out.times.push_back(traj.times[n]);
    out.p.push_back(traj.controls[n].p);
    out.U.push_back(traj.controls[n].U);
    out.s.push_back(traj.controls[n].s);
  }
  return out;
}

void write_trajectory_csv(const Trajectory& traj, const std::vector<std::string>& axis_names,
                          const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << 't';
  for (std::size_t i = 0; i < traj.dim; ++i) out << ',' << (i < axis_names.size() ? axis_names[i] : "x" + std::to_string(i));
  out << ",p,U,s,v,g,clamped\n";
  for (std::size_t n = 0; n < traj.size(); ++n) {
    out << format_real(traj.times[n]);
    for (std::size_t i = 0; i < traj.dim; ++i) out << ',' << format_real(traj.states[n][i]);
    if (n < traj.controls.size()) {
      const Control& w = traj.controls[n];
      out << ',' << format_real(w.p) << ',' << format_real(w.U) << ',' << format_real(w.s);
    } else {
      out << ",,,";
    }
    out << ',' << format_real(traj.values[n]) << ',' << format_real(traj.levels[n]) << ','
        << static_cast<int>(traj.clamped[n]) << '\n';
  }
}

}  // namespace viab
