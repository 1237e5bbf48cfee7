#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "viab/grid.hpp"

namespace viab {

/// Ghost-node rule at the grid faces.
///   linear:   v_ghost = 2 v_face - v_inner (one-sided slope continues outward)
///   constant: v_ghost = v_face
enum class Boundary { linear, constant };

/// Artificial-dissipation constants C_i: one per axis for the whole grid, or
/// one per node and axis (local Lax-Friedrichs).
struct Dissipation {
  Point global{};
  std::vector<Point> local;

  bool is_local() const noexcept { return !local.empty(); }
  const Point& at(std::size_t flat) const { return is_local() ? local[flat] : global; }
  /// Largest C_i per axis; this is what the CFL bound sees.
  Point max_per_axis() const {
    if (!is_local()) return global;
    Point m{};
    for (const Point& c : local)
      for (std::size_t i = 0; i < kMaxDim; ++i) m[i] = std::max(m[i], c[i]);
    return m;
  }
};

/// Values around one node: the node itself and both axis neighbors per axis.
struct NodeStencil {
  std::size_t dim = 0;
  double center = 0.0;
  Point minus{};
  Point plus{};
  Point spacing{};
};

/// H(x, (D+ + D-)/2) - sum_i (C_i / 2)(D+_i - D-_i).
template <class Ham>
double lf_numerical_hamiltonian(const NodeStencil& s, const Point& x, const Ham& ham, const Point& C) {
  Point costate{};
  double dissipation = 0.0;
  for (std::size_t i = 0; i < s.dim; ++i) {
    const double forward = (s.plus[i] - s.center) / s.spacing[i];
    const double backward = (s.center - s.minus[i]) / s.spacing[i];
    costate[i] = 0.5 * (forward + backward);
    dissipation += 0.5 * C[i] * (forward - backward);
  }
  return ham(x, costate) - dissipation;
}

/// Fills `s` for node `index` (flat offset `flat`) of field `v`.
inline void gather_stencil(const Grid& g, std::span<const double> v, const Index& index, std::size_t flat,
                           Boundary boundary, NodeStencil& s) {
  s.dim = g.dim();
  s.center = v[flat];
  for (std::size_t i = 0; i < g.dim(); ++i) {
    const std::size_t stride = g.stride(i);
    const std::size_t last = g.nodes(i) - 1;
    s.spacing[i] = g.spacing(i);
    if (index[i] > 0) {
      s.minus[i] = v[flat - stride];
    } else {
      s.minus[i] = boundary == Boundary::linear ? 2.0 * s.center - v[flat + stride] : s.center;
    }
    if (index[i] < last) {
      s.plus[i] = v[flat + stride];
    } else {
      s.plus[i] = boundary == Boundary::linear ? 2.0 * s.center - v[flat - stride] : s.center;
    }
  }
}

/// Aggregates over the freshly written field of one sweep.
struct SweepStats {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  double max_change = 0.0;        // max |out - in|
  std::size_t nonpositive = 0;    // nodes with out <= 0
  bool finite = true;
};

inline void accumulate(SweepStats& st, double before, double after) {
  st.min = std::min(st.min, after);
  st.max = std::max(st.max, after);
  st.max_change = std::max(st.max_change, std::abs(after - before));
  st.nonpositive += after <= 0.0 ? 1 : 0;
  st.finite = st.finite && std::isfinite(after);
}

/// Serial reference sweep: visits nodes in flat order, recomputing each
/// multi-index from scratch. out[k] = update(k, in[k], H_LF(k)).
template <class Ham, class Update>
SweepStats lf_sweep_reference(const Grid& g, std::span<const double> in, const Ham& ham,
                              const Dissipation& diss, Boundary boundary, Update&& update,
                              std::span<double> out) {
  SweepStats st;
  NodeStencil s;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Index index = g.unflatten(k);
    gather_stencil(g, in, index, k, boundary, s);
    const double hlf = lf_numerical_hamiltonian(s, g.node_position(index), ham, diss.at(k));
    out[k] = update(k, in[k], hlf);
    accumulate(st, in[k], out[k]);
  }
  return st;
}

/// OpenMP sweep over lines along the fastest axis. Every node is computed by
/// exactly the same arithmetic as the reference, so results are bitwise
/// identical to it for any thread count.
template <class Ham, class Update>
SweepStats lf_sweep(const Grid& g, std::span<const double> in, const Ham& ham, const Dissipation& diss,
                    Boundary boundary, Update&& update, std::span<double> out) {
  const std::size_t fast = g.dim() - 1;
  const std::size_t line_length = g.nodes(fast);
  const std::ptrdiff_t lines = static_cast<std::ptrdiff_t>(g.size() / line_length);

  double mn = std::numeric_limits<double>::infinity();
  double mx = -std::numeric_limits<double>::infinity();
  double change = 0.0;
  std::size_t nonpositive = 0;
  int finite = 1;

#pragma omp parallel for schedule(static) reduction(min : mn) reduction(max : mx, change) \
    reduction(+ : nonpositive) reduction(&& : finite)
  for (std::ptrdiff_t line = 0; line < lines; ++line) {
    const std::size_t base = static_cast<std::size_t>(line) * line_length;
    Index index = g.unflatten(base);
    Point x{};
    for (std::size_t i = 0; i < fast; ++i) x[i] = g.coordinate(i, index[i]);
    NodeStencil s;
    SweepStats local;
    for (std::size_t j = 0; j < line_length; ++j) {
      const std::size_t k = base + j;
      index[fast] = j;
      x[fast] = g.coordinate(fast, j);
      gather_stencil(g, in, index, k, boundary, s);
      const double hlf = lf_numerical_hamiltonian(s, x, ham, diss.at(k));
      out[k] = update(k, in[k], hlf);
      accumulate(local, in[k], out[k]);
    }
    mn = std::min(mn, local.min);
    mx = std::max(mx, local.max);
    change = std::max(change, local.max_change);
    nonpositive += local.nonpositive;
    finite = finite && local.finite;
  }
  return {mn, mx, change, nonpositive, finite != 0};
}

/// Sweep implementation selector for solvers.
enum class Execution { parallel, serial_reference };

template <class Ham, class Update>
SweepStats run_sweep(Execution exec, const Grid& g, std::span<const double> in, const Ham& ham,
                     const Dissipation& diss, Boundary boundary, Update&& update, std::span<double> out) {
  if (exec == Execution::serial_reference)
    return lf_sweep_reference(g, in, ham, diss, boundary, std::forward<Update>(update), out);
  return lf_sweep(g, in, ham, diss, boundary, std::forward<Update>(update), out);
}

}  // namespace viab
