#include "viab/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace viab {

BoxSet BoxSet::from_bounds(std::span<const double> lower, std::span<const double> upper) {
  if (lower.size() != upper.size() || lower.empty() || lower.size() > kMaxDim)
    throw std::invalid_argument("box: bounds must share a dimension in 1..3");
  BoxSet box;
  box.dim = lower.size();
  for (std::size_t i = 0; i < box.dim; ++i) {
    if (!(upper[i] > lower[i])) throw std::invalid_argument("box: upper must exceed lower");
    box.lower[i] = lower[i];
    box.upper[i] = upper[i];
  }
  return box;
}

BoxSet BoxSet::from_center(std::span<const double> center, std::span<const double> half_width) {
  if (center.size() != half_width.size())
    throw std::invalid_argument("box: center and half-width dimensions differ");
  std::vector<double> lo(center.size()), hi(center.size());
  for (std::size_t i = 0; i < center.size(); ++i) {
    lo[i] = center[i] - half_width[i];
    hi[i] = center[i] + half_width[i];
  }
  return from_bounds(lo, hi);
}

double BoxSet::min_half_width() const {
  double r = half_width(0);
  for (std::size_t i = 1; i < dim; ++i) r = std::min(r, half_width(i));
  return r;
}

bool BoxSet::contains(const Point& x) const {
  for (std::size_t i = 0; i < dim; ++i)
    if (x[i] < lower[i] || x[i] > upper[i]) return false;
  return true;
}

double capped_box_level(const Point& x, const Point& center, double radius, double cap,
                        std::size_t dim) {
  double norm = 0.0;
  for (std::size_t i = 0; i < dim; ++i) norm = std::max(norm, std::abs(x[i] - center[i]));
  return std::min(cap, norm - radius);
}

double capped_box_level(const Point& x, const BoxSet& box, double cap) {
  double level = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < box.dim; ++i)
    level = std::max(level, std::abs(x[i] - box.center(i)) - box.half_width(i));
  return std::min(cap, level);
}

double signed_distance_box(const Point& x, const BoxSet& box, Norm norm) {
  double inside_depth = std::numeric_limits<double>::infinity();
  double outside_sq = 0.0;
  double outside_max = 0.0;
  bool outside = false;
  for (std::size_t i = 0; i < box.dim; ++i) {
    const double excess = std::abs(x[i] - box.center(i)) - box.half_width(i);
    if (excess > 0.0) {
      outside = true;
      outside_sq += excess * excess;
      outside_max = std::max(outside_max, excess);
    }
    inside_depth = std::min(inside_depth, -excess);
  }
  if (outside) return norm == Norm::euclidean ? std::sqrt(outside_sq) : outside_max;
  return -inside_depth;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Distance from every node to the nearest node with member[k] == true. Offsets
// are measured as |index difference| * spacing so this agrees bitwise with the sweep.
std::vector<double> brute_force_distance(const Grid& g, const std::vector<char>& member,
                                         double cap) {
  std::vector<Index> targets;
  for (std::size_t k = 0; k < member.size(); ++k)
    if (member[k]) targets.push_back(g.unflatten(k));

  std::vector<double> dist(g.size(), kInf);
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (member[k]) {
      dist[k] = 0.0;
      continue;
    }
    const Index x = g.unflatten(k);
    double best = cap;
    for (const Index& y : targets) {
      double d = 0.0;
      for (std::size_t i = 0; i < g.dim(); ++i) {
        const std::size_t r = x[i] > y[i] ? x[i] - y[i] : y[i] - x[i];
        d = std::max(d, static_cast<double>(r) * g.spacing(i));
      }
      best = std::min(best, d);
    }
    dist[k] = best;
  }
  return dist;
}

// Chebyshev distance is separable: dist(x) = min_y max_i |x_i - y_i| can be
// built one axis at a time with the 1D transform h_k = min_j max(|k-j| h, g_j).
std::vector<double> sweep_distance(const Grid& g, const std::vector<char>& member, double cap) {
  std::vector<double> dist(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) dist[k] = member[k] ? 0.0 : kInf;

  for (std::size_t axis = 0; axis < g.dim(); ++axis) {
    const std::size_t n = g.nodes(axis);
    const std::size_t stride = g.stride(axis);
    const std::size_t lines = g.size() / n;
    // Offsets of the first node of every line running along `axis`.
    std::vector<std::size_t> starts;
    starts.reserve(lines);
    for (std::size_t k = 0; k < g.size(); ++k)
      if ((k / stride) % n == 0) starts.push_back(k);

    const double h = g.spacing(axis);
    std::vector<double> out(g.size());
#pragma omp parallel for schedule(static)
    for (std::size_t l = 0; l < starts.size(); ++l) {
      const std::size_t base = starts[l];
      for (std::size_t k = 0; k < n; ++k) {
        double best = std::min(cap, dist[base + k * stride]);
        for (std::size_t r = 1; r < n; ++r) {
          const double reach = static_cast<double>(r) * h;
          if (reach >= best) break;
          if (k >= r) best = std::min(best, std::max(reach, dist[base + (k - r) * stride]));
          if (k + r < n) best = std::min(best, std::max(reach, dist[base + (k + r) * stride]));
        }
        out[base + k * stride] = best;
      }
    }
    dist.swap(out);
  }
  for (double& d : dist) d = std::min(d, cap);
  return dist;
}

}  // namespace

Redistanced redistance(const ScalarField& field, double cap, RedistanceMethod method) {
  const Grid& g = field.grid();
  if (g.size() == 0) throw std::invalid_argument("redistance: empty grid");
  if (!(cap > 0.0)) throw std::invalid_argument("redistance: cap must be positive");

  std::vector<char> inside(g.size()), outside(g.size());
  std::size_t inside_count = 0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    inside[k] = field[k] <= 0.0;
    outside[k] = !inside[k];
    inside_count += inside[k] ? 1 : 0;
  }
  if (inside_count == 0) return {ScalarField(g, cap, field.time_tag()), true};
  if (inside_count == g.size()) return {ScalarField(g, -cap, field.time_tag()), true};

  if (method == RedistanceMethod::automatic)
    method = g.size() < kRedistanceSweepThreshold ? RedistanceMethod::brute_force
                                                  : RedistanceMethod::axis_sweep;
  auto transform = method == RedistanceMethod::brute_force ? brute_force_distance : sweep_distance;
  const std::vector<double> to_inside = transform(g, inside, cap);
  const std::vector<double> to_outside = transform(g, outside, cap);

  ScalarField out(g, 0.0, field.time_tag());
  for (std::size_t k = 0; k < g.size(); ++k)
    out[k] = inside[k] ? -std::min(cap, to_outside[k]) : std::min(cap, to_inside[k]);
  return {std::move(out), false};
}

}  // namespace viab
