#pragma once

#include <cstddef>
#include <span>

#include "viab/grid.hpp"

namespace viab {

/// Axis-aligned box [lower, upper] in state units.
struct BoxSet {
  Point lower{};
  Point upper{};
  std::size_t dim = 0;

  static BoxSet from_bounds(std::span<const double> lower, std::span<const double> upper);
  static BoxSet from_center(std::span<const double> center, std::span<const double> half_width);

  double center(std::size_t axis) const { return 0.5 * (lower[axis] + upper[axis]); }
  double half_width(std::size_t axis) const { return 0.5 * (upper[axis] - lower[axis]); }
  double min_half_width() const;
  bool contains(const Point& x) const;
};

enum class Norm { euclidean, infinity };

/// min(cap, ||x - center||_inf - radius): negative strictly inside the cube,
/// zero on its faces, saturating at cap far away.
double capped_box_level(const Point& x, const Point& center, double radius, double cap,
                        std::size_t dim);

/// Per-axis generalization: min(cap, max_i(|x_i - c_i| - r_i)). Equals the
/// scalar form when all half-widths agree.
double capped_box_level(const Point& x, const BoxSet& box, double cap);

/// Positive distance outside the box, minus the distance to the complement inside.
double signed_distance_box(const Point& x, const BoxSet& box, Norm norm);

struct Redistanced {
  ScalarField field;
  /// True when {field <= 0} was empty or covered the whole grid.
  bool degenerate = false;
};

enum class RedistanceMethod { automatic, brute_force, axis_sweep };

/// Capped signed infinity-norm distance (state units) to the node set
/// {field <= 0}: positive nodes get min(cap, distance to the nearest member),
/// members get -min(cap, distance to the nearest non-member).
Redistanced redistance(const ScalarField& field, double cap,
                       RedistanceMethod method = RedistanceMethod::automatic);

/// Node count at or above which `automatic` switches to the axis sweep.
inline constexpr std::size_t kRedistanceSweepThreshold = 10000;

}  // namespace viab
