#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace viab {

inline constexpr std::size_t kMaxDim = 3;

// Components past Grid::dim() are unused and kept at zero.
using Point = std::array<double, kMaxDim>;
using Index = std::array<std::size_t, kMaxDim>;

/// Uniform node-centered lattice over a box; node k on axis i sits at
/// lower[i] + k * spacing[i], so both box faces carry nodes.
class Grid {
 public:
  Grid() = default;  // empty placeholder; not a usable lattice
  Grid(std::span<const double> lower, std::span<const double> upper,
       std::span<const std::size_t> nodes);

  std::size_t dim() const noexcept { return dim_; }
  double lower(std::size_t axis) const { return lower_[axis]; }
  double upper(std::size_t axis) const { return upper_[axis]; }
  std::size_t nodes(std::size_t axis) const { return nodes_[axis]; }
  double spacing(std::size_t axis) const { return spacing_[axis]; }
  double min_spacing() const noexcept;

  /// Row-major stride: the last declared axis varies fastest.
  std::size_t stride(std::size_t axis) const { return stride_[axis]; }
  std::size_t size() const noexcept { return size_; }

  std::size_t flatten(const Index& index) const;
  Index unflatten(std::size_t flat) const;

  /// The last node is pinned to the upper face so it is exact regardless of rounding.
  double coordinate(std::size_t axis, std::size_t k) const {
    return k + 1 == nodes_[axis] ? upper_[axis] : lower_[axis] + static_cast<double>(k) * spacing_[axis];
  }

  /// Throws std::out_of_range for indices past the last node.
  Point node_position(const Index& index) const;
  Point node_position(std::size_t flat) const { return node_position(unflatten(flat)); }

  bool contains(const Point& x) const noexcept;
  Point clamp(const Point& x) const noexcept;
  double volume() const noexcept;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  std::size_t dim_ = 0;
  std::array<double, kMaxDim> lower_{};
  std::array<double, kMaxDim> upper_{};
  std::array<std::size_t, kMaxDim> nodes_{1, 1, 1};
  std::array<double, kMaxDim> spacing_{};
  std::array<std::size_t, kMaxDim> stride_{};
  std::size_t size_ = 0;
};

Grid make_grid(std::span<const double> lower, std::span<const double> upper,
               std::span<const std::size_t> nodes);

inline Grid make_grid(std::initializer_list<double> lower, std::initializer_list<double> upper,
                      std::initializer_list<std::size_t> nodes) {
  return make_grid(std::span<const double>(lower.begin(), lower.size()),
                   std::span<const double>(upper.begin(), upper.size()),
                   std::span<const std::size_t>(nodes.begin(), nodes.size()));
}

/// One value per grid node, row-major, tagged with the time (finite horizon)
/// or iteration count (stationary runs) it represents.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(Grid grid, double fill = 0.0, double time_tag = 0.0);
  ScalarField(Grid grid, std::vector<double> values, double time_tag = 0.0);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  std::vector<double>& storage() noexcept { return values_; }

  double operator[](std::size_t flat) const { return values_[flat]; }
  double& operator[](std::size_t flat) { return values_[flat]; }
  double at(const Index& index) const { return values_[grid_.flatten(index)]; }

  double time_tag() const noexcept { return time_tag_; }
  void set_time_tag(double t) noexcept { time_tag_ = t; }

  double min() const;
  double max() const;
  bool all_finite() const;

  friend bool operator==(const ScalarField&, const ScalarField&) = default;

 private:
  Grid grid_;
  std::vector<double> values_;
  double time_tag_ = 0.0;
};

/// Samples fn(position) at every node.
template <class Fn>
ScalarField sample_field(const Grid& grid, Fn&& fn, double time_tag = 0.0) {
  std::vector<double> values(grid.size());
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < grid.size(); ++k) values[k] = fn(grid.node_position(k));
  return ScalarField(grid, std::move(values), time_tag);
}

/// Multilinear interpolation of the 2^d node values around x. Exact at nodes.
/// Throws OutOfDomain when x lies outside the closed grid box.
double interpolate(const ScalarField& field, const Point& x);

}  // namespace viab
