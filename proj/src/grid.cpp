#include "viab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "viab/errors.hpp"

namespace viab {

Grid::Grid(std::span<const double> lower, std::span<const double> upper,
           std::span<const std::size_t> nodes) {
  if (lower.size() != upper.size() || lower.size() != nodes.size())
    throw std::invalid_argument("grid: lower, upper and nodes must have the same length");
  if (lower.empty() || lower.size() > kMaxDim)
    throw std::invalid_argument("grid: dimension must be 1, 2 or 3");
  dim_ = lower.size();
  for (std::size_t i = 0; i < dim_; ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]))
      throw std::invalid_argument("grid: non-finite bound on axis " + std::to_string(i));
    if (!(upper[i] > lower[i]))
      throw std::invalid_argument("grid: degenerate box on axis " + std::to_string(i));
    if (nodes[i] < 2)
      throw std::invalid_argument("grid: axis " + std::to_string(i) + " needs at least 2 nodes");
    lower_[i] = lower[i];
    upper_[i] = upper[i];
    nodes_[i] = nodes[i];
    spacing_[i] = (upper[i] - lower[i]) / static_cast<double>(nodes[i] - 1);
    if (!(spacing_[i] > 0.0))
      throw std::invalid_argument("grid: spacing underflow on axis " + std::to_string(i));
  }
  size_ = 1;
  for (std::size_t i = dim_; i-- > 0;) {
    stride_[i] = size_;
    size_ *= nodes_[i];
  }
}

double Grid::min_spacing() const noexcept {
  double h = spacing_[0];
  for (std::size_t i = 1; i < dim_; ++i) h = std::min(h, spacing_[i]);
  return h;
}

std::size_t Grid::flatten(const Index& index) const {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < dim_; ++i) flat += index[i] * stride_[i];
  return flat;
}

Index Grid::unflatten(std::size_t flat) const {
  Index index{};
  for (std::size_t i = 0; i < dim_; ++i) {
    index[i] = flat / stride_[i];
    flat -= index[i] * stride_[i];
  }
  return index;
}

Point Grid::node_position(const Index& index) const {
  Point x{};
  for (std::size_t i = 0; i < dim_; ++i) {
    if (index[i] >= nodes_[i])
      throw std::out_of_range("grid: node index " + std::to_string(index[i]) +
                              " out of range on axis " + std::to_string(i));
    x[i] = coordinate(i, index[i]);
  }
  return x;
}

bool Grid::contains(const Point& x) const noexcept {
  for (std::size_t i = 0; i < dim_; ++i)
    if (!(x[i] >= lower_[i] && x[i] <= upper_[i])) return false;
  return true;
}

Point Grid::clamp(const Point& x) const noexcept {
  Point y = x;
  for (std::size_t i = 0; i < dim_; ++i) y[i] = std::clamp(x[i], lower_[i], upper_[i]);
  return y;
}

double Grid::volume() const noexcept {
  double v = 1.0;
  for (std::size_t i = 0; i < dim_; ++i) v *= upper_[i] - lower_[i];
  return v;
}

Grid make_grid(std::span<const double> lower, std::span<const double> upper,
               std::span<const std::size_t> nodes) {
  return Grid(lower, upper, nodes);
}

ScalarField::ScalarField(Grid grid, double fill, double time_tag)
    : grid_(grid), values_(grid.size(), fill), time_tag_(time_tag) {}

ScalarField::ScalarField(Grid grid, std::vector<double> values, double time_tag)
    : grid_(grid), values_(std::move(values)), time_tag_(time_tag) {
  if (values_.size() != grid_.size())
    throw std::invalid_argument("field: value count " + std::to_string(values_.size()) +
                                " does not match grid size " + std::to_string(grid_.size()));
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double interpolate(const ScalarField& field, const Point& x) {
  const Grid& g = field.grid();
  const std::size_t d = g.dim();
  std::array<std::size_t, kMaxDim> base{};
  std::array<double, kMaxDim> frac{};
  for (std::size_t i = 0; i < d; ++i) {
    double s = (x[i] - g.lower(i)) / g.spacing(i);
    const double last = static_cast<double>(g.nodes(i) - 1);
    const double slack = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, last);
    if (!(s >= -slack && s <= last + slack))
      throw OutOfDomain("interpolate: coordinate " + std::to_string(x[i]) + " outside [" +
                        std::to_string(g.lower(i)) + ", " + std::to_string(g.upper(i)) +
                        "] on axis " + std::to_string(i));
    const double nearest = std::round(s);
    if (std::abs(s - nearest) <= slack) s = nearest;
    s = std::clamp(s, 0.0, last);
    const double k = std::min(std::floor(s), last - 1.0);
    base[i] = static_cast<std::size_t>(k);
    frac[i] = s - k;
  }

  double result = 0.0;
  const std::size_t corners = std::size_t{1} << d;
  for (std::size_t c = 0; c < corners; ++c) {
    double w = 1.0;
    std::size_t flat = 0;
    for (std::size_t i = 0; i < d; ++i) {
      const bool up = (c >> i) & 1U;
      w *= up ? frac[i] : 1.0 - frac[i];
      flat += (base[i] + (up ? 1 : 0)) * g.stride(i);
    }
    if (w != 0.0) result += w * field[flat];
  }
  return result;
}

}  // namespace viab
