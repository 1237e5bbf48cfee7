#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <vector>

#include "viab/grid.hpp"

namespace viab {

using Vertex2 = std::array<double, 2>;

struct Polyline {
  std::vector<Vertex2> vertices;
  bool closed = false;
};

/// Zero level set {v = 0} of a 2D field as polylines (marching squares,
/// linear edge interpolation). Nodes with v <= 0 count as inside. Output order
/// is deterministic: chains start at the first unused segment in cell order.
std::vector<Polyline> extract_zero_levelset(const ScalarField& field);

/// 2D cross-section of a 3D field at coordinate `value` along `axis`, linearly
/// interpolated between the two bracketing node planes.
ScalarField slice_field(const ScalarField& field, std::size_t axis, double value);

/// CSV columns: polyline,vertex,x,y
void write_contour_csv(const std::vector<Polyline>& lines, const std::filesystem::path& path);

}  // namespace viab
