#include "viab/contour.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "viab/field_io.hpp"

namespace viab {
namespace {

struct Segment {
  std::size_t a;  // edge ids
  std::size_t b;
};

class EdgeIndexer {
 public:
  EdgeIndexer(const ScalarField& f) : f_(f), ny_(f.grid().nodes(1)) {}

  // Edge from node (i, j) along axis 0 or axis 1.
  std::size_t id(std::size_t i, std::size_t j, int axis) const { return (i * ny_ + j) * 2 + axis; }

  Vertex2 point(std::size_t edge) const {
    const int axis = static_cast<int>(edge % 2);
    const std::size_t node = edge / 2;
    const std::size_t i = node / ny_, j = node % ny_;
    const std::size_t i2 = axis == 0 ? i + 1 : i;
    const std::size_t j2 = axis == 1 ? j + 1 : j;
    const double va = value(i, j), vb = value(i2, j2);
    const double t = va == vb ? 0.5 : va / (va - vb);
    const Grid& g = f_.grid();
    const double xa = g.coordinate(0, i), ya = g.coordinate(1, j);
    const double xb = g.coordinate(0, i2), yb = g.coordinate(1, j2);
    return {xa + t * (xb - xa), ya + t * (yb - ya)};
  }

  double value(std::size_t i, std::size_t j) const { return f_[i * ny_ + j]; }

 private:
  const ScalarField& f_;
  std::size_t ny_;
};

}  // namespace

std::vector<Polyline> extract_zero_levelset(const ScalarField& field) {
  const Grid& g = field.grid();
  if (g.dim() != 2) throw std::invalid_argument("extract_zero_levelset: field must be 2D (slice 3D fields first)");
  const std::size_t nx = g.nodes(0), ny = g.nodes(1);
  const EdgeIndexer edges(field);
  auto inside = [&](std::size_t i, std::size_t j) { return edges.value(i, j) <= 0.0; };

  std::vector<Segment> segments;
  for (std::size_t i = 0; i + 1 < nx; ++i) {
    for (std::size_t j = 0; j + 1 < ny; ++j) {
      // Corners counter-clockwise from (i, j); edge k joins corner k and k+1.
      const bool c[4] = {inside(i, j), inside(i + 1, j), inside(i + 1, j + 1), inside(i, j + 1)};
      const std::size_t e[4] = {edges.id(i, j, 0), edges.id(i + 1, j, 1), edges.id(i, j + 1, 0),
                                edges.id(i, j, 1)};
      std::vector<std::size_t> crossed;
      for (int k = 0; k < 4; ++k)
        if (c[k] != c[(k + 1) % 4]) crossed.push_back(static_cast<std::size_t>(k));
      if (crossed.size() == 2) {
        segments.push_back({e[crossed[0]], e[crossed[1]]});
      } else if (crossed.size() == 4) {
        const double center = 0.25 * (edges.value(i, j) + edges.value(i + 1, j) + edges.value(i + 1, j + 1) +
                                      edges.value(i, j + 1));
        // Cut off the two corners whose state differs from the cell center.
        const bool center_inside = center <= 0.0;
        for (int k = 0; k < 4; ++k) {
          if (c[k] == center_inside) continue;
          // Corner k touches edges k-1 and k.
          segments.push_back({e[(k + 3) % 4], e[k]});
        }
      }
    }
  }

  std::unordered_map<std::size_t, std::vector<std::size_t>> by_edge;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    by_edge[segments[s].a].push_back(s);
    by_edge[segments[s].b].push_back(s);
  }

  std::vector<char> used(segments.size(), 0);
  auto next_segment = [&](std::size_t edge, std::size_t from) -> std::ptrdiff_t {
    for (std::size_t s : by_edge[edge])
      if (s != from && !used[s]) return static_cast<std::ptrdiff_t>(s);
    return -1;
  };

  std::vector<Polyline> lines;
  for (std::size_t start = 0; start < segments.size(); ++start) {
    if (used[start]) continue;
    used[start] = 1;
    std::deque<std::size_t> chain = {segments[start].a, segments[start].b};
    bool closed = false;

    // Forward from b, then backward from a.
    std::size_t seg = start;
    std::size_t edge = segments[start].b;
    for (std::ptrdiff_t s; (s = next_segment(edge, seg)) >= 0;) {
      seg = static_cast<std::size_t>(s);
      used[seg] = 1;
      edge = segments[seg].a == edge ? segments[seg].b : segments[seg].a;
      if (edge == chain.front()) {
        closed = true;
        break;
      }
      chain.push_back(edge);
    }
    if (!closed) {
      seg = start;
      edge = segments[start].a;
      for (std::ptrdiff_t s; (s = next_segment(edge, seg)) >= 0;) {
        seg = static_cast<std::size_t>(s);
        used[seg] = 1;
        edge = segments[seg].a == edge ? segments[seg].b : segments[seg].a;
        chain.push_front(edge);
      }
    }

    Polyline line;
    line.closed = closed;
    line.vertices.reserve(chain.size());
    for (std::size_t e : chain) line.vertices.push_back(edges.point(e));
    lines.push_back(std::move(line));
  }
  return lines;
}

ScalarField slice_field(const ScalarField& field, std::size_t axis, double value) {
  const Grid& g = field.grid();
  if (g.dim() != 3 || axis > 2) throw std::invalid_argument("slice_field: needs a 3D field and axis 0..2");
  if (value < g.lower(axis) || value > g.upper(axis))
    throw std::invalid_argument("slice_field: slice coordinate outside the grid");

  std::vector<double> lo, hi;
  std::vector<std::size_t> nodes;
  std::array<std::size_t, 2> keep{};
  for (std::size_t a = 0, m = 0; a < 3; ++a) {
    if (a == axis) continue;
    keep[m++] = a;
    lo.push_back(g.lower(a));
    hi.push_back(g.upper(a));
    nodes.push_back(g.nodes(a));
  }
  const Grid plane(lo, hi, nodes);

  const double s = (value - g.lower(axis)) / g.spacing(axis);
  const double last = static_cast<double>(g.nodes(axis) - 1);
  const double k0 = std::min(std::floor(s), last - 1.0);
  const double t = std::clamp(s - k0, 0.0, 1.0);
  const std::size_t base = static_cast<std::size_t>(k0);

  ScalarField out(plane, 0.0, field.time_tag());
  for (std::size_t i = 0; i < nodes[0]; ++i) {
    for (std::size_t j = 0; j < nodes[1]; ++j) {
      Index idx{};
      idx[keep[0]] = i;
      idx[keep[1]] = j;
      idx[axis] = base;
      const double a = field.at(idx);
      idx[axis] = base + 1;
      const double b = field.at(idx);
      out[i * nodes[1] + j] = t == 0.0 ? a : (t == 1.0 ? b : (1.0 - t) * a + t * b);
    }
  }
  return out;
}

void write_contour_csv(const std::vector<Polyline>& lines, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "polyline,vertex,x,y\n";
  for (std::size_t l = 0; l < lines.size(); ++l) {
    const auto& v = lines[l].vertices;
    const std::size_t count = v.size() + (lines[l].closed && !v.empty() ? 1 : 0);
    for (std::size_t k = 0; k < count; ++k) {
      const Vertex2& p = v[k % v.size()];
      out << l << ',' << k << ',' << format_real(p[0]) << ',' << format_real(p[1]) << '\n';
    }
  }
}

}  // namespace viab
