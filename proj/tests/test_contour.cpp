#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "viab/contour.hpp"

using namespace viab;

TEST_SUITE("contour") {
  TEST_CASE("straight line") {
    const Grid g = make_grid({0, 0}, {1, 1}, {11, 11});
    const auto lines = extract_zero_levelset(sample_field(g, [](const Point& x) { return x[0] - 0.55; }));
    REQUIRE(lines.size() == 1);
    CHECK_FALSE(lines[0].closed);
    CHECK(lines[0].vertices.size() == 11);
    for (const Vertex2& v : lines[0].vertices) CHECK(v[0] == doctest::Approx(0.55));
  }

  TEST_CASE("circle is closed and within a cell diagonal") {
    const Grid g = make_grid({-1, -1}, {1, 1}, {65, 65});
    const auto lines =
        extract_zero_levelset(sample_field(g, [](const Point& x) { return std::hypot(x[0], x[1]) - 0.6; }));
    REQUIRE(lines.size() == 1);
    CHECK(lines[0].closed);
    const double diag = std::sqrt(2.0) * g.spacing(0);
    for (const Vertex2& v : lines[0].vertices) CHECK(std::abs(std::hypot(v[0], v[1]) - 0.6) <= diag);
  }

  TEST_CASE("no crossing gives no polylines") {
    const Grid g = make_grid({0, 0}, {1, 1}, {5, 5});
    CHECK(extract_zero_levelset(ScalarField(g, 1.0)).empty());
    CHECK(extract_zero_levelset(ScalarField(g, -1.0)).empty());
  }

  TEST_CASE("cross-section of a 3D field") {
    const Grid g = make_grid({0, 0, 0}, {1, 2, 3}, {5, 9, 7});
    const ScalarField f = sample_field(g, [](const Point& x) { return x[0] + 10 * x[1] + 100 * x[2]; });
    const ScalarField s = slice_field(f, 1, 1.1);
    REQUIRE(s.grid().dim() == 2);
    CHECK(s.grid().nodes(0) == 5);
    CHECK(s.grid().nodes(1) == 7);
    for (std::size_t k = 0; k < s.grid().size(); ++k) {
      const Point x = s.grid().node_position(k);
      CHECK(s[k] == doctest::Approx(x[0] + 11 + 100 * x[1]));
    }
    CHECK_THROWS(slice_field(f, 1, 5.0));
  }

  TEST_CASE("csv layout") {
    const Grid g = make_grid({0, 0}, {1, 1}, {3, 3});
    const auto lines = extract_zero_levelset(sample_field(g, [](const Point& x) { return x[0] - 0.25; }));
    const auto path = std::filesystem::temp_directory_path() / "viab_contour_test.csv";
    write_contour_csv(lines, path);
    std::ifstream in(path);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "polyline,vertex,x,y");
    CHECK(row.rfind("0,0,0.25", 0) == 0);
    std::filesystem::remove(path);
  }
}
