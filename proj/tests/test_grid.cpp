#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cmcf/error.hpp"
#include "cmcf/grid.hpp"

using namespace cmcf;

TEST_SUITE("grid") {
  TEST_CASE("index and cell are inverse") {
    const HalfSpaceGrid g(7, 5, 6, 0.1, -0.35, -0.25);
    for (std::size_t c = 0; c < g.size(); ++c) {
      const auto ci = g.cell(c);
      CHECK(g.index(ci.i, ci.j, ci.k) == c);
      const Vec3 p = g.center(c);
      const auto back = g.locate(p);
      CHECK(back.i == ci.i);
      CHECK(back.j == ci.j);
      CHECK(back.k == ci.k);
    }
  }

  TEST_CASE("centered grid covers the requested box") {
    const auto g = HalfSpaceGrid::centered(0.5, 0.75, 0.125);
    CHECK(g.nx() == 8);
    CHECK(g.nz() == 6);
    CHECK(g.x_min() == doctest::Approx(-0.5));
    CHECK(g.z_max() == doctest::Approx(0.75));
  }

  TEST_CASE("bad grids are rejected") {
    CHECK_THROWS_AS(HalfSpaceGrid(3, 8, 8, 0.1), PreconditionError);
    CHECK_THROWS_AS(HalfSpaceGrid(8, 8, 8, -0.1), PreconditionError);
  }

  TEST_CASE("set algebra") {
    const auto g = HalfSpaceGrid::centered(1.4, 1.2, 0.0625);
    const auto a = rasterize_cap(g, 0.5, 0.0);
    const auto b = rasterize_cap(g, 0.3, 0.0);
    CHECK(is_subset(b, a));
    CHECK_FALSE(is_subset(a, b));
    CHECK(set_union(a, b) == a);
    CHECK(set_intersection(a, b) == b);
    CHECK(symmetric_difference_count(a, b) == a.count() - b.count());
    CHECK(symmetric_difference_volume(a, b) == doctest::Approx((a.count() - b.count()) * g.cell_volume()));
    const auto c = rasterize_cap(g, 0.2, 0.0, 0.6, 0.0);
    CHECK(are_disjoint(b, c));
  }

  TEST_CASE("rasterised hemisphere volume converges") {
    double prev = 1.0;
    for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
      const auto g = HalfSpaceGrid::centered(0.6 + 8 * h, 0.6 + 8 * h, h);
      const double err = std::abs(volume(rasterize_cap(g, 0.5, 0.0)) - 2.0 * std::numbers::pi / 3.0 * 0.125);
      CHECK(err < prev);
      prev = err;
    }
    CHECK(prev < 2e-3);
  }

  TEST_CASE("interior margin") {
    const auto g = HalfSpaceGrid::centered(1.0, 1.0, 0.0625);
    CHECK(interior_compatible(rasterize_cap(g, 0.5, 0.0)));
    BinarySet e(g);
    e.set(0, 0, 0, true);
    CHECK_FALSE(interior_compatible(e));
    CHECK_THROWS_AS(rasterize_cap(g, 0.95, 0.0), PreconditionError);
  }
}
