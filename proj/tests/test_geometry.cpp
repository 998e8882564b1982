#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cmcf/crofton.hpp"
#include "cmcf/error.hpp"
#include "cmcf/geometry.hpp"

using namespace cmcf;

namespace {

// Discrete perimeter of an axis-aligned box of n1 x n2 x n3 cells standing on
// the plane, counted directly from the lattice: the mirrored box has
// n1 n2 (2 n3) cells and in direction d exactly N - prod(n_i - |d_i|) of them
// have their d-neighbour outside. Half of that, summed with the weights.
double box_perimeter_count(int n1, int n2, int n3, double h) {
  const double n = static_cast<double>(n1) * n2 * 2 * n3;
  const int m[3] = {n1, n2, 2 * n3};
  double sum = 0.0;
  for (const auto& d : crofton::kForward) {
    const int l1 = std::abs(d.di) + std::abs(d.dj) + std::abs(d.dk);
    const double w = l1 == 1 ? crofton::kAxisWeight : l1 == 2 ? crofton::kFaceWeight : crofton::kBodyWeight;
    const double inside = static_cast<double>(m[0] - std::abs(d.di)) * (m[1] - std::abs(d.dj)) * (m[2] - std::abs(d.dk));
    // Unordered cut pairs in the mirrored box are 2 (N - inside); halve for
    // the relative perimeter.
    sum += w * (n - inside);
  }
  return sum * h * h;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("signed distance of a hemisphere") {
    const double h = 1.0 / 32.0, r = 0.5;
    const auto g = HalfSpaceGrid::centered(r + 10 * h, r + 10 * h, h);
    const auto e = rasterize_cap(g, r, 0.0);
    const auto stair = signed_distance(e, InterfaceInit::staircase);
    const auto sub = signed_distance(e, InterfaceInit::subcell);
    double err_stair = 0.0, err_sub = 0.0;
    for (std::size_t c = 0; c < g.size(); ++c) {
      const double exact = norm(g.center(c)) - r;
      CHECK((stair.at(c) < 0.0) == e.test(c));
      if (std::abs(exact) > 4 * h) continue;
      err_stair = std::max(err_stair, std::abs(stair.at(c) - exact));
      err_sub = std::max(err_sub, std::abs(sub.at(c) - exact));
    }
    CHECK(err_stair <= 1.0 * h);
    CHECK(err_sub <= 0.5 * h);
    CHECK(err_sub < err_stair);
  }

  TEST_CASE("signed distance ignores the wetted face") {
    // A slab-like cap: cells right above the wetted disk are far from the
    // relative boundary even though they touch the plane.
    const double h = 1.0 / 16.0;
    const auto g = HalfSpaceGrid::centered(1.0, 1.0, h);
    const auto e = rasterize_cap(g, 0.5, 0.0);
    const auto sd = signed_distance(e);
    const auto c = g.locate({0.0, 0.0, 0.0});
    CHECK(sd.at(c.i, c.j, c.k) == doctest::Approx(-0.5).epsilon(0.15));
  }

  TEST_CASE("empty and full sets have an empty interface") {
    const auto g = HalfSpaceGrid::centered(0.5, 0.5, 0.0625);
    CHECK(signed_distance(BinarySet(g)).empty_interface());
  }

  TEST_CASE("box perimeter matches the lattice count") {
    const double h = 1.0 / 32.0;
    const auto g = HalfSpaceGrid::centered(0.5, 0.75, h);
    const auto box = rasterize(g, [](Vec3 p) { return std::abs(p.x) < 0.25 && std::abs(p.y) < 0.25 && p.z < 0.5; });
    const double p = perimeter(box);
    CHECK(p == doctest::Approx(box_perimeter_count(16, 16, 16, h)).epsilon(1e-12));
    CHECK(p == doctest::Approx(1.25).epsilon(0.03));
  }

  TEST_CASE("sphere perimeter") {
    const double h = 1.0 / 48.0, r = 0.35;
    const auto g = HalfSpaceGrid::centered(0.5, 1.0, h);
    const auto ball = rasterize_cap(g, r, 0.5);
    CHECK(perimeter(ball) == doctest::Approx(4.0 * std::numbers::pi * r * r).epsilon(0.03));
    // Hemisphere: the wetted disk is not part of the relative perimeter.
    const auto hemi = rasterize_cap(g, r, 0.0);
    CHECK(perimeter(hemi) == doctest::Approx(2.0 * std::numbers::pi * r * r).epsilon(0.03));
  }

  TEST_CASE("cut counts reproduce the perimeter") {
    const double h = 1.0 / 16.0;
    const auto g = HalfSpaceGrid::centered(0.75, 0.75, h);
    const auto e = rasterize_cap(g, 0.4, 0.1);
    const auto counts = cut_counts(e);
    double p = 0.0;
    for (std::size_t k = 0; k < crofton::kPairKinds; ++k) p += counts[k] * crofton::kPairWeight[k];
    CHECK(p * h * h == doctest::Approx(perimeter(e)));
  }

  TEST_CASE("perimeter is translation invariant") {
    const double h = 1.0 / 32.0;
    const auto g = HalfSpaceGrid::centered(1.0, 0.8, h);
    const double p0 = perimeter(rasterize_cap(g, 0.3, 0.1, -4 * h, 0.0));
    const double p1 = perimeter(rasterize_cap(g, 0.3, 0.1, 3 * h, 5 * h));
    CHECK(p0 == doctest::Approx(p1).epsilon(1e-12));
  }

  TEST_CASE("hausdorff distance") {
    const double h = 1.0 / 32.0;
    const auto g = HalfSpaceGrid::centered(0.8, 0.8, h);
    const auto a = rasterize_cap(g, 0.5, 0.0), b = rasterize_cap(g, 0.4, 0.0);
    CHECK(hausdorff(a, a).max == 0.0);
    const auto r = hausdorff(a, b);
    CHECK(r.max == doctest::Approx(0.1).epsilon(0.1 + h / 0.1));
    CHECK(r.max == std::max(r.forward, r.backward));
    CHECK_THROWS_AS(hausdorff(a, BinarySet(g)), PreconditionError);
  }

  TEST_CASE("offsets are monotone and approximate parallel sets") {
    const double h = 1.0 / 32.0;
    const auto g = HalfSpaceGrid::centered(0.8, 0.8, h);
    const auto e = rasterize_cap(g, 0.4, 0.0);
    const auto grow = offset_set(e, 0.1), shrink = offset_set(e, -0.1);
    CHECK(is_subset(e, grow.set));
    CHECK(is_subset(shrink.set, e));
    CHECK(is_subset(offset_set(e, -0.15).set, shrink.set));
    CHECK(volume(grow.set) == doctest::Approx(2.0 * std::numbers::pi / 3.0 * std::pow(0.5, 3)).epsilon(0.05));
    CHECK(volume(shrink.set) == doctest::Approx(2.0 * std::numbers::pi / 3.0 * std::pow(0.3, 3)).epsilon(0.05));
    CHECK(offset_set(e, -0.5).emptied);
    CHECK(offset_set(e, 0.45).touches_box);
  }

  TEST_CASE("boundary cells excludes the wetted face") {
    const double h = 1.0 / 16.0;
    const auto g = HalfSpaceGrid::centered(0.75, 0.75, h);
    const auto box = rasterize(g, [](Vec3 p) { return std::abs(p.x) < 0.25 && std::abs(p.y) < 0.25 && p.z < 0.25; });
    // 8 x 8 x 4 box: all cells but the 6 x 6 x 3 core that is away from the sides and top.
    CHECK(boundary_cells(box).size() == 8u * 8u * 4u - 6u * 6u * 3u);
  }
}
