#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cmcf/error.hpp"
#include "cmcf/winterbottom.hpp"

using namespace cmcf;

namespace {

constexpr double pi = std::numbers::pi;

// Capillary energy over volume^(2/3) of the cap of radius 1 whose center sits
// at height c, for adhesion b.
double cap_ratio(double c, double b) {
  const double area = 2.0 * pi * (1.0 + c), wet = pi * (1.0 - c * c);
  const double vol = pi * (1.0 + c) * (1.0 + c) * (2.0 - c) / 3.0;
  return (area + b * wet) / std::pow(vol, 2.0 / 3.0);
}

}  // namespace

TEST_SUITE("winterbottom") {
  TEST_CASE("hemisphere measures") {
    const auto m = cap_measures(1.0, 0.0);
    CHECK(m.volume == doctest::Approx(2.0 * pi / 3.0));
    CHECK(m.spherical_area == doctest::Approx(2.0 * pi));
    CHECK(m.wetted_area == doctest::Approx(pi));
    CHECK(m.capillary_energy == doctest::Approx(2.0 * pi));
  }

  TEST_CASE("closed form at beta0 = 0.5, rho = 0.5") {
    CHECK(cap_measures(0.5, 0.5).capillary_energy == doctest::Approx(2.65072).epsilon(1e-5));
  }

  TEST_CASE("measures scale with rho") {
    const auto a = cap_measures(1.0, -0.3), b = cap_measures(2.0, -0.3);
    CHECK(b.volume == doctest::Approx(8.0 * a.volume));
    CHECK(b.capillary_energy == doctest::Approx(4.0 * a.capillary_energy));
  }

  TEST_CASE("the Winterbottom cap minimises energy among caps of equal volume") {
    for (double b : {-0.8, -0.4, 0.0, 0.3, 0.7}) {
      double best = 1e9, arg = 0.0;
      for (int n = 1; n < 20000; ++n) {
        const double c = -1.0 + 2.0 * n / 20000.0;
        const double v = cap_ratio(c, b);
        if (v < best) {
          best = v;
          arg = c;
        }
      }
      CHECK(arg == doctest::Approx(b).epsilon(1e-3));
      CHECK(isoperimetric_constant(b) == doctest::Approx(best).epsilon(1e-6));
    }
    // Hemisphere: 2 pi / (2 pi / 3)^(2/3) = (18 pi)^(1/3).
    CHECK(isoperimetric_constant(0.0) == doctest::Approx(std::cbrt(18.0 * pi)));
  }

  TEST_CASE("domain") {
    CHECK_THROWS_AS(cap_measures(1.0, 1.5), PreconditionError);
    CHECK_THROWS_AS(cap_measures(-1.0, 0.0), PreconditionError);
    CHECK_THROWS_AS(largest_inscribed(1.0, 0.0, 0.0), PreconditionError);
    CHECK_THROWS_AS(largest_inscribed(0.5, 0.6, 0.4), PreconditionError);
  }

  TEST_CASE("largest inscribed shape fits in the ball") {
    for (double b : {0.1, 0.4, 0.8})
      for (double p : {0.0, 0.2, 0.45}) {
        const auto ins = largest_inscribed(0.5, p, b);
        CHECK(ins.shape.beta0 == b);
        CHECK(farthest_distance(ins.shape.rho, b, p) <= 0.5 + 1e-9);
        // Maximal: slightly larger shapes poke out.
        CHECK(farthest_distance(ins.shape.rho * 1.001, b, p) > 0.5);
        CHECK(ins.formula_rho == doctest::Approx((0.5 + p) / (1.0 + b)));
        if (ins.formula_contained) CHECK(ins.shape.rho == doctest::Approx(ins.formula_rho));
      }
  }

  TEST_CASE("farthest distance by sampling the boundary") {
    const double rho = 0.6, b = 0.3;
    for (double p : {0.0, 0.1, 0.3}) {
      double far = 0.0;
      for (int n = 0; n <= 4000; ++n) {
        // Points of the spherical part and of the wetted disk, in the (r, z) plane.
        const double phi = std::asin(-b) + (pi / 2 - std::asin(-b)) * n / 4000.0;
        far = std::max(far, std::hypot(rho * std::cos(phi), rho * b + rho * std::sin(phi) - p));
        const double rw = rho * std::sqrt(1 - b * b) * n / 4000.0;
        far = std::max(far, std::hypot(rw, p));
      }
      CHECK(farthest_distance(rho, b, p) == doctest::Approx(far).epsilon(1e-6));
    }
  }

  TEST_CASE("shrink bound") {
    const auto w = cap_measures(1.0, 0.2);
    CHECK(shrink_constant(0.2) == doctest::Approx(5.0 * w.capillary_energy * 1.2 / (4.0 * w.volume * 0.8)));
    CHECK(shrink_bound(0.5, 0.01, 0, 0.2) == doctest::Approx(0.25));
    CHECK(shrink_bound(0.5, 0.01, 1000, 0.2) == 0.0);
  }

  TEST_CASE("rasterised shape") {
    const double h = 1.0 / 32.0;
    const auto g = HalfSpaceGrid::centered(0.7, 0.9, h);
    const WinterbottomShape w{0.5, 0.4};
    CHECK(w.center_height() == doctest::Approx(0.2));
    CHECK(volume(w.rasterize(g)) == doctest::Approx(cap_measures(0.5, 0.4).volume).epsilon(0.02));
  }
}
