#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "cmcf/capillary.hpp"
#include "cmcf/error.hpp"
#include "cmcf/winterbottom.hpp"

using namespace cmcf;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_SUITE("capillary") {
  TEST_CASE("hemisphere energy") {
    const double h = 1.0 / 48.0, r = 0.4;
    const auto g = HalfSpaceGrid::centered(0.6, 0.6, h);
    const auto e = rasterize_cap(g, r, 0.0);
    const auto c = capillary(e, AdhesionField::constant(g, 0.0));
    CHECK(c.adhesion_term == 0.0);
    CHECK(c.total == doctest::Approx(2.0 * pi * r * r).epsilon(0.03));
  }

  TEST_CASE("adhesion term counts wetted cells") {
    const double h = 1.0 / 32.0;
    const auto g = HalfSpaceGrid::centered(0.6, 0.6, h);
    const auto e = rasterize_cap(g, 0.4, 0.1);
    std::size_t wet = 0;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) wet += e.test(i, j, 0);
    const auto c = capillary(e, AdhesionField::constant(g, -0.3));
    CHECK(c.adhesion_term == doctest::Approx(-0.3 * static_cast<double>(wet) * h * h));
    CHECK(c.total == doctest::Approx(c.perimeter_term + c.adhesion_term));
  }

  TEST_CASE("Winterbottom energy against the spherical-cap formulas") {
    const double h = 1.0 / 48.0, rho = 0.4;
    const auto g = HalfSpaceGrid::centered(0.6, 0.8, h);
    for (double b : {-0.5, 0.0, 0.5}) {
      const double c = rho * b;
      const double area = 2.0 * pi * rho * (rho + c), wet = pi * (rho * rho - c * c);
      const auto e = WinterbottomShape{rho, b}.rasterize(g);
      CHECK(capillary(e, AdhesionField::constant(g, b)).total == doctest::Approx(area + b * wet).epsilon(0.04));
    }
  }

  TEST_CASE("ATW dissipation against a direct sum") {
    const double h = 1.0 / 32.0, tau = 0.004;
    const auto g = HalfSpaceGrid::centered(0.7, 0.7, h);
    const auto e0 = rasterize_cap(g, 0.5, 0.0);
    const auto sd = signed_distance(e0);
    const auto beta = AdhesionField::constant(g, 0.2);
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 5; ++trial) {
      const double r = 0.42 + 0.02 * trial;
      const auto e = rasterize_cap(g, r, 0.03 * (trial - 2));
      long double direct = 0.0;
      for (std::size_t c = 0; c < g.size(); ++c)
        if (e.test(c) != e0.test(c)) direct += std::abs(sd.at(c));
      const auto a = atw(e, e0, sd, tau, beta);
      CHECK(a.dissipation_term >= 0.0);
      CHECK(a.dissipation_term == doctest::Approx(static_cast<double>(direct) * h * h * h / tau));
      CHECK(a.total == doctest::Approx(capillary(e, beta).total + a.dissipation_term));
    }
    CHECK(atw(e0, e0, tau, beta).dissipation_term == 0.0);
    CHECK_THROWS_AS(atw(e0, e0, 0.0, beta), PreconditionError);
  }

  TEST_CASE("adhesion field validation and CSV round trip") {
    const auto g = HalfSpaceGrid::centered(0.25, 0.25, 0.0625);
    CHECK_THROWS_AS(AdhesionField::constant(g, 1.0), PreconditionError);
    CHECK_THROWS_AS(AdhesionField::constant(g, 0.5, 0.3), PreconditionError);  // 0.5 > 1 - 0.6
    std::vector<double> v(static_cast<std::size_t>(g.nx()) * g.ny());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.01 * static_cast<double>(i) - 0.3;
    const AdhesionField f(g, v, 0.1);
    std::stringstream ss;
    f.write_csv(ss);
    const auto back = AdhesionField::read_csv(ss, g);
    CHECK(back.eta() == f.eta());
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) CHECK(back.at(i, j) == f.at(i, j));
    std::stringstream bad("eta=0.1\ni,j,beta\n0,0,0.1\n");
    CHECK_THROWS_AS(AdhesionField::read_csv(bad, g), PreconditionError);
  }

  TEST_CASE("pairwise sum is exact on integers") {
    std::vector<double> v;
    double naive = 0.0;
    for (int i = 0; i < 1000; ++i) {
      v.push_back(i % 7 - 3);
      naive += v.back();
    }
    CHECK(pairwise_sum(v) == naive);
  }

  TEST_CASE("contact angle of a rasterised Winterbottom shape") {
    const double h = 1.0 / 48.0;
    const auto g = HalfSpaceGrid::centered(0.6, 0.8, h);
    for (double b : {-0.4, 0.0, 0.4}) {
      const auto e = WinterbottomShape{0.45, b}.rasterize(g);
      const auto rep = contact_angle_measure(e, AdhesionField::constant(g, b));
      REQUIRE_FALSE(rep.empty());
      CHECK(rep.mean_abs_residual < 0.15);
    }
    const auto ball = rasterize_cap(g, 0.3, 0.4);
    CHECK(contact_angle_measure(ball, AdhesionField::constant(g, 0.0)).empty());
  }
}
