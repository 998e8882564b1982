#include <doctest.h>

#include <cmath>
#include <numbers>

#include "cmcf/error.hpp"
#include "cmcf/flat_flow.hpp"

using namespace cmcf;

namespace {

double ball_radius(const BinarySet& e) { return std::cbrt(3.0 * volume(e) / (4.0 * std::numbers::pi)); }

}  // namespace

TEST_SUITE("flat_flow") {
  TEST_CASE("step is a minimiser and the energy decreases") {
    const double h = 1.0 / 24.0, tau = 4 * h * h;
    const auto g = HalfSpaceGrid::centered(0.85, 0.9, h);
    const auto e0 = rasterize_cap(g, 0.45, 0.1);
    const auto beta = AdhesionField::constant(g, 0.2);
    const auto s = minimize_step(e0, tau, beta);
    CHECK(is_subset(s.minimal, s.maximal));
    const auto sd = signed_distance(e0, InterfaceInit::subcell);
    const double f_min = atw(s.minimal, e0, sd, tau, beta).total;
    CHECK(s.energy == doctest::Approx(f_min));
    CHECK(atw(s.maximal, e0, sd, tau, beta).total == doctest::Approx(f_min));
    CHECK(f_min <= capillary(e0, beta).total + 1e-12);
    CHECK(capillary(s.minimal, beta).total <= f_min + 1e-12);
  }

  TEST_CASE("narrow band gives the same minimisers as the full grid") {
    const double h = 1.0 / 16.0, tau = 4 * h * h;
    const auto g = HalfSpaceGrid::centered(0.9, 0.9, h);
    const auto e0 = rasterize_cap(g, 0.5, 0.05, 0.05, -0.05);
    const auto beta = AdhesionField::constant(g, -0.3);
    for (auto init : {InterfaceInit::staircase, InterfaceInit::subcell}) {
      StepOptions opts;
      opts.interface_init = init;
      const auto banded = minimize_step(e0, tau, beta, opts);
      const auto full = solve_cut(make_cut_problem(e0, signed_distance(e0, init), tau, beta));
      CHECK(banded.minimal == full.minimal);
      CHECK(banded.maximal == full.maximal);
      CHECK(banded.energy_quanta == full.energy);
    }
  }

  TEST_CASE("one step from a ball follows the radius law") {
    const double h = 1.0 / 32.0, tau = 0.01;
    const double pad = 8 * h;
    const auto g = HalfSpaceGrid::centered(1.0 + pad, 2.0 + 3 * pad, h);
    const auto e0 = rasterize_cap(g, 1.0, 1.0 + 2 * pad);
    const auto s = minimize_step(e0, tau, AdhesionField::constant(g, 0.0));
    const double rho = ball_radius(s.minimal);
    CHECK(std::abs(rho - (1.0 + std::sqrt(1.0 - 8.0 * tau)) / 2.0) <= 3 * h);
    CHECK(rho * rho >= 1.0 - 5.0 * tau);
  }

  TEST_CASE("small droplets go extinct and stay empty") {
    const double h = 1.0 / 32.0;
    const auto g = HalfSpaceGrid::centered(0.5, 0.5, h);
    const auto e0 = rasterize_cap(g, 3 * h, 0.0);
    const auto traj = run_flat_flow(e0, 0.01, 6, AdhesionField::constant(g, 0.0));
    REQUIRE(traj.extinction_step.has_value());
    for (std::size_t k = *traj.extinction_step; k < traj.steps.size(); ++k) CHECK(traj.steps[k].empty());
  }

  TEST_CASE("trajectory bookkeeping") {
    const double h = 1.0 / 24.0, tau = 4 * h * h;
    const auto g = HalfSpaceGrid::centered(0.85, 0.9, h);
    const auto e0 = rasterize_cap(g, 0.5, 0.0);
    const auto beta = AdhesionField::constant(g, 0.0);
    const auto a = run_flat_flow(e0, tau, 4, beta);
    const auto b = run_flat_flow(e0, tau, 4, beta);
    REQUIRE(a.steps.size() == 5);
    CHECK(a.steps == b.steps);
    for (bool ok : a.lyapunov_ok) CHECK(ok);
    for (std::size_t k = 1; k < a.steps.size(); ++k) {
      CHECK(a.energies[k].total <= a.energies[k - 1].total + 1e-12);
      CHECK(is_subset(a.steps[k], a.steps[k - 1]));  // a hemisphere only shrinks
    }
    CHECK(&a.at_time(0.0) == &a.steps[0]);
    CHECK(&a.at_time(2.5 * tau) == &a.steps[2]);
    CHECK(&a.at_time(100.0) == &a.steps.back());
  }

  TEST_CASE("minimal flow stays inside the maximal flow") {
    const double h = 1.0 / 24.0, tau = 4 * h * h;
    const auto g = HalfSpaceGrid::centered(0.85, 0.9, h);
    const auto e0 = rasterize_cap(g, 0.45, -0.1);
    const auto beta = AdhesionField::constant(g, -0.4);
    const auto lo = run_flat_flow(e0, tau, 4, beta, Extremal::minimal);
    const auto hi = run_flat_flow(e0, tau, 4, beta, Extremal::maximal);
    for (std::size_t k = 0; k < lo.steps.size(); ++k) CHECK(is_subset(lo.steps[k], hi.steps[k]));
  }

  TEST_CASE("pinning with staircase distances") {
    // At tau = h^2 the curvature displacement of a radius-0.5 cap is a small
    // fraction of a cell; with staircase distances the set is its own
    // minimiser. Sub-cell distances resolve the motion at a larger step.
    const double h = 1.0 / 32.0;
    const auto g = HalfSpaceGrid::centered(0.7, 0.7, h);
    const auto e0 = rasterize_cap(g, 0.5, 0.0);
    const auto beta = AdhesionField::constant(g, 0.0);
    StepOptions stair;
    stair.interface_init = InterfaceInit::staircase;
    CHECK(minimize_step(e0, h * h, beta, stair).minimal == e0);
    CHECK(minimize_step(e0, 4 * h * h, beta).minimal != e0);
  }

  TEST_CASE("preconditions") {
    const double h = 1.0 / 16.0;
    const auto g = HalfSpaceGrid::centered(0.7, 0.7, h);
    const auto e0 = rasterize_cap(g, 0.3, 0.0);
    const auto beta = AdhesionField::constant(g, 0.0);
    CHECK_THROWS_AS(minimize_step(e0, 0.0, beta), PreconditionError);
    CHECK_THROWS_AS(minimize_step(BinarySet(g), 0.01, beta), PreconditionError);
    BinarySet edge(g);
    edge.set(0, 0, 0, true);
    CHECK_THROWS_AS(minimize_step(edge, 0.01, beta), PreconditionError);
  }

  TEST_CASE("refinement ladder") {
    DropletSpec d;
    d.caps = {{0.4, 0.0}};
    d.half_width = 0.7;
    d.height = 0.7;
    GmmOptions o;
    o.tau0 = 1.0 / 64.0;
    o.levels = 2;
    o.horizon = 0.02;
    o.sample_count = 4;
    const auto r = gmm_refine(d, o);
    REQUIRE(r.trajectories.size() == 2);
    CHECK(r.taus[1] == doctest::Approx(r.taus[0] / 2));
    for (int j = 0; j < 2; ++j) CHECK(r.spacings[j] == doctest::Approx(std::sqrt(r.taus[j]) / 2));
    CHECK(r.sample_times.size() == 4);
    CHECK(r.sample_times.back() == doctest::Approx(0.02));
    CHECK(r.level_symdiff.size() == 1);
    o.max_cells = 1000;
    CHECK_THROWS_AS(gmm_refine(d, o), PreconditionError);
  }
}
