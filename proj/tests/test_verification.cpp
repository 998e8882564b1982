#include <doctest.h>

#include <cmath>

#include "cmcf/error.hpp"
#include "cmcf/verification.hpp"

using namespace cmcf;

TEST_SUITE("verification") {
  TEST_CASE("power-law fit recovers exponent and constant") {
    std::vector<double> x{0.01, 0.02, 0.04, 0.08}, y;
    for (double v : x) y.push_back(3.0 * std::pow(v, 0.5));
    const auto f = fit_power_law(x, y);
    CHECK(f.points == 4);
    CHECK(f.exponent == doctest::Approx(0.5));
    CHECK(std::exp(f.log_constant) == doctest::Approx(3.0));
    // Non-positive values are skipped.
    x.push_back(0.16);
    y.push_back(0.0);
    CHECK(fit_power_law(x, y).points == 4);
  }

  TEST_CASE("digest is stable and input sensitive") {
    const nlohmann::json a = {{"h", 0.5}, {"tau", 0.01}};
    CHECK(digest(a) == digest(nlohmann::json::parse(a.dump())));
    CHECK(digest(a) != digest({{"h", 0.5}, {"tau", 0.02}}));
    CHECK(digest(a).size() == 16);
  }

  TEST_CASE("report pass ignores informational cases") {
    SuiteReport r;
    r.name = "x";
    r.cases.push_back({"a"});
    SuiteCase info{"b"};
    info.pass = false;
    info.required = false;
    r.cases.push_back(info);
    CHECK(r.pass());
    CHECK(r.failures().empty());
    r.cases[0].pass = false;
    CHECK_FALSE(r.pass());
    REQUIRE(r.failures().size() == 1);
    CHECK(r.find("b") != nullptr);
    const auto j = r.to_json();
    CHECK(j["cases"].size() == 2);
    CHECK(j["pass"] == false);
    CHECK(j["cases"][0].contains("inputs_digest"));
  }

  TEST_CASE("holder suite on a synthetic square-root trajectory") {
    // Shrinking boxes whose volume loss grows like sqrt(t).
    // Displacement spans many cells so staircase rounding stays small.
    const double h = 1.0 / 64.0, tau = 0.01;
    const auto g = HalfSpaceGrid::centered(0.8, 0.5, h);
    FlatFlowTrajectory traj;
    traj.tau = tau;
    for (int k = 0; k <= 40; ++k) {
      const double w = 0.6 - 0.5 * std::sqrt(k * tau);
      traj.steps.push_back(rasterize(g, [w](Vec3 p) { return std::abs(p.x) < w && std::abs(p.y) < 0.3 && p.z < 0.3; }));
    }
    const auto r = holder_suite(traj, HolderSuiteConfig{});
    const auto* c = r.find("time exponent");
    REQUIRE(c != nullptr);
    CHECK(c->measured["exponent"].get<double>() > 0.4);
    CHECK(r.find("same time gives zero")->pass);
  }

  TEST_CASE("comparison suite, small") {
    ComparisonSuiteConfig cfg;
    cfg.nested_pairs = 3;
    cfg.disjoint_pairs = 3;
    const auto r = comparison_suite(cfg);
    CHECK(r.cases.size() == 6);
    CHECK(r.pass());
    const auto again = comparison_suite(cfg);
    CHECK(again.to_json() == r.to_json());
  }

  TEST_CASE("barrier suite reports the vacuous cases") {
    BarrierSuiteConfig cfg;
    cfg.h = 1.0 / 32.0;
    const auto r = barrier_suite(cfg);
    const auto* large = r.find("large step");
    REQUIRE(large != nullptr);
    CHECK(large->note == "hypothesis failed");
    CHECK_FALSE(large->required);
    CHECK_FALSE(r.find("collapsed barriers s=0")->required);
  }

  TEST_CASE("consistency config validation") {
    auto c = ConsistencyConfig::hemisphere();
    c.beta = 0.3;
    CHECK_THROWS_AS(consistency_experiment(c), PreconditionError);
    c = ConsistencyConfig::hemisphere();
    c.horizon = 0.2;
    CHECK_THROWS_AS(consistency_experiment(c), PreconditionError);
    c = ConsistencyConfig::hemisphere();
    c.shape = "cube";
    CHECK_THROWS_AS(consistency_experiment(c), PreconditionError);
  }

  TEST_CASE("single-level consistency makes no level assertions") {
    auto c = ConsistencyConfig::hemisphere();
    c.levels = 1;
    c.tau0 = 1.0 / 256.0;
    c.horizon = 0.01;
    c.sample_count = 2;
    const auto res = consistency_experiment(c);
    for (const auto& cs : res.report.cases) CHECK_FALSE(cs.required);
  }

  TEST_CASE("ball suite rejects beta0 below the adhesion") {
    BallSuiteConfig c;
    c.beta0 = 0.2;
    CHECK_THROWS_AS(ball_suite(c), PreconditionError);
  }
}
