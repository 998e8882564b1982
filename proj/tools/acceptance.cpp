// Runs acceptance criteria 1-10 and prints one PASS/FAIL line for each.
// Exit status is 0 only when every selected criterion passes.

#include <CLI11.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>

#include "cmcf/verification.hpp"
#include "cmcf/winterbottom.hpp"
#include "oracle.hpp"

using namespace cmcf;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string f(const char* fmt, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, fmt, a, b, c, d);
  return buf;
}

bool all_named(const SuiteReport& r, const std::string& prefix) {
  bool any = false;
  for (const auto& c : r.cases)
    if (c.name.rfind(prefix, 0) == 0) {
      any = true;
      if (!c.pass) return false;
    }
  return any;
}

Outcome oracle_check() {
  std::mt19937_64 rng(2024);
  int mismatches = 0, instances = 0, max_free = 0;
  for (; instances < 120; ++instances) {
    const auto inst = oracle::random_instance(rng, 20);
    const auto sol = solve_cut(inst.problem, inst.fixed);
    const auto brute = oracle::exhaustive_min(inst.problem, inst.fixed, inst.free_cells);
    if (sol.energy != brute.energy || cut_energy(inst.problem, sol.minimal) != brute.energy) ++mismatches;
    max_free = std::max(max_free, static_cast<int>(inst.free_cells.size()));
  }
  return {mismatches == 0, f("%g instances (up to %g free cells), %g energy mismatches", instances, max_free,
                             mismatches)};
}

Outcome ball_step_law() {
  const double h = 1.0 / 64.0, tau = 0.01, r = 1.0;
  const double pad = (kInteriorMargin + 4) * h, zc = r + 2.0 * pad;
  const auto g = HalfSpaceGrid::centered(r + pad, zc + r + pad, h);
  const auto e0 = rasterize_cap(g, r, zc);
  const auto step = minimize_step(e0, tau, AdhesionField::constant(g, 0.0));
  const double rho = std::cbrt(3.0 * volume(step.minimal) / (4.0 * std::numbers::pi));
  const double law = (1.0 + std::sqrt(1.0 - 8.0 * tau)) / 2.0;
  const bool ok = std::abs(rho - law) <= 3.0 * h && rho * rho >= 1.0 - 5.0 * tau;
  return {ok, f("rho = %.5f, law %.5f, |diff| = %.2fh, rho^2 - (1 - 5 tau) = %.4f", rho, law,
                std::abs(rho - law) / h, rho * rho - (1.0 - 5.0 * tau))};
}

std::optional<ConsistencyResult> hemisphere_run;

Outcome consistency_hemisphere() {
  hemisphere_run = consistency_experiment(ConsistencyConfig::hemisphere());
  const auto& r = hemisphere_run->report;
  const bool mono = all_named(r, "hausdorff non-increasing");
  const bool fine = all_named(r, "finest hausdorff");
  return {r.pass(), std::string("monotone across levels: ") + (mono ? "yes" : "no") +
                        ", finest <= 3h at all times: " + (fine ? "yes" : "no") +
                        f(", worst finest Hausdorff %.2fh", r.fitted_constants["finest_max_hausdorff_over_h"].get<double>())};
}

Outcome consistency_winterbottom() {
  const auto res = consistency_experiment(ConsistencyConfig::winterbottom());
  const bool ok = all_named(res.report, "finest symdiff");
  return {ok, f("worst finest relative symdiff %.4f (bound 0.05)",
                res.report.fitted_constants["finest_max_symdiff_rel"].get<double>())};
}

Outcome comparison() {
  const auto r = comparison_suite({});
  const auto a = r.fitted_constants["inclusion_violations"].get<double>();
  const auto b = r.fitted_constants["disjointness_violations"].get<double>();
  return {r.pass() && a == 0 && b == 0, f("%g pairs, %g inclusion and %g disjointness violations",
                                           static_cast<double>(r.cases.size()), a, b)};
}

Outcome density() {
  const auto r = density_suite({});
  const auto* c = r.find("displacement exponent");
  return {c->pass, f("fitted exponent %.3f, theta_fit %.3f", c->measured["exponent"].get<double>(),
                     r.fitted_constants["theta_fit"].get<double>())};
}

Outcome holder() {
  if (!hemisphere_run) hemisphere_run = consistency_experiment(ConsistencyConfig::hemisphere());
  const auto& traj = hemisphere_run->gmm.trajectories.back();
  HolderSuiteConfig cfg;
  cfg.h = hemisphere_run->gmm.spacings.back();
  const auto r = holder_suite(traj, cfg);
  const auto* c = r.find("time exponent");
  return {c->pass, f("fitted exponent %.3f over %g pairs (%g pairs with no change)",
                     c->measured["exponent"].get<double>(), c->measured["fitted_pairs"].get<double>(),
                     c->measured["zero_pairs"].get<double>())};
}

Outcome isoperimetric() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double h = 1.0 / 32.0;
  const auto g = HalfSpaceGrid::centered(0.8, 1.0, h);
  double worst = 1e9;
  for (int n = 0; n < 500; ++n) {
    const double beta = 1.6 * (u(rng) - 0.5);
    BinarySet e(g);
    const int parts = 1 + static_cast<int>(u(rng) * 4);
    for (int k = 0; k < parts; ++k) {
      const double rho = 0.1 + 0.25 * u(rng);
      const double cx = (u(rng) - 0.5) * (1.0 - 2.0 * rho), cy = (u(rng) - 0.5) * (1.0 - 2.0 * rho);
      if (u(rng) < 0.7) {
        e = set_union(e, rasterize_cap(g, rho, (u(rng) - 0.5) * rho, cx, cy));
      } else {
        const double a = rho, b = rho * (0.5 + u(rng)), c = rho * (0.5 + u(rng));
        e = set_union(e, rasterize(g, [&](Vec3 p) {
                        return std::abs(p.x - cx) < a && std::abs(p.y - cy) < b && p.z < c;
                      }));
      }
    }
    if (e.empty()) continue;
    const double cap = capillary(e, AdhesionField::constant(g, beta)).total;
    worst = std::min(worst, cap / (isoperimetric_constant(beta) * std::pow(volume(e), 2.0 / 3.0)));
  }
  double worst_eq = 0.0;
  for (double beta : {-0.6, -0.3, 0.0, 0.3, 0.6})
    for (double rho : {0.35, 0.5}) {
      const auto e = WinterbottomShape{rho, beta}.rasterize(g);
      const double cap = capillary(e, AdhesionField::constant(g, beta)).total;
      worst_eq = std::max(worst_eq,
                          std::abs(cap / (isoperimetric_constant(beta) * std::pow(volume(e), 2.0 / 3.0)) - 1.0));
    }
  return {worst >= 0.94 && worst_eq <= 0.04,
          f("min ratio over 500 random sets %.4f (>= 0.94), Winterbottom deviation %.4f (<= 0.04)", worst, worst_eq)};
}

Outcome preservation() {
  const auto r = ball_suite({});
  const auto* in = r.find("stay inside");
  const auto* out = r.find("stay outside");
  return {in->pass && out->pass,
          f("stay inside %g, stay outside %g, theta0 lower bound %.3f", in->pass, out->pass,
            r.fitted_constants["theta0_lower_bound"].get<double>())};
}

Outcome barrier() {
  const auto r = barrier_suite({});
  const auto* c = r.find("hemisphere between forced barriers");
  return {c->pass && c->required,
          f("hypothesis holds %g, margins %.2fh inside and %.2fh outside (>= 2h)",
            c->measured["hypothesis_holds"].get<bool>(), c->measured["margin_inner_over_h"].get<double>(),
            c->measured["margin_outer_over_h"].get<double>())};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  app.add_option("--only", only, "criteria to run (default all)")->delimiter(',');
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"exact minimizer oracle", oracle_check},
      {"ball step law", ball_step_law},
      {"consistency, hemisphere", consistency_hemisphere},
      {"consistency, Winterbottom", consistency_winterbottom},
      {"comparison principles", comparison},
      {"density scaling", density},
      {"Hoelder continuity", holder},
      {"isoperimetric inequality", isoperimetric},
      {"ball preservation", preservation},
      {"barrier trapping", barrier},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d %s: %s; %s (%.1f s)\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
