#include "cmcf/flat_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cmcf/error.hpp"
#include "cmcf/maxflow.hpp"

namespace cmcf {

namespace {

constexpr int kQuantumExponent = 30;
constexpr double kQuantaPerUnit = static_cast<double>(1LL << kQuantumExponent);
// Keeps every partial sum of the integer energy well inside int64.
constexpr double kMaxTotalQuanta = 0x1p61;

std::int64_t to_quanta(double units) {
  require(std::isfinite(units) && std::abs(units) < 0x1p52,
          "cut problem: term too large to quantise (reduce the box or increase tau)");
  return std::llround(units);
}

}  // namespace

CutProblem make_cut_problem(const BinarySet& e0, const SignedDistanceField& sd0, double tau,
                            const AdhesionField& beta) {
  require(tau > 0.0, "minimize_step: tau must be positive");
  require(sd0.grid() == e0.grid() && beta.grid() == e0.grid(), "cut problem: grid mismatch");
  require(!sd0.empty_interface(), "minimize_step: E0 has an empty relative boundary");
  const auto& g = e0.grid();
  const double h = g.h();

  CutProblem p{g};
  p.quantum = std::ldexp(h * h, -kQuantumExponent);
  p.dissipation.resize(g.size());
  p.unary.resize(g.size());
  // h^3 sd / (tau q) = h sd 2^30 / tau
  const double scale = h * kQuantaPerUnit / tau;
  double total = 0.0;
  for (std::size_t c = 0; c < g.size(); ++c) {
    p.dissipation[c] = to_quanta(sd0.at(c) * scale);
    p.unary[c] = p.dissipation[c];
    total += std::abs(static_cast<double>(p.dissipation[c]));
  }
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t c = g.index(i, j, 0);
      p.unary[c] += to_quanta(beta.at(i, j) * kQuantaPerUnit);
    }
  for (std::size_t k = 0; k < crofton::kPairKinds; ++k)
    p.pair_weight[k] = to_quanta(crofton::kPairWeight[k] * kQuantaPerUnit);
  total += static_cast<double>(g.size()) * 13.0 * static_cast<double>(p.pair_weight[4]) +
           static_cast<double>(g.nx()) * g.ny() * kQuantaPerUnit;
  require(total < kMaxTotalQuanta, "cut problem: energy range exceeds the integer budget");
  for (std::size_t c = 0; c < g.size(); ++c)
    if (e0.test(c)) p.e0_offset += p.dissipation[c];
  return p;
}

std::int64_t cut_energy(const CutProblem& p, const BinarySet& x) {
  require(x.grid() == p.grid, "cut_energy: grid mismatch");
  std::int64_t e = 0;
  const auto bits = x.bits();
  for (std::size_t c = 0; c < bits.size(); ++c)
    if (bits[c]) e += p.unary[c];
  crofton::for_each_pair(p.grid, [&](std::size_t a, std::size_t b, crofton::PairKind k) {
    if (bits[a] != bits[b]) e += p.pair_weight[static_cast<int>(k)];
  });
  return e;
}

std::int64_t cut_capillary(const CutProblem& p, const BinarySet& x) {
  require(x.grid() == p.grid, "cut_capillary: grid mismatch");
  std::int64_t e = 0;
  const auto& g = p.grid;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const std::size_t c = g.index(i, j, 0);
      if (x.test(c)) e += p.unary[c] - p.dissipation[c];
    }
  const auto bits = x.bits();
  crofton::for_each_pair(g, [&](std::size_t a, std::size_t b, crofton::PairKind k) {
    if (bits[a] != bits[b]) e += p.pair_weight[static_cast<int>(k)];
  });
  return e;
}

CutSolution solve_cut(const CutProblem& p, FixedLabels fixed) {
  const auto& g = p.grid;
  const std::size_t n = g.size();
  require(fixed.empty() || fixed.size() == n, "solve_cut: fixed label count does not match grid");
  auto label_of = [&](std::size_t c) -> std::int8_t { return fixed.empty() ? std::int8_t{-1} : fixed[c]; };

  std::vector<std::int32_t> node(n, -1);
  std::size_t free_cells = 0;
  for (std::size_t c = 0; c < n; ++c)
    if (label_of(c) < 0) node[c] = static_cast<std::int32_t>(free_cells++);

  std::vector<std::int64_t> cost_in(free_cells, 0), cost_out(free_cells, 0);
  std::int64_t constant = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (node[c] >= 0)
      cost_in[node[c]] += p.unary[c];
    else if (label_of(c) == 1)
      constant += p.unary[c];
  }

  MaxFlow flow(free_cells, free_cells * 13);
  crofton::for_each_pair(g, [&](std::size_t a, std::size_t b, crofton::PairKind k) {
    const std::int64_t w = p.pair_weight[static_cast<int>(k)];
    const std::int32_t na = node[a], nb = node[b];
    if (na >= 0 && nb >= 0) {
      flow.add_edge(static_cast<std::size_t>(na), static_cast<std::size_t>(nb), w, w);
    } else if (na >= 0) {
      (label_of(b) == 1 ? cost_out[na] : cost_in[na]) += w;
    } else if (nb >= 0) {
      (label_of(a) == 1 ? cost_out[nb] : cost_in[nb]) += w;
    } else if (label_of(a) != label_of(b)) {
      constant += w;
    }
  });
  for (std::size_t i = 0; i < free_cells; ++i) {
    const std::int64_t m = std::min(cost_in[i], cost_out[i]);
    constant += m;
    flow.add_terminal(i, cost_out[i] - m, cost_in[i] - m);
  }

  const std::int64_t value = flow.solve();
  const auto reach = flow.source_reachable();
  const auto coreach = flow.sink_coreachable();

  std::vector<std::uint8_t> lo(n), hi(n);
  for (std::size_t c = 0; c < n; ++c) {
    if (node[c] >= 0) {
      lo[c] = reach[node[c]];
      hi[c] = coreach[node[c]] ? 0 : 1;
    } else {
      lo[c] = hi[c] = static_cast<std::uint8_t>(label_of(c));
    }
  }
  CutSolution sol{BinarySet(g, std::move(lo)), BinarySet(g, std::move(hi))};
  sol.energy = value + constant;
  sol.stats.augmentations = flow.augmentations();
  sol.stats.cut_value = value;
  sol.stats.free_cells = free_cells;
  if (cut_energy(p, sol.minimal) != sol.energy || cut_energy(p, sol.maximal) != sol.energy)
    throw NumericalError("solve_cut: extreme cuts disagree with the max-flow value");
  return sol;
}

namespace {

// True when some free cell next to a frozen cell took the opposite label.
bool touches_band(const HalfSpaceGrid& g, const std::vector<std::int8_t>& fixed, const BinarySet& x) {
  bool touch = false;
  const auto bits = x.bits();
  crofton::for_each_pair(g, [&](std::size_t a, std::size_t b, crofton::PairKind) {
    if (touch) return;
    const bool fa = fixed[a] >= 0, fb = fixed[b] >= 0;
    if (fa == fb) return;
    if (bits[a] != bits[b]) touch = true;
  });
  return touch;
}

}  // namespace

namespace {

StepResult solve_step(const BinarySet& e0, const SignedDistanceField& sd, const CutProblem& problem,
                      double tau, const AdhesionField& beta, const StepOptions& opts) {
  const auto& g = e0.grid();
  double max_abs_sd = 0.0;
  for (double v : sd.values()) max_abs_sd = std::max(max_abs_sd, std::abs(v));
  double band = opts.initial_band < 0.0 ? std::max(4.0 * g.h(), 0.5 * std::sqrt(tau)) : opts.initial_band;
  if (band == 0.0) band = max_abs_sd;

  int expansions = 0;
  std::vector<std::int8_t> fixed(g.size());
  for (;;) {
    const bool all_free = band >= max_abs_sd;
    for (std::size_t c = 0; c < g.size(); ++c)
      fixed[c] = (all_free || std::abs(sd.at(c)) <= band) ? std::int8_t{-1}
                                                          : static_cast<std::int8_t>(e0.test(c));
    CutSolution sol = solve_cut(problem, fixed);
    if (!all_free && (touches_band(g, fixed, sol.minimal) || touches_band(g, fixed, sol.maximal))) {
      band *= 2.0;
      ++expansions;
      continue;
    }
    if (!interior_compatible(sol.maximal))
      throw NumericalError("minimize_step: minimiser reached the box margin; enlarge the box");
    StepResult r{std::move(sol.minimal), std::move(sol.maximal)};
    r.energy_quanta = sol.energy;
    r.maxflow_stats = sol.stats;
    r.maxflow_stats.band_expansions = expansions;
    r.breakdown = atw(r.minimal, e0, sd, tau, beta);
    r.energy = r.breakdown.total;
    return r;
  }
}

}  // namespace

StepResult minimize_step(const BinarySet& e0, double tau, const AdhesionField& beta,
                         const StepOptions& opts) {
  require(tau > 0.0, "minimize_step: tau must be positive");
  require(beta.grid() == e0.grid(), "minimize_step: grid mismatch");
  require(!e0.empty(), "minimize_step: E0 has an empty relative boundary");
  require_interior_compatible(e0, "minimize_step");
  const auto sd = signed_distance(e0, opts.interface_init);
  return solve_step(e0, sd, make_cut_problem(e0, sd, tau, beta), tau, beta, opts);
}

const BinarySet& FlatFlowTrajectory::at_time(double t) const {
  require(!steps.empty(), "trajectory is empty");
  const auto k = static_cast<std::size_t>(std::max(0.0, std::floor(t / tau + 1e-9)));
  return steps[std::min(k, steps.size() - 1)];
}

FlatFlowTrajectory run_flat_flow(const BinarySet& e0, double tau, int steps, const AdhesionField& beta,
                                 Extremal extremal, const StepOptions& opts) {
  require(tau > 0.0, "run_flat_flow: tau must be positive");
  require(steps >= 1, "run_flat_flow: steps must be >= 1");
  require(beta.grid() == e0.grid(), "run_flat_flow: grid mismatch");
  if (!e0.empty()) require_interior_compatible(e0, "run_flat_flow");

  FlatFlowTrajectory traj;
  traj.tau = tau;
  traj.extremal = extremal;
  traj.steps.push_back(e0);
  traj.energies.push_back(capillary(e0, beta));
  traj.step_energies.push_back(traj.energies.back().total);
  traj.lyapunov_ok.push_back(true);
  traj.capillary_quanta.push_back(0);
  if (e0.empty()) traj.extinction_step = 0;

  for (int k = 1; k <= steps; ++k) {
    const BinarySet& prev = traj.steps.back();
    if (prev.empty()) {
      traj.steps.push_back(prev);
      traj.energies.push_back({});
      traj.step_energies.push_back(0.0);
      traj.capillary_quanta.push_back(0);
      traj.lyapunov_ok.push_back(true);
      continue;
    }
    require_interior_compatible(prev, "run_flat_flow");
    const auto sd = signed_distance(prev, opts.interface_init);
    const auto problem = make_cut_problem(prev, sd, tau, beta);
    StepResult r = solve_step(prev, sd, problem, tau, beta, opts);
    BinarySet next = extremal == Extremal::minimal ? std::move(r.minimal) : std::move(r.maximal);

    // Exact Lyapunov chain in quanta, measured with the problem of this step.
    const std::int64_t c_prev = cut_capillary(problem, prev);
    const std::int64_t c_next = cut_capillary(problem, next);
    const std::int64_t f_next = cut_energy(problem, next) - problem.e0_offset;
    if (k == 1) traj.capillary_quanta[0] = c_prev;
    traj.lyapunov_ok.push_back(c_next <= f_next && f_next <= c_prev);
    traj.capillary_quanta.push_back(c_next);
    traj.step_energies.push_back(atw(next, prev, sd, tau, beta).total);
    traj.energies.push_back(capillary(next, beta));
    if (next.empty() && !traj.extinction_step) traj.extinction_step = static_cast<std::size_t>(k);
    traj.steps.push_back(std::move(next));
  }
  return traj;
}

HalfSpaceGrid DropletSpec::grid(double h) const { return HalfSpaceGrid::centered(half_width, height, h); }

BinarySet DropletSpec::rasterize(double h) const {
  const auto g = grid(h);
  BinarySet out(g);
  for (const auto& cap : caps)
    out = set_union(out, rasterize_cap(g, cap.rho, cap.center_height, cap.center_x, cap.center_y));
  return out;
}

GmmReport gmm_refine(const DropletSpec& initial, const GmmOptions& opts) {
  require(opts.tau0 > 0.0, "gmm_refine: tau0 must be positive");
  require(opts.levels >= 1, "gmm_refine: levels must be >= 1");
  require(opts.horizon > 0.0, "gmm_refine: horizon must be positive");
  require(opts.sample_count >= 1, "gmm_refine: sample_count must be >= 1");
  GmmReport report;
  for (int j = 0; j < opts.levels; ++j) {
    const double tau = std::ldexp(opts.tau0, -j);
    const double h = 0.5 * std::sqrt(tau);
    const auto g = initial.grid(h);
    require(g.size() <= opts.max_cells, "gmm_refine: level " + std::to_string(j) + " grid has " +
                                            std::to_string(g.size()) + " cells, above the memory cap");
    report.taus.push_back(tau);
    report.spacings.push_back(h);
  }
  for (int s = 1; s <= opts.sample_count; ++s)
    report.sample_times.push_back(opts.horizon * s / opts.sample_count);

  for (int j = 0; j < opts.levels; ++j) {
    const double tau = report.taus[j];
    const double h = report.spacings[j];
    const BinarySet e0 = initial.rasterize(h);
    const auto beta = AdhesionField::constant(e0.grid(), opts.beta);
    const int steps = static_cast<int>(std::floor(opts.horizon / tau + 1e-9));
    report.trajectories.push_back(run_flat_flow(e0, tau, std::max(steps, 1), beta, opts.extremal));
    const auto& traj = report.trajectories.back();
    if (traj.extinction_step) {
      std::ostringstream note;
      note << "level " << j << " (tau=" << tau << ") extinct at step " << *traj.extinction_step
           << " (t=" << static_cast<double>(*traj.extinction_step) * tau << ") before T=" << opts.horizon;
      report.notes.push_back(note.str());
    }
  }

  for (int j = 0; j + 1 < opts.levels; ++j) {
    std::vector<double> row;
    for (double t : report.sample_times)
      row.push_back(symmetric_difference_volume(report.trajectories[j].at_time(t),
                                                report.trajectories[j + 1].at_time(t)));
    report.level_symdiff.push_back(std::move(row));
  }
  for (std::size_t j = 1; j < report.level_symdiff.size(); ++j)
    for (std::size_t s = 0; s < report.sample_times.size(); ++s)
      if (report.level_symdiff[j][s] > report.level_symdiff[j - 1][s])
        report.cauchy_nonincreasing = false;
  return report;
}

}  // namespace cmcf
