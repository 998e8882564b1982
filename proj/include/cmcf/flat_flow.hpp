#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cmcf/capillary.hpp"
#include "cmcf/crofton.hpp"
#include "cmcf/geometry.hpp"
#include "cmcf/grid.hpp"

namespace cmcf {

// Binary energy whose minimisers are the discrete minimisers of the capillary
// ATW functional, in integer quanta q = 2^-30 h^2:
//   E(X) = sum_{c in X} unary[c] + sum_{stencil pairs cut by X} pair_weight[kind].
// unary[c] = round(h^3 sd_E0(c) / (tau q)) + [c in bottom layer] round(beta h^2 / q).
// Each rounding contributes at most q/2, so |q E(X) - (F(X) - const)| is bounded
// by q/2 times the number of nonzero terms.
struct CutProblem {
  HalfSpaceGrid grid;
  double quantum = 0.0;
  std::vector<std::int64_t> dissipation;  // round(h^3 sd / (tau q)), sign equals sign of sd
  std::vector<std::int64_t> unary;        // dissipation + adhesion quanta
  std::array<std::int64_t, crofton::kPairKinds> pair_weight{};
  std::int64_t e0_offset = 0;             // sum of dissipation over E0
};

CutProblem make_cut_problem(const BinarySet& e0, const SignedDistanceField& sd0, double tau,
                            const AdhesionField& beta);

// Integer energy of a labelling.
std::int64_t cut_energy(const CutProblem& p, const BinarySet& x);
// Integer capillary energy (pairs + adhesion quanta) of a labelling.
std::int64_t cut_capillary(const CutProblem& p, const BinarySet& x);

// Per-cell constraint used when solving: -1 free, 0 forced out, 1 forced in.
using FixedLabels = std::span<const std::int8_t>;

struct MaxflowStats {
  std::size_t augmentations = 0;
  std::int64_t cut_value = 0;   // max-flow value of the last solve
  std::size_t free_cells = 0;
  int band_expansions = 0;
};

struct CutSolution {
  BinarySet minimal;
  BinarySet maximal;
  std::int64_t energy = 0;  // integer energy, equal for both
  MaxflowStats stats;
};

// Exact minimisation of the integer energy over the free cells.
CutSolution solve_cut(const CutProblem& p, FixedLabels fixed = {});

enum class Extremal { minimal, maximal };

struct StepOptions {
  // Cells with |sd_E0| above the band are frozen to their E0 label; the band is
  // doubled until no extreme minimiser touches it. Zero means "all free".
  double initial_band = -1.0;  // negative: max(4h, sqrt(tau)/2)
  InterfaceInit interface_init = InterfaceInit::subcell;
};

struct StepResult {
  BinarySet minimal;
  BinarySet maximal;
  double energy = 0.0;              // F_beta(minimal; E0, tau)
  EnergyBreakdown breakdown;        // of the minimal minimiser
  std::int64_t energy_quanta = 0;   // cut energy, identical for both extremes
  MaxflowStats maxflow_stats;
};

// One minimizing-movement step. E0 = empty returns empty.
StepResult minimize_step(const BinarySet& e0, double tau, const AdhesionField& beta,
                         const StepOptions& opts = {});

struct FlatFlowTrajectory {
  double tau = 0.0;
  Extremal extremal = Extremal::minimal;
  std::vector<BinarySet> steps;              // E(tau, 0..K)
  std::vector<EnergyBreakdown> energies;     // capillary energy of each E(tau, k)
  std::vector<double> step_energies;         // F_beta(E_k; E_{k-1}); entry 0 is C_beta(E_0)
  std::vector<std::int64_t> capillary_quanta;
  std::vector<bool> lyapunov_ok;             // C(E_k) <= F(E_k; E_{k-1}) <= C(E_{k-1}), exact in quanta
  std::optional<std::size_t> extinction_step;

  // E(tau, floor(t / tau)), clamped to the last computed step.
  const BinarySet& at_time(double t) const;
};

FlatFlowTrajectory run_flat_flow(const BinarySet& e0, double tau, int steps, const AdhesionField& beta,
                                 Extremal extremal = Extremal::minimal, const StepOptions& opts = {});

// Initial droplet as a union of (possibly truncated) balls, rasterised on a
// grid of a given resolution.
struct CapSpec {
  double rho = 0.0;
  double center_height = 0.0;
  double center_x = 0.0;
  double center_y = 0.0;
};

struct DropletSpec {
  std::vector<CapSpec> caps;
  double half_width = 1.0;  // box [-half_width, half_width]^2 x [0, height]
  double height = 1.0;
  BinarySet rasterize(double h) const;
  HalfSpaceGrid grid(double h) const;
};

struct GmmOptions {
  double tau0 = 0.0;
  int levels = 1;
  double horizon = 0.0;
  double beta = 0.0;
  std::size_t max_cells = 40'000'000;
  Extremal extremal = Extremal::minimal;
  int sample_count = 8;
};

struct GmmReport {
  std::vector<double> taus;
  std::vector<double> spacings;
  std::vector<FlatFlowTrajectory> trajectories;
  std::vector<double> sample_times;                 // T/8, 2T/8, ..., T
  std::vector<std::vector<double>> level_symdiff;   // [j][s]: |F_j(t_s) delta F_{j+1}(t_s)|
  bool cauchy_nonincreasing = true;
  std::vector<std::string> notes;
};

// Flat flows at tau_j = tau0 2^-j on grids with h_j^2 = tau_j / 4.
GmmReport gmm_refine(const DropletSpec& initial, const GmmOptions& opts);

}  // namespace cmcf
