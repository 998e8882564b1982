#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cmcf/geometry.hpp"
#include "cmcf/grid.hpp"

namespace cmcf {

// Relative adhesion coefficient beta on the bottom faces of the grid
// (nx * ny values, x-fastest) together with its coercivity margin eta:
// max |beta| <= 1 - 2 eta, eta in (0, 1/2).
class AdhesionField {
 public:
  AdhesionField(HalfSpaceGrid grid, std::vector<double> beta, double eta);

  // Constant field. When eta is omitted the largest admissible margin
  // (1 - |beta|) / 2 is used.
  static AdhesionField constant(const HalfSpaceGrid& grid, double beta);
  static AdhesionField constant(const HalfSpaceGrid& grid, double beta, double eta);

  const HalfSpaceGrid& grid() const { return grid_; }
  double eta() const { return eta_; }
  std::span<const double> values() const { return beta_; }
  double at(int i, int j) const { return beta_[static_cast<std::size_t>(j) * grid_.nx() + i]; }
  double max_abs() const;

  // CSV "i,j,beta" with a metadata line "eta=<value>".
  void write_csv(std::ostream& os) const;
  static AdhesionField read_csv(std::istream& is, const HalfSpaceGrid& grid);

 private:
  HalfSpaceGrid grid_;
  std::vector<double> beta_;
  double eta_;
};

struct EnergyBreakdown {
  double perimeter_term = 0.0;
  double adhesion_term = 0.0;
  double dissipation_term = 0.0;
  double total = 0.0;
};

// Sum in a fixed binary-tree order so totals are reproducible.
double pairwise_sum(std::span<const double> values);

// Capillary functional: relative perimeter + sum over wetted bottom cells of beta h^2.
EnergyBreakdown capillary(const BinarySet& e, const AdhesionField& beta);

// Capillary ATW functional relative to E0:
//   dissipation = (h^3 / tau) [ sum_{E} sd_E0 - sum_{E0} sd_E0 ].
EnergyBreakdown atw(const BinarySet& e, const BinarySet& e0, double tau, const AdhesionField& beta);
EnergyBreakdown atw(const BinarySet& e, const BinarySet& e0, const SignedDistanceField& sd0,
                    double tau, const AdhesionField& beta);

struct ContactSample {
  std::size_t cell = 0;
  double normal_z = 0.0;  // estimated nu_E . e3
  double beta = 0.0;
  double residual = 0.0;  // normal_z + beta
};

struct ContactAngleReport {
  std::vector<ContactSample> samples;
  double max_abs_residual = 0.0;
  double mean_abs_residual = 0.0;
  bool empty() const { return samples.empty(); }
};

// Young's law residual nu_E . e3 + beta along the discrete contact line, with
// nu_E estimated by a least-squares plane through the relative-boundary cells
// within radius 4h. Empty when E does not touch the plane.
ContactAngleReport contact_angle_measure(const BinarySet& e, const AdhesionField& beta);

}  // namespace cmcf
