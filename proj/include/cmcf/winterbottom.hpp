#pragma once

#include "cmcf/grid.hpp"

namespace cmcf {

// Ball of radius rho truncated by the plane so that its surface meets the
// plane with contact cosine beta0: center at height rho * beta0.
struct WinterbottomShape {
  double rho = 0.0;
  double beta0 = 0.0;
  double axis_x = 0.0;
  double axis_y = 0.0;

  double center_height() const { return rho * beta0; }
  BinarySet rasterize(const HalfSpaceGrid& grid) const;
};

struct CapMeasures {
  double volume = 0.0;
  double spherical_area = 0.0;
  double wetted_area = 0.0;
  double capillary_energy = 0.0;  // spherical_area + beta0 * wetted_area
};

CapMeasures cap_measures(double rho, double beta0);

// C(W_1) / |W_1|^(2/3).
double isoperimetric_constant(double beta0);

// Largest Winterbottom shape coaxial with p that fits in B_R0(p) with p at
// height p_height. The closed form (R0 + p_height) / (1 + beta0) is used when
// the resulting shape is contained in the ball; otherwise the containment
// constraint is solved directly and formula_contained is false.
struct InscribedShape {
  WinterbottomShape shape;
  double formula_rho = 0.0;
  bool formula_contained = true;
};

InscribedShape largest_inscribed(double r0, double p_height, double beta0);

// Largest distance from p = (0, 0, p_height) to a point of the coaxial W_rho.
double farthest_distance(double rho, double beta0, double p_height);

// 5 C(W_1) (1 + beta0) / (4 |W_1| (1 - beta0)).
double shrink_constant(double beta0);
// max(0, rho0^2 - shrink_constant * k * tau).
double shrink_bound(double rho0, double tau, int k, double beta0);

}  // namespace cmcf
