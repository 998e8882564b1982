#pragma once

#include <optional>
#include <vector>

#include "cmcf/grid.hpp"

namespace cmcf {

struct RZ {
  double r = 0.0;
  double z = 0.0;
};

// Generating curve of an axisymmetric droplet in the (r, z) half-plane,
// ordered from the axis marker (r = 0) to the contact marker (z = 0).
struct AxisymFront {
  std::vector<RZ> markers;
  double time = 0.0;
  bool extinct = false;

  // Truncated ball B_rho((0, center_height)) with n + 1 markers uniform in arclength.
  static AxisymFront cap(double rho, double center_height, int n);

  double length() const;
  double volume() const;          // solid of revolution
  double surface_area() const;    // of the curved part
  double wetted_area() const;     // disk on the plane
  double equivalent_radius() const;
};

struct SmoothFlowConfig {
  double beta = 0.0;              // contact cosine, nu . e3 = -beta at the contact marker
  double forcing = 0.0;           // v = -kappa + forcing
  double dt_safety = 0.2;         // dt = dt_safety * ds_min^2
  int redistribute_interval = 50; // steps; also when spacing ratio exceeds max_spacing_ratio
  double max_spacing_ratio = 1.3;
  double extinction_length = 1e-2;  // front length below which the flow counts as extinct
};

// Explicit front tracking of v = -(kappa_1 + kappa_2) + forcing up to
// t_target. Throws NumericalError on pinch-off or self-intersection.
AxisymFront evolve(const AxisymFront& front, const SmoothFlowConfig& cfg, double t_target);

// Normal velocity at each marker and the mean curvature used for it.
struct FrontKinematics {
  std::vector<double> curvature;  // kappa_1 + kappa_2, sphere of radius R -> 2/R
  std::vector<RZ> normal;         // outward
};
FrontKinematics kinematics(const AxisymFront& front, double beta);

// nu . e3 + beta at the contact marker from a one-sided quadratic fit.
double contact_residual(const AxisymFront& front, double beta);

// Integral of the normal velocity over the surface, dV/dt for the flow.
double volume_rate(const AxisymFront& front, const SmoothFlowConfig& cfg);

// sqrt(R0^2 - 4t), or nothing once t >= R0^2 / 4 (extinct).
std::optional<double> exact_hemisphere(double r0, double t);

// Normal offset by d (outward for d > 0), clipped or extended to the plane and
// resampled to the same marker count. Throws when the offset degenerates.
AxisymFront offset_front(const AxisymFront& front, double d);

// Forced barrier flows: G+ from the outer offset by r + s with forcing +s and
// contact cosine beta + s, G- from the inner offset with -s and beta - s.
struct BarrierFronts {
  AxisymFront minus;
  AxisymFront plus;
};
BarrierFronts barrier_flows(const AxisymFront& front, double r, double s, const SmoothFlowConfig& cfg,
                            double t_target);

// Cells whose center (rho_xy, z) lies inside the region bounded by the front,
// the axis and the plane.
BinarySet rasterize_front(const AxisymFront& front, const HalfSpaceGrid& grid, double axis_x = 0.0,
                          double axis_y = 0.0);

// Distance in the (r, z) plane from a point to the generating curve.
double distance_to_front(const AxisymFront& front, RZ p);

// Uniform-arclength resampling with Catmull-Rom interpolation.
AxisymFront redistribute(const AxisymFront& front, int n);

// True if two non-adjacent segments of the curve intersect.
bool self_intersects(const AxisymFront& front);

}  // namespace cmcf
