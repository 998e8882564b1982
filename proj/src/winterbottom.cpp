#include "cmcf/winterbottom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cmcf/error.hpp"

namespace cmcf {

namespace {

void require_cosine(double beta0) {
  require(std::isfinite(beta0) && std::abs(beta0) < 1.0, "winterbottom: need |beta0| < 1");
}

void require_step3_cosine(double beta0) {
  require(std::isfinite(beta0) && beta0 > 0.0 && beta0 < 1.0, "winterbottom: need beta0 in (0, 1)");
}

}  // namespace

BinarySet WinterbottomShape::rasterize(const HalfSpaceGrid& grid) const {
  return rasterize_cap(grid, rho, center_height(), axis_x, axis_y);
}

CapMeasures cap_measures(double rho, double beta0) {
  require(std::isfinite(rho) && rho > 0.0, "cap_measures: rho must be positive");
  require_cosine(beta0);
  constexpr double pi = std::numbers::pi;
  const double r2 = rho * rho;
  const double up = 1.0 + beta0;
  CapMeasures m;
  // The cap has height rho (1 + beta0) above the plane.
  m.volume = pi / 3.0 * r2 * rho * up * up * (2.0 - beta0);
  m.spherical_area = 2.0 * pi * r2 * up;
  m.wetted_area = pi * r2 * (1.0 - beta0 * beta0);
  m.capillary_energy = m.spherical_area + beta0 * m.wetted_area;
  return m;
}

double isoperimetric_constant(double beta0) {
  const auto m = cap_measures(1.0, beta0);
  return m.capillary_energy / std::pow(m.volume, 2.0 / 3.0);
}

double farthest_distance(double rho, double beta0, double p_height) {
  const double c = rho * beta0;
  if (c >= p_height) return c - p_height + rho;  // top of the ball
  // Otherwise the farthest point is on the contact circle.
  return std::sqrt(rho * rho * (1.0 - beta0 * beta0) + p_height * p_height);
}

InscribedShape largest_inscribed(double r0, double p_height, double beta0) {
  require(std::isfinite(r0) && r0 > 0.0, "largest_inscribed: R0 must be positive");
  require(std::isfinite(p_height) && p_height >= 0.0, "largest_inscribed: p_height must be >= 0");
  require(p_height < r0, "largest_inscribed: ball does not reach the plane (p_height >= R0)");
  require_step3_cosine(beta0);
  InscribedShape out;
  out.formula_rho = (r0 + p_height) / (1.0 + beta0);
  out.shape.beta0 = beta0;
  // Relative slack for the rounding in the top-point identity.
  const double tol = 1e-12 * r0;
  if (farthest_distance(out.formula_rho, beta0, p_height) <= r0 + tol) {
    out.shape.rho = out.formula_rho;
    return out;
  }
  out.formula_contained = false;
  // Containment is monotone in rho (nested shapes), so bisect.
  double lo = 0.0, hi = out.formula_rho;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * out.formula_rho; ++it) {
    const double mid = 0.5 * (lo + hi);
    (farthest_distance(mid, beta0, p_height) <= r0 ? lo : hi) = mid;
  }
  out.shape.rho = lo;
  return out;
}

double shrink_constant(double beta0) {
  require_step3_cosine(beta0);
  const auto m = cap_measures(1.0, beta0);
  return 5.0 * m.capillary_energy * (1.0 + beta0) / (4.0 * m.volume * (1.0 - beta0));
}

double shrink_bound(double rho0, double tau, int k, double beta0) {
  require(rho0 > 0.0, "shrink_bound: rho0 must be positive");
  require(tau > 0.0, "shrink_bound: tau must be positive");
  require(k >= 0, "shrink_bound: k must be >= 0");
  if (k == 0) return rho0 * rho0;
  return std::max(0.0, rho0 * rho0 - shrink_constant(beta0) * k * tau);
}

}  // namespace cmcf
