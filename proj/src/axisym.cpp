#include "cmcf/axisym.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cmcf/error.hpp"

namespace cmcf {

namespace {

constexpr double pi = std::numbers::pi;

RZ operator+(RZ a, RZ b) { return {a.r + b.r, a.z + b.z}; }
RZ operator-(RZ a, RZ b) { return {a.r - b.r, a.z - b.z}; }
RZ operator*(double s, RZ a) { return {s * a.r, s * a.z}; }
double dot(RZ a, RZ b) { return a.r * b.r + a.z * b.z; }
double len(RZ a) { return std::hypot(a.r, a.z); }

void require_front(const AxisymFront& f, const char* what) {
  require(f.markers.size() >= 3, std::string(what) + ": front needs at least 3 markers");
}

// Tangent along the traversal (axis -> contact) for contact cosine beta.
RZ contact_tangent(double beta) { return {-beta, -std::sqrt(1.0 - beta * beta)}; }

// Reflection of the second-last marker that makes the contact tangent exact.
RZ contact_ghost(const std::vector<RZ>& x, double beta) {
  const RZ t = contact_tangent(beta);
  const RZ last = x.back();
  const RZ d = x[x.size() - 2] - last;
  return last + d - 2.0 * dot(d, t) * t;
}

struct Derivs {
  RZ d1;
  RZ d2;
};

// First and second derivatives in arclength from three points at
// distances h1 (behind) and h2 (ahead).
Derivs derivs(RZ prev, RZ mid, RZ next) {
  const double h1 = len(mid - prev), h2 = len(next - mid);
  const double den = h1 * h2 * (h1 + h2);
  Derivs d;
  d.d1 = (1.0 / den) * (h1 * h1 * next - h2 * h2 * prev + (h2 * h2 - h1 * h1) * mid);
  d.d2 = (2.0 / den) * (h1 * next - (h1 + h2) * mid + h2 * prev);
  return d;
}

// Derivative at the last point of the quadratic through the last three.
RZ end_derivative(const std::vector<RZ>& x) {
  const std::size_t n = x.size();
  const RZ f0 = x[n - 1], f1 = x[n - 2], f2 = x[n - 3];
  const double a = len(f0 - f1), b = len(f1 - f2);
  return (1.0 / a + 1.0 / (a + b)) * f0 - ((a + b) / (a * b)) * f1 + (a / (b * (a + b))) * f2;
}

double orient(RZ a, RZ b, RZ c) { return (b.r - a.r) * (c.z - a.z) - (b.z - a.z) * (c.r - a.r); }

bool segments_cross(RZ a, RZ b, RZ c, RZ d) {
  const double o1 = orient(a, b, c), o2 = orient(a, b, d);
  const double o3 = orient(c, d, a), o4 = orient(c, d, b);
  return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

RZ catmull_rom(RZ p0, RZ p1, RZ p2, RZ p3, double u) {
  const double u2 = u * u, u3 = u2 * u;
  return 0.5 * (2.0 * p1 + u * (p2 - p0) + u2 * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) +
                u3 * (3.0 * p1 - p0 - 3.0 * p2 + p3));
}

double spacing_ratio(const std::vector<RZ>& x) {
  double lo = INFINITY, hi = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double l = len(x[i] - x[i - 1]);
    lo = std::min(lo, l);
    hi = std::max(hi, l);
  }
  return hi / lo;
}

double min_spacing(const std::vector<RZ>& x) {
  double lo = INFINITY;
  for (std::size_t i = 1; i < x.size(); ++i) lo = std::min(lo, len(x[i] - x[i - 1]));
  return lo;
}

}  // namespace

AxisymFront AxisymFront::cap(double rho, double center_height, int n) {
  require(rho > 0.0, "AxisymFront::cap: rho must be positive");
  require(std::abs(center_height) < rho, "AxisymFront::cap: ball must cross the plane");
  require(n >= 2, "AxisymFront::cap: need at least 3 markers");
  const double theta_c = std::acos(-center_height / rho);
  AxisymFront f;
  f.markers.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    const double th = theta_c * i / n;
    f.markers[i] = {rho * std::sin(th), center_height + rho * std::cos(th)};
  }
  f.markers.front().r = 0.0;
  f.markers.back().z = 0.0;
  return f;
}

double AxisymFront::length() const {
  double l = 0.0;
  for (std::size_t i = 1; i < markers.size(); ++i) l += len(markers[i] - markers[i - 1]);
  return l;
}

double AxisymFront::volume() const {
  double v = 0.0;
  for (std::size_t i = 1; i < markers.size(); ++i) {
    const RZ a = markers[i - 1], b = markers[i];
    v += pi / 3.0 * (a.r * a.r + a.r * b.r + b.r * b.r) * (a.z - b.z);
  }
  return v;
}

double AxisymFront::surface_area() const {
  double s = 0.0;
  for (std::size_t i = 1; i < markers.size(); ++i) {
    const RZ a = markers[i - 1], b = markers[i];
    s += pi * (a.r + b.r) * len(b - a);
  }
  return s;
}

double AxisymFront::wetted_area() const {
  const double r = markers.empty() ? 0.0 : markers.back().r;
  return pi * r * r;
}

double AxisymFront::equivalent_radius() const { return std::cbrt(3.0 * volume() / (2.0 * pi)); }

FrontKinematics kinematics(const AxisymFront& front, double beta) {
  require_front(front, "kinematics");
  const auto& x = front.markers;
  const std::size_t n = x.size();
  FrontKinematics k;
  k.curvature.resize(n);
  k.normal.resize(n);
  const RZ ghost_end = contact_ghost(x, beta);
  for (std::size_t i = 0; i < n; ++i) {
    const RZ prev = i == 0 ? RZ{-x[1].r, x[1].z} : x[i - 1];
    const RZ next = i + 1 == n ? ghost_end : x[i + 1];
    const Derivs d = derivs(prev, x[i], next);
    const double sp = len(d.d1);
    const double k1 = (d.d1.z * d.d2.r - d.d1.r * d.d2.z) / (sp * sp * sp);
    RZ nu{-d.d1.z / sp, d.d1.r / sp};
    if (i == 0) nu = {0.0, 1.0};
    if (i + 1 == n) nu = {std::sqrt(1.0 - beta * beta), -beta};
    const double k2 = i == 0 ? k1 : nu.r / x[i].r;
    k.curvature[i] = k1 + k2;
    k.normal[i] = nu;
  }
  return k;
}

double contact_residual(const AxisymFront& front, double beta) {
  require_front(front, "contact_residual");
  const RZ d = end_derivative(front.markers);
  const double l = len(d);
  // nu = (-t_z, t_r), so nu . e3 = t_r.
  return d.r / l + beta;
}

double volume_rate(const AxisymFront& front, const SmoothFlowConfig& cfg) {
  const auto k = kinematics(front, cfg.beta);
  const auto& x = front.markers;
  double rate = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double va = -k.curvature[i - 1] + cfg.forcing, vb = -k.curvature[i] + cfg.forcing;
    rate += pi * (va * x[i - 1].r + vb * x[i].r) * len(x[i] - x[i - 1]);
  }
  return rate;
}

std::optional<double> exact_hemisphere(double r0, double t) {
  require(r0 > 0.0, "exact_hemisphere: R0 must be positive");
  require(t >= 0.0, "exact_hemisphere: t must be >= 0");
  const double r2 = r0 * r0 - 4.0 * t;
  if (r2 <= 0.0) return std::nullopt;
  return std::sqrt(r2);
}

AxisymFront redistribute(const AxisymFront& front, int n) {
  require_front(front, "redistribute");
  require(n >= 2, "redistribute: need at least 3 markers");
  const auto& x = front.markers;
  const std::size_t m = x.size();
  std::vector<RZ> ext;
  ext.reserve(m + 2);
  ext.push_back({-x[1].r, x[1].z});
  ext.insert(ext.end(), x.begin(), x.end());
  ext.push_back(2.0 * x[m - 1] - x[m - 2]);

  std::vector<double> s(m, 0.0);
  for (std::size_t i = 1; i < m; ++i) s[i] = s[i - 1] + len(x[i] - x[i - 1]);
  AxisymFront out;
  out.time = front.time;
  out.extinct = front.extinct;
  out.markers.resize(n + 1);
  std::size_t seg = 0;
  for (int q = 0; q <= n; ++q) {
    const double target = s.back() * q / n;
    while (seg + 2 < m && s[seg + 1] < target) ++seg;
    const double u = std::clamp((target - s[seg]) / (s[seg + 1] - s[seg]), 0.0, 1.0);
    out.markers[q] = catmull_rom(ext[seg], ext[seg + 1], ext[seg + 2], ext[seg + 3], u);
  }
  out.markers.front() = {0.0, x.front().z};
  out.markers.back() = {x.back().r, 0.0};
  return out;
}

bool self_intersects(const AxisymFront& front) {
  const auto& x = front.markers;
  const std::size_t m = x.size();
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const double rlo = std::min(x[i].r, x[i + 1].r), rhi = std::max(x[i].r, x[i + 1].r);
    const double zlo = std::min(x[i].z, x[i + 1].z), zhi = std::max(x[i].z, x[i + 1].z);
    for (std::size_t j = i + 2; j + 1 < m; ++j) {
      if (std::max(x[j].r, x[j + 1].r) < rlo || std::min(x[j].r, x[j + 1].r) > rhi) continue;
      if (std::max(x[j].z, x[j + 1].z) < zlo || std::min(x[j].z, x[j + 1].z) > zhi) continue;
      if (segments_cross(x[i], x[i + 1], x[j], x[j + 1])) return true;
    }
  }
  return false;
}

AxisymFront evolve(const AxisymFront& front, const SmoothFlowConfig& cfg, double t_target) {
  require_front(front, "evolve");
  require(t_target >= front.time, "evolve: t_target is before the front time");
  require(std::abs(cfg.beta) < 1.0, "evolve: need |beta| < 1");
  require(cfg.dt_safety > 0.0 && cfg.dt_safety <= 0.5, "evolve: dt_safety must lie in (0, 0.5]");
  AxisymFront f = front;
  if (f.extinct) return f;
  const int n = static_cast<int>(f.markers.size()) - 1;
  const double nu_r = std::sqrt(1.0 - cfg.beta * cfg.beta);
  long step = 0;
  while (f.time < t_target) {
    if (f.length() < cfg.extinction_length) {
      f.extinct = true;
      return f;
    }
    double dt = cfg.dt_safety * std::pow(min_spacing(f.markers), 2);
    if (f.time + dt >= t_target) dt = t_target - f.time;
    const auto k = kinematics(f, cfg.beta);
    auto& x = f.markers;
    for (int i = 0; i <= n; ++i) {
      const double v = -k.curvature[i] + cfg.forcing;
      if (i == 0)
        x[i].z += dt * v;
      else if (i == n)
        x[i].r += dt * v / nu_r;
      else
        x[i] = x[i] + dt * v * k.normal[i];
    }
    f.time = f.time + dt == f.time ? t_target : f.time + dt;
    ++step;

    for (int i = 1; i <= n; ++i)
      if (x[i].r <= 0.0 || (i < n && x[i].z <= 0.0) || x[0].z <= 0.0)
        throw NumericalError("evolve: front degenerated (pinch-off) at t=" + std::to_string(f.time));
    if (step % cfg.redistribute_interval == 0 || spacing_ratio(x) > cfg.max_spacing_ratio)
      f = redistribute(f, n);
    if (step % 20 == 0 && self_intersects(f))
      throw NumericalError("evolve: front self-intersects at t=" + std::to_string(f.time));
  }
  if (self_intersects(f)) throw NumericalError("evolve: front self-intersects at t=" + std::to_string(f.time));
  return f;
}

AxisymFront offset_front(const AxisymFront& front, double d) {
  require_front(front, "offset_front");
  const auto& x = front.markers;
  const std::size_t m = x.size();
  if (d == 0.0) return front;
  std::vector<RZ> p(m);
  p[0] = {0.0, x[0].z + d};
  require(p[0].z > 0.0, "offset_front: inner offset is empty");
  for (std::size_t i = 1; i + 1 < m; ++i) {
    const Derivs dd = derivs(x[i - 1], x[i], x[i + 1]);
    const double sp = len(dd.d1);
    p[i] = x[i] + d * RZ{-dd.d1.z / sp, dd.d1.r / sp};
  }
  {
    const RZ t = end_derivative(x);
    const double sp = len(t);
    p[m - 1] = x[m - 1] + d * RZ{-t.z / sp, t.r / sp};
  }

  std::vector<RZ> out{p[0]};
  bool clipped = false;
  for (std::size_t i = 1; i < m; ++i) {
    if (p[i].z <= 0.0) {
      const RZ a = p[i - 1], b = p[i];
      const double u = a.z / (a.z - b.z);
      out.push_back({a.r + u * (b.r - a.r), 0.0});
      clipped = true;
      break;
    }
    out.push_back(p[i]);
  }
  if (!clipped) {
    const RZ a = out[out.size() - 2], b = out.back();
    const RZ t = b - a;
    require(t.z < 0.0, "offset_front: offset curve does not head towards the plane");
    out.push_back({b.r + (b.z / -t.z) * t.r, 0.0});
  }
  for (std::size_t i = 1; i < out.size(); ++i)
    require(out[i].r > 0.0, "offset_front: offset crosses the axis");
  AxisymFront o;
  o.markers = std::move(out);
  o.time = front.time;
  require(o.markers.size() >= 3, "offset_front: offset degenerated");
  require(!self_intersects(o), "offset_front: offset curve self-intersects");
  // Twice, so that the resampled spacing is close to uniform.
  o = redistribute(redistribute(o, static_cast<int>(m) - 1), static_cast<int>(m) - 1);
  return o;
}

BarrierFronts barrier_flows(const AxisymFront& front, double r, double s, const SmoothFlowConfig& cfg,
                            double t_target) {
  require(r >= 0.0 && s >= 0.0, "barrier_flows: r and s must be >= 0");
  require(std::abs(cfg.beta) + s < 1.0, "barrier_flows: need |beta| + s < 1");
  SmoothFlowConfig plus = cfg, minus = cfg;
  plus.forcing = cfg.forcing + s;
  plus.beta = cfg.beta + s;
  minus.forcing = cfg.forcing - s;
  minus.beta = cfg.beta - s;
  BarrierFronts b;
  b.plus = evolve(offset_front(front, r + s), plus, t_target);
  b.minus = evolve(offset_front(front, -(r + s)), minus, t_target);
  return b;
}

BinarySet rasterize_front(const AxisymFront& front, const HalfSpaceGrid& grid, double axis_x, double axis_y) {
  require_front(front, "rasterize_front");
  const auto& x = front.markers;
  double rmax = 0.0, zmax = 0.0;
  for (const auto& p : x) {
    rmax = std::max(rmax, p.r);
    zmax = std::max(zmax, p.z);
  }
  const double m = kInteriorMargin * grid.h();
  require(axis_x - rmax >= grid.x_min() + m && axis_x + rmax <= grid.x_max() - m &&
              axis_y - rmax >= grid.y_min() + m && axis_y + rmax <= grid.y_max() - m &&
              zmax <= grid.z_max() - m,
          "rasterize_front: shape is clipped by the lateral or top faces of the box");
  // Closed polygon: front, then the plane back to the axis, then the axis.
  std::vector<RZ> poly = x;
  poly.push_back({0.0, 0.0});
  std::vector<std::uint8_t> bits(grid.size(), 0);
  std::vector<double> cross;
  for (int k = 0; k < grid.nz(); ++k) {
    const double z = (k + 0.5) * grid.h();
    if (z > zmax) break;
    cross.clear();
    for (std::size_t e = 0; e < poly.size(); ++e) {
      const RZ a = poly[e], b = poly[(e + 1) % poly.size()];
      if ((a.z > z) == (b.z > z)) continue;
      cross.push_back(a.r + (z - a.z) / (b.z - a.z) * (b.r - a.r));
    }
    for (int j = 0; j < grid.ny(); ++j)
      for (int i = 0; i < grid.nx(); ++i) {
        const Vec3 c = grid.center(i, j, k);
        const double rho = std::hypot(c.x - axis_x, c.y - axis_y);
        if (rho > rmax) continue;
        int n = 0;
        for (double cr : cross) n += cr > rho;
        if (n % 2) bits[grid.index(i, j, k)] = 1;
      }
  }
  return BinarySet(grid, std::move(bits));
}

double distance_to_front(const AxisymFront& front, RZ p) {
  require_front(front, "distance_to_front");
  const auto& x = front.markers;
  double best = INFINITY;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const RZ a = x[i - 1], ab = x[i] - a;
    const double u = std::clamp(dot(p - a, ab) / dot(ab, ab), 0.0, 1.0);
    best = std::min(best, len(p - (a + u * ab)));
  }
  return best;
}

}  // namespace cmcf
