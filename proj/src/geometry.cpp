#include "cmcf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cmcf/crofton.hpp"
#include "cmcf/error.hpp"

namespace cmcf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Godunov update of the eikonal equation |grad u| = 1 from the three smallest
// axis neighbours.
double eikonal_update(double a, double b, double c, double h) {
  if (a > b) std::swap(a, b);
  if (b > c) std::swap(b, c);
  if (a > b) std::swap(a, b);
  if (!std::isfinite(a)) return kInf;
  double x = a + h;
  if (x <= b) return x;
  x = 0.5 * (a + b + std::sqrt(2.0 * h * h - (a - b) * (a - b)));
  if (x <= c) return x;
  const double s = a + b + c;
  const double disc = s * s - 3.0 * (a * a + b * b + c * c - h * h);
  return (s + std::sqrt(std::max(disc, 0.0))) / 3.0;
}

template <class F>
void for_each_face_neighbour(const HalfSpaceGrid& g, int i, int j, int k, F&& f) {
  if (i > 0) f(g.index(i - 1, j, k));
  if (i + 1 < g.nx()) f(g.index(i + 1, j, k));
  if (j > 0) f(g.index(i, j - 1, k));
  if (j + 1 < g.ny()) f(g.index(i, j + 1, k));
  // No neighbour across the plane x3 = 0.
  if (k > 0) f(g.index(i, j, k - 1));
  if (k + 1 < g.nz()) f(g.index(i, j, k + 1));
}

// Indicator of e blurred by a separable Gaussian of width sigma cells,
// reflected across the plane x3 = 0 and clamped at the other faces.
std::vector<double> blurred_indicator(const BinarySet& e, double sigma) {
  const auto& g = e.grid();
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> w(2 * radius + 1);
  double wsum = 0.0;
  for (int t = -radius; t <= radius; ++t) wsum += w[t + radius] = std::exp(-0.5 * t * t / (sigma * sigma));
  for (double& x : w) x /= wsum;

  std::vector<double> a(g.size()), b(g.size());
  for (std::size_t c = 0; c < g.size(); ++c) a[c] = e.test(c) ? 1.0 : 0.0;
  const int n[3] = {g.nx(), g.ny(), g.nz()};
  const std::size_t stride[3] = {1, static_cast<std::size_t>(g.nx()),
                                 static_cast<std::size_t>(g.nx()) * g.ny()};
  for (int axis = 0; axis < 3; ++axis) {
    for (int k = 0; k < g.nz(); ++k)
      for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
          const int pos[3] = {i, j, k};
          const std::size_t c = g.index(i, j, k);
          const std::size_t base = c - pos[axis] * stride[axis];
          double acc = 0.0;
          for (int t = -radius; t <= radius; ++t) {
            int q = pos[axis] + t;
            if (q < 0) q = axis == 2 ? -1 - q : 0;
            if (q >= n[axis]) q = n[axis] - 1;
            acc += w[t + radius] * a[base + q * stride[axis]];
          }
          b[c] = acc;
        }
    std::swap(a, b);
  }
  return a;
}

// Seeds for the interface cells from the blurred indicator phi.
void subcell_seeds(const BinarySet& e, const std::vector<std::uint8_t>& interface, std::vector<double>& u) {
  const auto& g = e.grid();
  const double h = g.h();
  constexpr double sigma = 1.0;  // cells
  const auto phi = blurred_indicator(e, sigma);
  auto value = [&](int i, int j, int k) {
    i = std::clamp(i, 0, g.nx() - 1);
    j = std::clamp(j, 0, g.ny() - 1);
    if (k < 0) k = -1 - k;
    k = std::min(k, g.nz() - 1);
    return phi[g.index(i, j, k)];
  };
  // Gradient in cell units by central differences.
  auto grad = [&](int i, int j, int k) {
    return Vec3{0.5 * (value(i + 1, j, k) - value(i - 1, j, k)), 0.5 * (value(i, j + 1, k) - value(i, j - 1, k)),
                0.5 * (value(i, j, k + 1) - value(i, j, k - 1))};
  };
  auto outward = [&](int i, int j, int k) {
    const Vec3 d = grad(i, j, k);
    const double n = norm(d);
    return n > 1e-12 ? (-1.0 / n) * d : Vec3{};
  };
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const std::size_t c = g.index(i, j, k);
        if (!interface[c]) continue;
        const bool in = e.test(c);
        const double gn = norm(grad(i, j, k));
        double d = in ? -0.5 : 0.5;
        if (gn > 1e-3) {
          const double kappa = 0.5 * (outward(i + 1, j, k).x - outward(i - 1, j, k).x) +
                               0.5 * (outward(i, j + 1, k).y - outward(i, j - 1, k).y) +
                               0.5 * (outward(i, j, k + 1).z - outward(i, j, k - 1).z);
          d = (0.5 - phi[c]) / gn - 0.5 * sigma * sigma * kappa;
        }
        // Keep the sign of the label; a cell cannot sit further than one
        // cell from the interface it touches.
        d = in ? std::clamp(d, -1.0, 0.0) : std::clamp(d, 0.0, 1.0);
        u[c] = std::abs(d) * h;
      }
}

}  // namespace

SignedDistanceField::SignedDistanceField(HalfSpaceGrid grid, std::vector<double> values,
                                         bool empty_interface)
    : grid_(grid), values_(std::move(values)), empty_interface_(empty_interface) {
  require(values_.size() == grid_.size(), "SignedDistanceField: value count does not match grid");
}

double SignedDistanceField::sample(Vec3 p) const {
  const auto& g = grid_;
  auto coord = [&](double v, double o, int n, int& i0, double& t) {
    const double s = std::clamp((v - o) / g.h() - 0.5, 0.0, static_cast<double>(n - 1));
    i0 = std::min(static_cast<int>(std::floor(s)), n - 2);
    t = s - i0;
  };
  int i0, j0, k0;
  double tx, ty, tz;
  coord(p.x, g.origin_x(), g.nx(), i0, tx);
  coord(p.y, g.origin_y(), g.ny(), j0, ty);
  coord(p.z, 0.0, g.nz(), k0, tz);
  double acc = 0.0;
  for (int c = 0; c < 8; ++c) {
    const int di = c & 1, dj = (c >> 1) & 1, dk = (c >> 2) & 1;
    const double w = (di ? tx : 1 - tx) * (dj ? ty : 1 - ty) * (dk ? tz : 1 - tz);
    const double v = at(i0 + di, j0 + dj, k0 + dk);
    if (!std::isfinite(v)) {
      const auto nearest = g.locate(p);
      return at(nearest.i, nearest.j, nearest.k);
    }
    acc += w * v;
  }
  return acc;
}

SignedDistanceField signed_distance(const BinarySet& e, InterfaceInit init) {
  const auto& g = e.grid();
  const std::size_t n = e.count();
  if (n == 0 || n == g.size())
    return SignedDistanceField(g, std::vector<double>(g.size(), kInf), true);
  require_interior_compatible(e, "signed_distance");

  const double h = g.h();
  std::vector<double> u(g.size(), kInf);
  std::vector<std::uint8_t> fixed(g.size(), 0);
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const std::size_t c = g.index(i, j, k);
        const bool in = e.test(c);
        bool interface = false;
        for_each_face_neighbour(g, i, j, k, [&](std::size_t nb) { interface |= (e.test(nb) != in); });
        if (interface) {
          u[c] = 0.5 * h;
          fixed[c] = 1;
        }
      }
  if (init == InterfaceInit::subcell) subcell_seeds(e, fixed, u);

  const int nx = g.nx(), ny = g.ny(), nz = g.nz();
  for (int pass = 0; pass < 2; ++pass)
    for (int order = 0; order < 8; ++order) {
      const int si = (order & 1) ? -1 : 1;
      const int sj = (order & 2) ? -1 : 1;
      const int sk = (order & 4) ? -1 : 1;
      for (int kk = 0; kk < nz; ++kk) {
        const int k = sk > 0 ? kk : nz - 1 - kk;
        for (int jj = 0; jj < ny; ++jj) {
          const int j = sj > 0 ? jj : ny - 1 - jj;
          for (int ii = 0; ii < nx; ++ii) {
            const int i = si > 0 ? ii : nx - 1 - ii;
            const std::size_t c = g.index(i, j, k);
            if (fixed[c]) continue;
            const double a = std::min(i > 0 ? u[c - 1] : kInf, i + 1 < nx ? u[c + 1] : kInf);
            const std::size_t row = static_cast<std::size_t>(nx);
            const double b = std::min(j > 0 ? u[c - row] : kInf, j + 1 < ny ? u[c + row] : kInf);
            const std::size_t plane = row * ny;
            const double d = std::min(k > 0 ? u[c - plane] : kInf, k + 1 < nz ? u[c + plane] : kInf);
            u[c] = std::min(u[c], eikonal_update(a, b, d, h));
          }
        }
      }
    }

  for (std::size_t c = 0; c < u.size(); ++c)
    if (e.test(c)) u[c] = -u[c];
  return SignedDistanceField(g, std::move(u), false);
}

std::vector<std::size_t> boundary_cells(const BinarySet& e) {
  const auto& g = e.grid();
  std::vector<std::size_t> out;
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const std::size_t c = g.index(i, j, k);
        if (!e.test(c)) continue;
        bool exposed = false;
        for_each_face_neighbour(g, i, j, k, [&](std::size_t nb) { exposed |= !e.test(nb); });
        if (exposed) out.push_back(c);
      }
  return out;
}

namespace {

// Directed Hausdorff distance with the early-break scan over a shuffled
// source cloud.
double directed_hausdorff(const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
  double cmax = 0.0;
  for (const Vec3& p : from) {
    double cmin = kInf;
    for (const Vec3& q : to) {
      const Vec3 d = p - q;
      const double dd = dot(d, d);
      if (dd < cmin) {
        cmin = dd;
        if (cmin <= cmax) break;
      }
    }
    if (cmin > cmax && std::isfinite(cmin)) cmax = cmin;
  }
  return std::sqrt(cmax);
}

std::vector<Vec3> shuffled_cloud(const BinarySet& e) {
  const auto cells = boundary_cells(e);
  std::vector<Vec3> pts;
  pts.reserve(cells.size());
  for (auto c : cells) pts.push_back(e.grid().center(c));
  std::mt19937_64 rng(0x5eedULL);
  for (std::size_t n = pts.size(); n > 1; --n) std::swap(pts[n - 1], pts[rng() % n]);
  return pts;
}

}  // namespace

HausdorffReport hausdorff(const BinarySet& a, const BinarySet& b) {
  require_same_grid(a, b, "hausdorff");
  const auto pa = shuffled_cloud(a);
  const auto pb = shuffled_cloud(b);
  require(!pa.empty() && !pb.empty(), "hausdorff: empty relative boundary");
  HausdorffReport r;
  r.forward = directed_hausdorff(pa, pb);
  r.backward = directed_hausdorff(pb, pa);
  r.max = std::max(r.forward, r.backward);
  return r;
}

std::array<std::uint64_t, 5> cut_counts(const BinarySet& e) {
  std::array<std::uint64_t, 5> counts{};
  const auto bits = e.bits();
  crofton::for_each_pair(e.grid(), [&](std::size_t a, std::size_t b, crofton::PairKind kind) {
    if (bits[a] != bits[b]) ++counts[static_cast<int>(kind)];
  });
  return counts;
}

double perimeter(const BinarySet& e) {
  const auto counts = cut_counts(e);
  double units = 0.0;
  for (std::size_t n = 0; n < counts.size(); ++n)
    units += static_cast<double>(counts[n]) * crofton::kPairWeight[n];
  const double h = e.grid().h();
  return units * h * h;
}

OffsetResult offset_set(const SignedDistanceField& sd, double delta) {
  const auto& g = sd.grid();
  std::vector<std::uint8_t> bits(g.size(), 0);
  for (std::size_t c = 0; c < bits.size(); ++c) bits[c] = sd.at(c) < delta ? 1 : 0;
  BinarySet s(g, std::move(bits));
  OffsetResult r{std::move(s)};
  r.emptied = r.set.empty();
  r.touches_box = !interior_compatible(r.set);
  return r;
}

OffsetResult offset_set(const BinarySet& e, double delta) {
  if (delta == 0.0) {
    OffsetResult r{e};
    r.emptied = e.empty();
    r.touches_box = !interior_compatible(e);
    return r;
  }
  return offset_set(signed_distance(e), delta);
}

}  // namespace cmcf
