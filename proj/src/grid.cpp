#include "cmcf/grid.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "cmcf/error.hpp"

namespace cmcf {

HalfSpaceGrid::HalfSpaceGrid(int nx, int ny, int nz, double h, double origin_x, double origin_y)
    : nx_(nx), ny_(ny), nz_(nz), h_(h), origin_x_(origin_x), origin_y_(origin_y) {
  require(h > 0.0 && std::isfinite(h), "grid: h must be positive");
  require(nx >= 4 && ny >= 4 && nz >= 4, "grid: nx, ny, nz must be >= 4");
}

HalfSpaceGrid HalfSpaceGrid::centered(double half_width, double height, double h) {
  require(h > 0.0, "grid: h must be positive");
  require(half_width > 0.0 && height > 0.0, "grid: extents must be positive");
  const int half = static_cast<int>(std::ceil(half_width / h - 1e-9));
  const int nz = static_cast<int>(std::ceil(height / h - 1e-9));
  return HalfSpaceGrid(2 * half, 2 * half, nz, h, -half * h, -half * h);
}

CellIndex HalfSpaceGrid::locate(Vec3 p) const {
  auto clampi = [](double v, int n) {
    return std::clamp(static_cast<int>(std::floor(v)), 0, n - 1);
  };
  return {clampi((p.x - origin_x_) / h_, nx_), clampi((p.y - origin_y_) / h_, ny_),
          clampi(p.z / h_, nz_)};
}

BinarySet::BinarySet(HalfSpaceGrid grid) : grid_(grid), bits_(grid.size(), 0) {}

BinarySet::BinarySet(HalfSpaceGrid grid, std::vector<std::uint8_t> bits)
    : grid_(grid), bits_(std::move(bits)) {
  require(bits_.size() == grid_.size(), "BinarySet: bit count does not match grid");
  for (auto& b : bits_) b = b ? 1 : 0;
}

BinarySet BinarySet::full(const HalfSpaceGrid& grid) {
  return BinarySet(grid, std::vector<std::uint8_t>(grid.size(), 1));
}

std::size_t BinarySet::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

bool interior_compatible(const BinarySet& e, int margin) {
  const auto& g = e.grid();
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        if (!e.test(i, j, k)) continue;
        if (i < margin || j < margin || i >= g.nx() - margin || j >= g.ny() - margin ||
            k >= g.nz() - margin)
          return false;
      }
  return true;
}

void require_interior_compatible(const BinarySet& e, const char* what) {
  require(interior_compatible(e),
          std::string(what) + ": set touches the lateral or top faces of the box (margin " +
              std::to_string(kInteriorMargin) + " cells)");
}

void require_same_grid(const BinarySet& a, const BinarySet& b, const char* what) {
  require(a.grid() == b.grid(), std::string(what) + ": grids do not match");
}

double volume(const BinarySet& e) {
  return static_cast<double>(e.count()) * e.grid().cell_volume();
}

bool is_subset(const BinarySet& a, const BinarySet& b) {
  require_same_grid(a, b, "is_subset");
  const auto x = a.bits();
  const auto y = b.bits();
  for (std::size_t n = 0; n < x.size(); ++n)
    if (x[n] && !y[n]) return false;
  return true;
}

bool are_disjoint(const BinarySet& a, const BinarySet& b) {
  require_same_grid(a, b, "are_disjoint");
  const auto x = a.bits();
  const auto y = b.bits();
  for (std::size_t n = 0; n < x.size(); ++n)
    if (x[n] && y[n]) return false;
  return true;
}

std::size_t symmetric_difference_count(const BinarySet& a, const BinarySet& b) {
  require_same_grid(a, b, "symmetric_difference_count");
  const auto x = a.bits();
  const auto y = b.bits();
  std::size_t n = 0;
  for (std::size_t c = 0; c < x.size(); ++c) n += (x[c] != y[c]);
  return n;
}

BinarySet set_union(const BinarySet& a, const BinarySet& b) {
  require_same_grid(a, b, "set_union");
  std::vector<std::uint8_t> bits(a.bits().size());
  for (std::size_t n = 0; n < bits.size(); ++n) bits[n] = a.bits()[n] | b.bits()[n];
  return BinarySet(a.grid(), std::move(bits));
}

BinarySet set_intersection(const BinarySet& a, const BinarySet& b) {
  require_same_grid(a, b, "set_intersection");
  std::vector<std::uint8_t> bits(a.bits().size());
  for (std::size_t n = 0; n < bits.size(); ++n) bits[n] = a.bits()[n] & b.bits()[n];
  return BinarySet(a.grid(), std::move(bits));
}

double symmetric_difference_volume(const BinarySet& a, const BinarySet& b) {
  if (a.grid() == b.grid())
    return static_cast<double>(symmetric_difference_count(a, b)) * a.grid().cell_volume();
  const BinarySet& fine = a.grid().h() <= b.grid().h() ? a : b;
  const BinarySet& coarse = a.grid().h() <= b.grid().h() ? b : a;
  const auto& fg = fine.grid();
  const auto& cg = coarse.grid();
  std::size_t mismatches = 0;
  for (int k = 0; k < fg.nz(); ++k)
    for (int j = 0; j < fg.ny(); ++j)
      for (int i = 0; i < fg.nx(); ++i) {
        const Vec3 p = fg.center(i, j, k);
        bool in_coarse = false;
        if (p.x >= cg.x_min() && p.x < cg.x_max() && p.y >= cg.y_min() && p.y < cg.y_max() &&
            p.z < cg.z_max()) {
          const auto c = cg.locate(p);
          in_coarse = coarse.test(c.i, c.j, c.k);
        }
        mismatches += (fine.test(i, j, k) != in_coarse);
      }
  // Coarse cells outside the fine box are counted too.
  std::size_t outside = 0;
  for (int k = 0; k < cg.nz(); ++k)
    for (int j = 0; j < cg.ny(); ++j)
      for (int i = 0; i < cg.nx(); ++i) {
        if (!coarse.test(i, j, k)) continue;
        const Vec3 p = cg.center(i, j, k);
        if (p.x < fg.x_min() || p.x >= fg.x_max() || p.y < fg.y_min() || p.y >= fg.y_max() ||
            p.z >= fg.z_max())
          ++outside;
      }
  return static_cast<double>(mismatches) * fg.cell_volume() +
         static_cast<double>(outside) * cg.cell_volume();
}

BinarySet rasterize(const HalfSpaceGrid& grid, const std::function<bool(Vec3)>& inside) {
  std::vector<std::uint8_t> bits(grid.size(), 0);
  for (int k = 0; k < grid.nz(); ++k)
    for (int j = 0; j < grid.ny(); ++j)
      for (int i = 0; i < grid.nx(); ++i)
        bits[grid.index(i, j, k)] = inside(grid.center(i, j, k)) ? 1 : 0;
  return BinarySet(grid, std::move(bits));
}

BinarySet rasterize_cap(const HalfSpaceGrid& grid, double rho, double center_height,
                        double center_x, double center_y) {
  require(rho > 0.0, "rasterize_cap: rho must be positive");
  const double m = kInteriorMargin * grid.h();
  require(center_x - rho >= grid.x_min() + m && center_x + rho <= grid.x_max() - m &&
              center_y - rho >= grid.y_min() + m && center_y + rho <= grid.y_max() - m &&
              center_height + rho <= grid.z_max() - m,
          "rasterize_cap: shape is clipped by the lateral or top faces of the box");
  const double r2 = rho * rho;
  const Vec3 c{center_x, center_y, center_height};
  // Only scan the bounding box of the ball.
  std::vector<std::uint8_t> bits(grid.size(), 0);
  const auto lo = grid.locate({center_x - rho, center_y - rho, center_height - rho});
  const auto hi = grid.locate({center_x + rho, center_y + rho, center_height + rho});
  for (int k = lo.k; k <= hi.k; ++k)
    for (int j = lo.j; j <= hi.j; ++j)
      for (int i = lo.i; i <= hi.i; ++i) {
        const Vec3 d = grid.center(i, j, k) - c;
        if (dot(d, d) < r2) bits[grid.index(i, j, k)] = 1;
      }
  return BinarySet(grid, std::move(bits));
}

}  // namespace cmcf
