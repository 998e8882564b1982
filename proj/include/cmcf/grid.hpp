#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace cmcf {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
  friend double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
  friend double norm(Vec3 a) { return std::sqrt(dot(a, a)); }
};

struct CellIndex {
  int i = 0;
  int j = 0;
  int k = 0;
};

// Cells occupied by a set must stay this many cells away from the four
// lateral faces and the top face of the box.
inline constexpr int kInteriorMargin = 4;

// Uniform voxel grid over a box in the open upper half-space. The bottom face
// of the box is the plane x3 = 0; cell (i, j, k) has center
// (origin_x + (i + 1/2) h, origin_y + (j + 1/2) h, (k + 1/2) h).
class HalfSpaceGrid {
 public:
  HalfSpaceGrid(int nx, int ny, int nz, double h, double origin_x = 0.0, double origin_y = 0.0);

  // Box [-half_width, half_width]^2 x [0, height] (rounded up to whole cells,
  // symmetric about the x3 axis).
  static HalfSpaceGrid centered(double half_width, double height, double h);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }
  double h() const { return h_; }
  double origin_x() const { return origin_x_; }
  double origin_y() const { return origin_y_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_ * nz_; }
  double cell_volume() const { return h_ * h_ * h_; }

  // x-fastest linear layout.
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * ny_ + j) * nx_ + i;
  }
  CellIndex cell(std::size_t idx) const {
    const auto plane = static_cast<std::size_t>(nx_) * ny_;
    const auto k = static_cast<int>(idx / plane);
    const auto rem = idx % plane;
    return {static_cast<int>(rem % nx_), static_cast<int>(rem / nx_), k};
  }
  bool in_bounds(int i, int j, int k) const {
    return i >= 0 && j >= 0 && k >= 0 && i < nx_ && j < ny_ && k < nz_;
  }
  Vec3 center(int i, int j, int k) const {
    return {origin_x_ + (i + 0.5) * h_, origin_y_ + (j + 0.5) * h_, (k + 0.5) * h_};
  }
  Vec3 center(std::size_t idx) const {
    const auto c = cell(idx);
    return center(c.i, c.j, c.k);
  }
  // Cell containing point p, clamped to the grid.
  CellIndex locate(Vec3 p) const;

  double x_min() const { return origin_x_; }
  double x_max() const { return origin_x_ + nx_ * h_; }
  double y_min() const { return origin_y_; }
  double y_max() const { return origin_y_ + ny_ * h_; }
  double z_max() const { return nz_ * h_; }

  friend bool operator==(const HalfSpaceGrid&, const HalfSpaceGrid&) = default;

 private:
  int nx_;
  int ny_;
  int nz_;
  double h_;
  double origin_x_;
  double origin_y_;
};

// Voxel indicator of a set E in the half-space; one byte (0/1) per cell.
class BinarySet {
 public:
  explicit BinarySet(HalfSpaceGrid grid);
  BinarySet(HalfSpaceGrid grid, std::vector<std::uint8_t> bits);

  static BinarySet full(const HalfSpaceGrid& grid);

  const HalfSpaceGrid& grid() const { return grid_; }
  std::span<const std::uint8_t> bits() const { return bits_; }

  bool test(std::size_t idx) const { return bits_[idx] != 0; }
  bool test(int i, int j, int k) const { return bits_[grid_.index(i, j, k)] != 0; }
  void set(std::size_t idx, bool v) { bits_[idx] = v ? 1 : 0; }
  void set(int i, int j, int k, bool v) { set(grid_.index(i, j, k), v); }

  std::size_t count() const;
  bool empty() const { return count() == 0; }
  bool is_full() const { return count() == bits_.size(); }

  friend bool operator==(const BinarySet&, const BinarySet&) = default;

 private:
  HalfSpaceGrid grid_;
  std::vector<std::uint8_t> bits_;
};

// True when no occupied cell lies within `margin` cells of a lateral face or
// the top face.
bool interior_compatible(const BinarySet& e, int margin = kInteriorMargin);
void require_interior_compatible(const BinarySet& e, const char* what);
void require_same_grid(const BinarySet& a, const BinarySet& b, const char* what);

// Count of occupied cells times h^3.
double volume(const BinarySet& e);

bool is_subset(const BinarySet& a, const BinarySet& b);
bool are_disjoint(const BinarySet& a, const BinarySet& b);
std::size_t symmetric_difference_count(const BinarySet& a, const BinarySet& b);
BinarySet set_union(const BinarySet& a, const BinarySet& b);
BinarySet set_intersection(const BinarySet& a, const BinarySet& b);

// |A delta B| for sets on possibly different grids covering the same region:
// sampled at the cell centers of the finer grid.
double symmetric_difference_volume(const BinarySet& a, const BinarySet& b);

BinarySet rasterize(const HalfSpaceGrid& grid, const std::function<bool(Vec3)>& inside);

// Cells whose centers lie in B_rho(center) with center = (cx, cy, center_height).
// Throws PreconditionError if the ball, intersected with the half-space, is not
// kept kInteriorMargin cells away from the lateral and top faces.
BinarySet rasterize_cap(const HalfSpaceGrid& grid, double rho, double center_height,
                        double center_x = 0.0, double center_y = 0.0);

}  // namespace cmcf
