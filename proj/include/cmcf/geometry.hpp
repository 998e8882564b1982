#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "cmcf/grid.hpp"

namespace cmcf {

// Signed distance to the relative boundary (the part of the boundary inside
// the open half-space), negative inside. The wetted region on x3 = 0 is not a
// source. For empty or full sets the relative boundary is empty; the field is
// then flagged and every value is +infinity.
class SignedDistanceField {
 public:
  SignedDistanceField(HalfSpaceGrid grid, std::vector<double> values, bool empty_interface);

  const HalfSpaceGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  bool empty_interface() const { return empty_interface_; }

  double at(std::size_t idx) const { return values_[idx]; }
  double at(int i, int j, int k) const { return values_[grid_.index(i, j, k)]; }
  // Trilinear interpolation between cell centers (clamped at the box).
  double sample(Vec3 p) const;

 private:
  HalfSpaceGrid grid_;
  std::vector<double> values_;
  bool empty_interface_;
};

// How the cells next to the interface are seeded before sweeping.
//   staircase: |sd| = h/2 on every interface cell.
//   subcell: distance to the 1/2 level set of the indicator blurred with a
//     Gaussian of width h (mirrored across x3 = 0), corrected by -sigma^2 kappa / 2
//     for the shrinkage of curved level sets under blurring. Without it a step
//     with tau = 4h^2 cannot move a smooth interface by less than a cell.
enum class InterfaceInit { staircase, subcell };

SignedDistanceField signed_distance(const BinarySet& e, InterfaceInit init = InterfaceInit::staircase);

// Cells of E with at least one face neighbour outside E across a face that is
// not on the plane x3 = 0.
std::vector<std::size_t> boundary_cells(const BinarySet& e);

struct HausdorffReport {
  double forward = 0.0;   // sup over dA of dist to dB
  double backward = 0.0;  // sup over dB of dist to dA
  double max = 0.0;
};

// Symmetric Hausdorff distance between the cell-center clouds of the relative
// boundaries. Throws if either boundary is empty.
HausdorffReport hausdorff(const BinarySet& a, const BinarySet& b);

// Discrete relative perimeter: stencil cut counts weighted by the Crofton
// constants, times h^2.
double perimeter(const BinarySet& e);

// Cut counts per crofton::PairKind.
std::array<std::uint64_t, 5> cut_counts(const BinarySet& e);

struct OffsetResult {
  BinarySet set;
  bool emptied = false;       // result is empty
  bool touches_box = false;   // result is not interior-compatible
};

// {sd_E < delta}. delta > 0 grows the set, delta < 0 shrinks it.
OffsetResult offset_set(const BinarySet& e, double delta);
OffsetResult offset_set(const SignedDistanceField& sd, double delta);

}  // namespace cmcf
