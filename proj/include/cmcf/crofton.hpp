#pragma once

#include <array>
#include <cstddef>

#include "cmcf/grid.hpp"

namespace cmcf::crofton {

// Cauchy-Crofton weights of the 26-neighbourhood, in units of h^2, for the
// three direction classes (axis, face diagonal, body diagonal). A plane with
// unit normal n is charged sum_e w_e |n . e| per unit area. The constants were
// fitted offline under two constraints:
//   w_axis + 4 w_face + 4 w_body = 1              (axis-aligned planes exact)
//   (3 w_axis + 6 sqrt2 w_face + 4 sqrt3 w_body)/2 = 1  (sphere average exact)
// minimising the mean squared deviation from 1 over all normals. The residual
// anisotropy is within [0.899, 1.043].
inline constexpr double kAxisWeight = 0.11570880441308223;
inline constexpr double kFaceWeight = 0.07786141484833566;
inline constexpr double kBodyWeight = 0.14321138404839379;

// Pair kinds. Pairs inside the bottom layer additionally carry the weight of
// the downward diagonals that would cross the plane x3 = 0: the relative
// perimeter is evaluated as half the perimeter of the set reflected across the
// plane, so the wetted face never contributes.
enum class PairKind : int { axis = 0, face = 1, body = 2, bottom_axis = 3, bottom_face = 4 };
inline constexpr std::size_t kPairKinds = 5;

inline constexpr std::array<double, kPairKinds> kPairWeight = {
    kAxisWeight, kFaceWeight, kBodyWeight, kAxisWeight + kFaceWeight, kFaceWeight + kBodyWeight};

struct Direction {
  int di;
  int dj;
  int dk;
};

// The 13 "forward" neighbour offsets (the other 13 are their negatives).
inline constexpr std::array<Direction, 13> kForward = {{
    {1, 0, 0}, {0, 1, 0}, {0, 0, 1},                                   //
    {1, 1, 0}, {1, -1, 0}, {1, 0, 1}, {1, 0, -1}, {0, 1, 1}, {0, 1, -1},  //
    {1, 1, 1}, {1, 1, -1}, {1, -1, 1}, {1, -1, -1},                     //
}};

constexpr PairKind kind_of(const Direction& d, bool bottom_layer) {
  const int l1 = (d.di != 0) + (d.dj != 0) + (d.dk != 0);
  if (bottom_layer && d.dk == 0) return l1 == 1 ? PairKind::bottom_axis : PairKind::bottom_face;
  return l1 == 1 ? PairKind::axis : (l1 == 2 ? PairKind::face : PairKind::body);
}

// Calls f(a, b, kind) once for every unordered stencil pair of cells of the
// grid.
template <class F>
void for_each_pair(const HalfSpaceGrid& g, F&& f) {
  for (int k = 0; k < g.nz(); ++k)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const std::size_t a = g.index(i, j, k);
        for (const auto& d : kForward) {
          const int i2 = i + d.di, j2 = j + d.dj, k2 = k + d.dk;
          if (!g.in_bounds(i2, j2, k2)) continue;
          f(a, g.index(i2, j2, k2), kind_of(d, k == 0 && k2 == 0));
        }
      }
}

}  // namespace cmcf::crofton
