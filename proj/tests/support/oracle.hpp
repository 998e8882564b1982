#pragma once

// Brute-force reference for the per-step energy: enumerates every labelling
// of a handful of free cells, with the rest of the grid fixed.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "cmcf/flat_flow.hpp"

namespace cmcf::oracle {

struct Instance {
  BinarySet e0;
  CutProblem problem;
  std::vector<std::int8_t> fixed;  // -1 free, else the forced label
  std::vector<std::size_t> free_cells;
};

// Small random instance: a blob E0 on a 16x16x8 grid, random tau and adhesion
// field, and up to max_free free cells near the boundary of E0.
inline Instance random_instance(std::mt19937_64& rng, int max_free) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double h = 0.125;
  const HalfSpaceGrid g(16, 16, 8, h, -1.0, -1.0);
  const double cx = 0.1 * (u(rng) - 0.5), cy = 0.1 * (u(rng) - 0.5);
  const double r = 0.15 + 0.1 * u(rng), cz = (u(rng) - 0.3) * r;
  const double ax = 0.7 + 0.6 * u(rng);
  BinarySet e0 = rasterize(g, [&](Vec3 p) {
    const double dx = (p.x - cx) * ax, dy = p.y - cy, dz = p.z - cz;
    return dx * dx + dy * dy + dz * dz < r * r;
  });
  if (e0.empty()) e0.set(g.index(8, 8, 0), true);

  std::vector<double> beta(static_cast<std::size_t>(g.nx()) * g.ny());
  const double b0 = 1.2 * (u(rng) - 0.5);
  for (auto& b : beta) b = b0 + 0.3 * (u(rng) - 0.5);
  double m = 0.0;
  for (double b : beta) m = std::max(m, std::abs(b));
  const AdhesionField field(g, beta, std::min(0.5 * (1.0 - m), 0.49));
  const double tau = h * h * (1.0 + 9.0 * u(rng));
  const auto sd = signed_distance(e0, u(rng) < 0.5 ? InterfaceInit::staircase : InterfaceInit::subcell);

  Instance inst{e0, make_cut_problem(e0, sd, tau, field), {}, {}};
  inst.fixed.assign(g.size(), 0);
  std::vector<std::size_t> near;
  for (std::size_t c = 0; c < g.size(); ++c) {
    inst.fixed[c] = e0.test(c) ? 1 : 0;
    if (std::abs(sd.at(c)) <= 2.0 * h) near.push_back(c);
  }
  std::shuffle(near.begin(), near.end(), rng);
  const int want = std::uniform_int_distribution<int>(1, max_free)(rng);
  for (std::size_t n = 0; n < near.size() && static_cast<int>(n) < want; ++n) {
    inst.fixed[near[n]] = -1;
    inst.free_cells.push_back(near[n]);
  }
  return inst;
}

struct Enumeration {
  std::int64_t energy = std::numeric_limits<std::int64_t>::max();
  BinarySet argmin;
};

// Gray-code walk over all 2^n labellings of the free cells.
inline Enumeration exhaustive_min(const CutProblem& p, const std::vector<std::int8_t>& fixed,
                                  const std::vector<std::size_t>& free_cells) {
  const auto& g = p.grid;
  const std::size_t n = free_cells.size();
  std::vector<int> slot(g.size(), -1);
  for (std::size_t i = 0; i < n; ++i) slot[free_cells[i]] = static_cast<int>(i);

  BinarySet x(g);
  for (std::size_t c = 0; c < g.size(); ++c) x.set(c, fixed[c] == 1);
  const std::int64_t base = cut_energy(p, x);

  // Gain of switching a free cell on, and pair weights between free cells.
  std::vector<std::int64_t> gain(n);
  for (std::size_t i = 0; i < n; ++i) gain[i] = p.unary[free_cells[i]];
  std::vector<std::vector<std::pair<int, std::int64_t>>> adj(n);
  crofton::for_each_pair(g, [&](std::size_t a, std::size_t b, crofton::PairKind k) {
    const std::int64_t w = p.pair_weight[static_cast<int>(k)];
    const int sa = slot[a], sb = slot[b];
    if (sa >= 0 && sb >= 0) {
      adj[sa].push_back({sb, w});
      adj[sb].push_back({sa, w});
    } else if (sa >= 0) {
      gain[sa] += fixed[b] == 1 ? -w : w;
    } else if (sb >= 0) {
      gain[sb] += fixed[a] == 1 ? -w : w;
    }
  });

  std::vector<std::uint8_t> on(n, 0);
  std::int64_t e = base;
  Enumeration best{e, x};
  std::uint64_t best_code = 0, code = 0;
  for (std::uint64_t step = 1; step < (std::uint64_t{1} << n); ++step) {
    const int i = std::countr_zero(step);
    const bool to_on = !on[i];
    std::int64_t d = to_on ? gain[i] : -gain[i];
    for (const auto& [j, w] : adj[i]) d += (on[j] != to_on) ? w : -w;
    on[i] = to_on;
    code ^= std::uint64_t{1} << i;
    e += d;
    if (e < best.energy) {
      best.energy = e;
      best_code = code;
    }
  }
  best.argmin = x;
  for (std::size_t i = 0; i < n; ++i)
    if (best_code >> i & 1) best.argmin.set(free_cells[i], true);
  return best;
}

}  // namespace cmcf::oracle
