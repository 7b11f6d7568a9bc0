// SPDX-License-Identifier: MIT
// Shared helpers for the test suites: deterministic RNG, grid builders, and
// independent brute-force oracles kept separate from the library code paths.
#pragma once

#include "qc/grid.hpp"
#include "qc/rational.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace qctest {

using qc::Box;
using qc::MassGrid;
using qc::Point;
using qc::Rat;

using Rng = std::mt19937_64;

inline int rand_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Rat rand_rat(Rng& rng, int num_lo, int num_hi, int max_den) {
  const int den = rand_int(rng, 1, max_den);
  return Rat(rand_int(rng, num_lo, num_hi), den);
}

inline std::vector<Rat> rats(const std::vector<std::string>& strs) {
  std::vector<Rat> out;
  out.reserve(strs.size());
  for (const auto& s : strs) out.push_back(qc::rat_from_string(s));
  return out;
}

inline std::vector<Rat> uniform_axis(int n) {
  std::vector<Rat> axis;
  for (int i = 0; i <= n; ++i) axis.emplace_back(i, n);
  return axis;
}

// Grid from per-axis breakpoints given as strings and a flat mass list given
// as strings (last axis fastest).
inline MassGrid make_grid(const std::vector<std::vector<std::string>>& bps,
                          const std::vector<std::string>& mass, bool normalized = false) {
  std::vector<std::vector<Rat>> b;
  b.reserve(bps.size());
  for (const auto& axis : bps) b.push_back(rats(axis));
  return MassGrid::create(std::move(b), rats(mass), normalized);
}

// Bivariate grid from rows listed bottom-to-top (row r = cells (1..m, r)).
// MassGrid stores axis 1 (columns) first, so entries are transposed here.
inline MassGrid grid_from_rows_bottom_up(const std::vector<std::vector<Rat>>& rows,
                                         const std::vector<Rat>& x_bps,
                                         const std::vector<Rat>& y_bps, bool normalized = false) {
  const std::size_t n_rows = rows.size();
  const std::size_t n_cols = rows.front().size();
  std::vector<Rat> mass(n_cols * n_rows);
  for (std::size_t j = 0; j < n_rows; ++j) {
    for (std::size_t i = 0; i < n_cols; ++i) {
      mass[i * n_rows + j] = rows[j][i];
    }
  }
  return MassGrid::create({x_bps, y_bps}, std::move(mass), normalized);
}

// Checkerboard grid of a pointwise CDF on the uniform n-mesh: cell masses are
// the alternating corner sums of `cdf`.
inline MassGrid grid_from_cdf(const std::function<Rat(const Point&)>& cdf, int n, int d,
                              bool normalized = true) {
  std::vector<std::vector<Rat>> bps(static_cast<std::size_t>(d), uniform_axis(n));
  std::vector<int> shape(static_cast<std::size_t>(d), n);
  std::vector<Rat> mass;
  std::vector<int> idx(static_cast<std::size_t>(d), 0);
  do {
    Rat sum = 0;
    std::vector<int> pick(static_cast<std::size_t>(d), 0);
    const std::vector<int> two(static_cast<std::size_t>(d), 2);
    do {
      Point corner(static_cast<std::size_t>(d));
      int lows = 0;
      for (std::size_t k = 0; k < corner.size(); ++k) {
        const int v = idx[k] + pick[k];
        corner[k] = Rat(v, n);
        if (!pick[k]) ++lows;
      }
      const Rat value = cdf(corner);
      sum += (lows % 2 == 0) ? value : -value;
    } while (qc::next_multi_index(pick, two));
    mass.push_back(sum);
  } while (qc::next_multi_index(idx, shape));
  return MassGrid::create(std::move(bps), std::move(mass), normalized);
}

// Lower Frechet-Hoeffding bound W_d(u) = max(sum u_k - (d-1), 0) on the
// uniform n-mesh; a proper quasi-copula checkerboard for d >= 3.
inline MassGrid w_bound_grid(int n, int d) {
  return grid_from_cdf(
      [d](const Point& u) {
        Rat s = 0;
        for (const Rat& x : u) s += x;
        s -= d - 1;
        return s > 0 ? s : Rat(0);
      },
      n, d);
}

// Proper quasi-copula on the uniform 4-mesh: stochastic, vertex table
// increasing and 1-Lipschitz, negative cells strictly interior.
inline MassGrid proper_qc_4x4() {
  auto r = [](int a, int b, int c, int d) {
    return std::vector<Rat>{Rat(a, 4), Rat(b, 4), Rat(c, 4), Rat(d, 4)};
  };
  return grid_from_rows_bottom_up(
      {r(0, 0, 1, 0), r(0, 1, -1, 1), r(1, -1, 1, 0), r(0, 1, 0, 0)},
      uniform_axis(4), uniform_axis(4), true);
}

// Brute-force oracle: sum of whole-cell masses covered by a cell-aligned box.
inline Rat cell_sum_oracle(const MassGrid& g, const std::vector<int>& lo_cell,
                           const std::vector<int>& hi_cell) {
  const std::vector<int> shape = g.cell_shape();
  Rat sum = 0;
  std::vector<int> idx(shape.size(), 0);
  do {
    bool inside = true;
    for (std::size_t k = 0; k < shape.size(); ++k) {
      if (idx[k] < lo_cell[k] || idx[k] >= hi_cell[k]) {
        inside = false;
        break;
      }
    }
    if (inside) sum += g.mass()[qc::flat_index(idx, shape)];
  } while (qc::next_multi_index(idx, shape));
  return sum;
}

// Random strictly increasing breakpoint axis on [0,1] with n cells.
inline std::vector<Rat> random_axis(Rng& rng, int n, int max_den = 12) {
  std::set<Rat> cuts;
  while (static_cast<int>(cuts.size()) < n - 1) {
    const int den = rand_int(rng, 2, max_den);
    const int num = rand_int(rng, 1, den - 1);
    cuts.insert(Rat(num, den));
  }
  std::vector<Rat> axis{Rat(0)};
  axis.insert(axis.end(), cuts.begin(), cuts.end());
  axis.emplace_back(1);
  return axis;
}

// Random signed grid on a random mesh; not stochastic, for plumbing tests.
inline MassGrid random_signed_grid(Rng& rng, int d, int max_cells = 4) {
  std::vector<std::vector<Rat>> bps;
  std::vector<int> shape;
  for (int k = 0; k < d; ++k) {
    const int n = rand_int(rng, 1, max_cells);
    bps.push_back(random_axis(rng, n));
    shape.push_back(n);
  }
  std::size_t total = 1;
  for (int s : shape) total *= static_cast<std::size_t>(s);
  std::vector<Rat> mass;
  mass.reserve(total);
  for (std::size_t i = 0; i < total; ++i) mass.push_back(rand_rat(rng, -5, 5, 6));
  return MassGrid::create(std::move(bps), std::move(mass), false);
}

// Random checkerboard copula on the uniform n-mesh: a convex combination of
// permutation diagonals, so every single-cell slab has mass exactly 1/n.
inline MassGrid random_checkerboard_copula(Rng& rng, int d, int n, int terms = 3) {
  std::vector<int> shape(static_cast<std::size_t>(d), n);
  std::size_t total = 1;
  for (int k = 0; k < d; ++k) total *= static_cast<std::size_t>(n);
  std::vector<Rat> mass(total, Rat(0));

  std::vector<int> weights(static_cast<std::size_t>(terms));
  int wsum = 0;
  for (auto& w : weights) {
    w = rand_int(rng, 1, 6);
    wsum += w;
  }
  std::vector<int> base(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) base[static_cast<std::size_t>(i)] = i;
  for (int t = 0; t < terms; ++t) {
    // One permutation per non-leading axis; cell (i, p_2(i), ..., p_d(i)).
    std::vector<std::vector<int>> perms(static_cast<std::size_t>(d - 1), base);
    for (auto& p : perms) std::shuffle(p.begin(), p.end(), rng);
    const Rat w = Rat(weights[static_cast<std::size_t>(t)], wsum) / n;
    for (int i = 0; i < n; ++i) {
      std::vector<int> idx(static_cast<std::size_t>(d));
      idx[0] = i;
      for (int k = 1; k < d; ++k) idx[static_cast<std::size_t>(k)] = perms[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i)];
      mass[qc::flat_index(idx, shape)] += w;
    }
  }
  std::vector<std::vector<Rat>> bps(static_cast<std::size_t>(d), uniform_axis(n));
  return MassGrid::create(std::move(bps), std::move(mass), true);
}

// Random bivariate grid with exact stochastic margins, usually not a
// quasi-copula: a checkerboard copula plus balanced 2x2 perturbations.
inline MassGrid random_stochastic_grid(Rng& rng, int n, int flips = 3) {
  MassGrid base = random_checkerboard_copula(rng, 2, n);
  std::vector<Rat> mass = base.mass();
  const std::vector<int> shape{n, n};
  for (int t = 0; t < flips; ++t) {
    const int i1 = rand_int(rng, 0, n - 1);
    const int j1 = rand_int(rng, 0, n - 1);
    int i2 = rand_int(rng, 0, n - 1);
    int j2 = rand_int(rng, 0, n - 1);
    if (i1 == i2 || j1 == j2) continue;
    const Rat delta = rand_rat(rng, -2, 2, 4 * n);
    mass[qc::flat_index({i1, j1}, shape)] += delta;
    mass[qc::flat_index({i2, j2}, shape)] += delta;
    mass[qc::flat_index({i1, j2}, shape)] -= delta;
    mass[qc::flat_index({i2, j1}, shape)] -= delta;
  }
  return MassGrid::create(base.breakpoints(), std::move(mass), true);
}

}  // namespace qctest
