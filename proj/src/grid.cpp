// SPDX-License-Identifier: MIT
#include "qc/grid.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qc {

// ===========================================================================
// Index helpers
// ===========================================================================

std::size_t flat_index(const std::vector<int>& idx, const std::vector<int>& shape) {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < shape.size(); ++k) {
    flat = flat * static_cast<std::size_t>(shape[k]) + static_cast<std::size_t>(idx[k]);
  }
  return flat;
}

bool next_multi_index(std::vector<int>& idx, const std::vector<int>& shape) {
  for (std::size_t k = shape.size(); k-- > 0;) {
    if (++idx[k] < shape[k]) return true;
    idx[k] = 0;
  }
  return false;
}

namespace {

std::size_t shape_size(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int s : shape) n *= static_cast<std::size_t>(s);
  return n;
}

std::vector<int> vertex_shape(const std::vector<std::vector<Rat>>& bps) {
  std::vector<int> shape;
  shape.reserve(bps.size());
  for (const auto& axis : bps) shape.push_back(static_cast<int>(axis.size()));
  return shape;
}

// Cell index and interpolation fraction for coordinate x on one axis:
// bps[i] <= x <= bps[i+1] with t = 0 exactly at the lower vertex.
std::pair<int, Rat> locate(const std::vector<Rat>& bps, const Rat& x) {
  if (x < bps.front() || x > bps.back()) {
    throw std::invalid_argument("coordinate outside grid domain");
  }
  auto it = std::lower_bound(bps.begin(), bps.end(), x);
  auto v = static_cast<std::size_t>(it - bps.begin());
  if (bps[v] == x) {
    if (v + 1 == bps.size()) return {static_cast<int>(v) - 1, Rat(1)};
    return {static_cast<int>(v), Rat(0)};
  }
  return {static_cast<int>(v) - 1, (x - bps[v - 1]) / (bps[v] - bps[v - 1])};
}

Rat interpolate(const std::vector<std::vector<Rat>>& bps, const std::vector<Rat>& vertex_values,
                const Point& point) {
  const std::size_t d = bps.size();
  if (point.size() != d) throw std::invalid_argument("point dimension mismatch");
  std::vector<int> cell(d);
  std::vector<Rat> t(d);
  for (std::size_t k = 0; k < d; ++k) {
    auto [i, frac] = locate(bps[k], point[k]);
    cell[k] = i;
    t[k] = frac;
  }
  const std::vector<int> vshape = vertex_shape(bps);
  Rat sum = 0;
  std::vector<int> corner(d, 0);
  const std::vector<int> two(d, 2);
  do {
    Rat w = 1;
    std::vector<int> v(d);
    for (std::size_t k = 0; k < d; ++k) {
      w *= corner[k] ? t[k] : Rat(1) - t[k];
      v[k] = cell[k] + corner[k];
    }
    if (w != 0) sum += w * vertex_values[flat_index(v, vshape)];
  } while (next_multi_index(corner, two));
  return sum;
}

}  // namespace

// ===========================================================================
// MassGrid
// ===========================================================================

MassGrid MassGrid::create(std::vector<std::vector<Rat>> breakpoints, std::vector<Rat> mass,
                          bool normalized) {
  if (breakpoints.empty()) throw std::invalid_argument("grid needs at least one axis");
  std::size_t expected = 1;
  for (const auto& axis : breakpoints) {
    if (axis.size() < 2) throw std::invalid_argument("axis needs at least two breakpoints");
    for (std::size_t i = 1; i < axis.size(); ++i) {
      if (!(axis[i - 1] < axis[i])) {
        throw std::invalid_argument("breakpoints must be strictly increasing");
      }
    }
    expected *= axis.size() - 1;
  }
  if (mass.size() != expected) {
    throw std::invalid_argument("mass table shape does not match breakpoint counts");
  }
  if (normalized) {
    for (const auto& axis : breakpoints) {
      if (axis.front() != 0 || axis.back() != 1) {
        throw std::invalid_argument("normalized grid must span [0,1] on every axis");
      }
    }
    Rat total = 0;
    for (const Rat& m : mass) total += m;
    if (total != 1) throw std::invalid_argument("normalized grid must have total mass 1");
  }

  MassGrid g;
  g.breakpoints_ = std::move(breakpoints);
  g.mass_ = std::move(mass);
  g.normalized_ = normalized;

  // Cumulative vertex table: seed with the cell mass below each vertex, then
  // prefix-sum along every axis.
  const std::vector<int> vshape = vertex_shape(g.breakpoints_);
  const std::vector<int> cshape = g.cell_shape();
  const std::size_t d = g.breakpoints_.size();
  std::vector<Rat> table(shape_size(vshape), Rat(0));
  {
    std::vector<int> v(d, 0);
    do {
      bool interior = true;
      for (std::size_t k = 0; k < d; ++k) {
        if (v[k] == 0) {
          interior = false;
          break;
        }
      }
      if (interior) {
        std::vector<int> c(d);
        for (std::size_t k = 0; k < d; ++k) c[k] = v[k] - 1;
        table[flat_index(v, vshape)] = g.mass_[flat_index(c, cshape)];
      }
    } while (next_multi_index(v, vshape));
  }
  for (std::size_t k = 0; k < d; ++k) {
    std::vector<int> v(d, 0);
    do {
      if (v[k] >= 1) {
        std::vector<int> prev = v;
        --prev[k];
        table[flat_index(v, vshape)] += table[flat_index(prev, vshape)];
      }
    } while (next_multi_index(v, vshape));
  }
  g.vertex_cdf_ = std::move(table);
  return g;
}

std::vector<int> MassGrid::cell_shape() const {
  std::vector<int> shape;
  shape.reserve(breakpoints_.size());
  for (const auto& axis : breakpoints_) shape.push_back(static_cast<int>(axis.size()) - 1);
  return shape;
}

Rat MassGrid::total_mass() const {
  Rat total = 0;
  for (const Rat& m : mass_) total += m;
  return total;
}

Point MassGrid::domain_lower() const {
  Point p;
  p.reserve(breakpoints_.size());
  for (const auto& axis : breakpoints_) p.push_back(axis.front());
  return p;
}

Point MassGrid::domain_upper() const {
  Point p;
  p.reserve(breakpoints_.size());
  for (const auto& axis : breakpoints_) p.push_back(axis.back());
  return p;
}

// ===========================================================================
// Measure and CDF operations
// ===========================================================================

Rat cdf_at(const MassGrid& grid, const Point& point) {
  return interpolate(grid.breakpoints(), grid.vertex_cdf(), point);
}

Rat volume(const MassGrid& grid, const Box& box) {
  const std::size_t d = static_cast<std::size_t>(grid.dim());
  if (box.lower.size() != d || box.upper.size() != d) {
    throw std::invalid_argument("box dimension mismatch");
  }
  for (std::size_t k = 0; k < d; ++k) {
    if (box.lower[k] > box.upper[k]) throw std::invalid_argument("box has lower > upper");
  }
  // Alternating corner sum of the CDF; sign is parity of lower-corner picks.
  Rat sum = 0;
  std::vector<int> pick(d, 0);
  const std::vector<int> two(d, 2);
  do {
    int lows = 0;
    Point corner(d);
    for (std::size_t k = 0; k < d; ++k) {
      if (pick[k]) {
        corner[k] = box.upper[k];
      } else {
        corner[k] = box.lower[k];
        ++lows;
      }
    }
    const Rat value = cdf_at(grid, corner);
    sum += (lows % 2 == 0) ? value : -value;
  } while (next_multi_index(pick, two));
  return sum;
}

Rat margin(const MassGrid& grid, int axis, const Rat& lo, const Rat& hi) {
  if (axis < 0 || axis >= grid.dim()) throw std::invalid_argument("margin: bad axis");
  Box slab{grid.domain_lower(), grid.domain_upper()};
  slab.lower[static_cast<std::size_t>(axis)] = lo;
  slab.upper[static_cast<std::size_t>(axis)] = hi;
  return volume(grid, slab);
}

MassGrid refine_to_mesh(const MassGrid& grid, const std::vector<std::vector<Rat>>& mesh) {
  const std::size_t d = static_cast<std::size_t>(grid.dim());
  if (mesh.size() != d) throw std::invalid_argument("refine: dimension mismatch");

  // Per axis: containing old cell and Lebesgue fraction for each new cell.
  std::vector<std::vector<int>> cell_of(d);
  std::vector<std::vector<Rat>> frac_of(d);
  for (std::size_t k = 0; k < d; ++k) {
    const auto& oldb = grid.breakpoints()[k];
    const auto& newb = mesh[k];
    if (newb.front() != oldb.front() || newb.back() != oldb.back()) {
      throw std::invalid_argument("refine: mesh must share the domain endpoints");
    }
    for (const Rat& b : oldb) {
      if (!std::binary_search(newb.begin(), newb.end(), b)) {
        throw std::invalid_argument("refine: mesh must contain every existing breakpoint");
      }
    }
    for (std::size_t j = 0; j + 1 < newb.size(); ++j) {
      auto it = std::upper_bound(oldb.begin(), oldb.end(), newb[j]);
      const auto c = static_cast<std::size_t>(it - oldb.begin()) - 1;
      cell_of[k].push_back(static_cast<int>(c));
      frac_of[k].push_back((newb[j + 1] - newb[j]) / (oldb[c + 1] - oldb[c]));
    }
  }

  std::vector<int> new_shape(d);
  for (std::size_t k = 0; k < d; ++k) new_shape[k] = static_cast<int>(cell_of[k].size());
  const std::vector<int> old_shape = grid.cell_shape();

  std::vector<Rat> mass(shape_size(new_shape));
  std::vector<int> idx(d, 0);
  do {
    std::vector<int> old_idx(d);
    Rat frac = 1;
    for (std::size_t k = 0; k < d; ++k) {
      old_idx[k] = cell_of[k][static_cast<std::size_t>(idx[k])];
      frac *= frac_of[k][static_cast<std::size_t>(idx[k])];
    }
    mass[flat_index(idx, new_shape)] = grid.mass()[flat_index(old_idx, old_shape)] * frac;
  } while (next_multi_index(idx, new_shape));

  return MassGrid::create(mesh, std::move(mass), grid.normalized());
}

std::pair<MassGrid, MassGrid> refine_to_common_mesh(const MassGrid& g1, const MassGrid& g2) {
  if (g1.dim() != g2.dim()) throw std::invalid_argument("dimension mismatch");
  const std::size_t d = static_cast<std::size_t>(g1.dim());
  std::vector<std::vector<Rat>> mesh(d);
  for (std::size_t k = 0; k < d; ++k) {
    const auto& a = g1.breakpoints()[k];
    const auto& b = g2.breakpoints()[k];
    if (a.front() != b.front() || a.back() != b.back()) {
      throw std::invalid_argument("grids must share the domain");
    }
    std::set<Rat> merged(a.begin(), a.end());
    merged.insert(b.begin(), b.end());
    mesh[k].assign(merged.begin(), merged.end());
  }
  return {refine_to_mesh(g1, mesh), refine_to_mesh(g2, mesh)};
}

SupDistance sup_norm_distance_witness(const MassGrid& g1, const MassGrid& g2) {
  auto [r1, r2] = refine_to_common_mesh(g1, g2);
  const auto& bps = r1.breakpoints();
  const std::vector<int> vshape = vertex_shape(bps);
  const auto& c1 = r1.vertex_cdf();
  const auto& c2 = r2.vertex_cdf();

  SupDistance best{Rat(0), Point(bps.size())};
  for (std::size_t k = 0; k < bps.size(); ++k) best.witness[k] = bps[k].front();
  std::vector<int> v(bps.size(), 0);
  do {
    const std::size_t f = flat_index(v, vshape);
    Rat diff = c1[f] - c2[f];
    if (diff < 0) diff = -diff;
    if (diff > best.value) {
      best.value = diff;
      for (std::size_t k = 0; k < bps.size(); ++k) {
        best.witness[k] = bps[k][static_cast<std::size_t>(v[k])];
      }
    }
  } while (next_multi_index(v, vshape));
  return best;
}

Rat sup_norm_distance(const MassGrid& g1, const MassGrid& g2) {
  return sup_norm_distance_witness(g1, g2).value;
}

CdfTable cdf_table(const MassGrid& grid) {
  return CdfTable{grid.breakpoints(), grid.vertex_cdf()};
}

Rat cdf_table_at(const CdfTable& table, const Point& point) {
  return interpolate(table.breakpoints, table.values, point);
}

// ===========================================================================
// Stock grids
// ===========================================================================

namespace {

std::vector<std::vector<Rat>> uniform_mesh(int n, int d) {
  std::vector<Rat> axis;
  axis.reserve(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) axis.emplace_back(i, n);
  return std::vector<std::vector<Rat>>(static_cast<std::size_t>(d), axis);
}

}  // namespace

MassGrid min_copula_grid(int n, int d) {
  if (n < 1 || d < 1) throw std::invalid_argument("min_copula_grid: bad size");
  std::vector<int> shape(static_cast<std::size_t>(d), n);
  std::vector<Rat> mass(shape_size(shape), Rat(0));
  for (int i = 0; i < n; ++i) {
    std::vector<int> idx(static_cast<std::size_t>(d), i);
    mass[flat_index(idx, shape)] = Rat(1, n);
  }
  return MassGrid::create(uniform_mesh(n, d), std::move(mass), true);
}

MassGrid product_copula_grid(int n, int d) {
  if (n < 1 || d < 1) throw std::invalid_argument("product_copula_grid: bad size");
  std::vector<int> shape(static_cast<std::size_t>(d), n);
  Rat cell = 1;
  for (int k = 0; k < d; ++k) cell /= n;
  std::vector<Rat> mass(shape_size(shape), cell);
  return MassGrid::create(uniform_mesh(n, d), std::move(mass), true);
}

}  // namespace qc
