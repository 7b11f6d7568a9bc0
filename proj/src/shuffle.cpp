// SPDX-License-Identifier: MIT
#include "qc/shuffle.hpp"

#include "qc/verify.hpp"

#include <algorithm>
#include <cstddef>
#include <set>
#include <stdexcept>
#include <string>

namespace qc {

namespace {

std::size_t shape_product(const std::vector<int>& shape) {
  std::size_t total = 1;
  for (int n : shape) total *= static_cast<std::size_t>(n);
  return total;
}

void validate_axis(const ShuffleAxis& axis, const Rat& span, int k) {
  const std::string where = "apply_shuffle: axis " + std::to_string(k + 1);
  const std::size_t m = axis.lengths.size();
  if (m == 0) throw std::invalid_argument(where + " has no intervals");
  if (axis.perm.size() != m) {
    throw std::invalid_argument(where + " permutation size differs from interval count");
  }
  Rat sum = 0;
  for (const Rat& len : axis.lengths) {
    if (len <= 0) throw std::invalid_argument(where + " has a non-positive interval length");
    sum += len;
  }
  if (sum != span) {
    throw std::invalid_argument(where + " interval lengths must sum to the axis span");
  }
  std::vector<bool> seen(m, false);
  for (int p : axis.perm) {
    if (p < 0 || p >= static_cast<int>(m) || seen[static_cast<std::size_t>(p)]) {
      throw std::invalid_argument(where + " slots are not a permutation");
    }
    seen[static_cast<std::size_t>(p)] = true;
  }
}

}  // namespace

// ============================================================
// Interval shuffles
// ============================================================

MassGrid apply_shuffle(const MassGrid& grid, const ShuffleSpec& spec) {
  const std::size_t d = static_cast<std::size_t>(grid.dim());
  if (spec.axes.size() != d) {
    throw std::invalid_argument("apply_shuffle: spec axis count must match grid dimension");
  }

  // Interval cut points c_0 < ... < c_m and target offsets per axis.
  std::vector<std::vector<Rat>> cuts(d), offsets(d), meshes(d);
  for (std::size_t k = 0; k < d; ++k) {
    const auto& bps = grid.breakpoints()[k];
    const ShuffleAxis& ax = spec.axes[k];
    validate_axis(ax, bps.back() - bps.front(), static_cast<int>(k));
    const std::size_t m = ax.lengths.size();
    cuts[k].resize(m + 1);
    cuts[k][0] = bps.front();
    for (std::size_t i = 0; i < m; ++i) cuts[k][i + 1] = cuts[k][i] + ax.lengths[i];
    offsets[k].resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      Rat off = bps.front();
      for (std::size_t j = 0; j < m; ++j) {
        if (ax.perm[j] < ax.perm[i]) off += ax.lengths[j];
      }
      offsets[k][i] = off;
    }
    std::set<Rat> mesh(bps.begin(), bps.end());
    mesh.insert(cuts[k].begin(), cuts[k].end());
    meshes[k].assign(mesh.begin(), mesh.end());
  }

  // After refinement every cell lies inside a single interval per axis, so the
  // pushforward is a per-cell translation.
  const MassGrid refined = refine_to_mesh(grid, meshes);
  const std::vector<int> rshape = refined.cell_shape();

  std::vector<std::vector<Rat>> tbps(d);
  std::vector<std::vector<int>> tcell(d);
  for (std::size_t k = 0; k < d; ++k) {
    const auto& rb = refined.breakpoints()[k];
    const auto& c = cuts[k];
    const int cells = rshape[k];
    std::set<Rat> ts;
    ts.insert(rb.front());
    for (const Rat& off : offsets[k]) ts.insert(off);
    std::vector<int> interval(static_cast<std::size_t>(cells));
    for (int r = 0; r < cells; ++r) {
      const int i =
          static_cast<int>(std::upper_bound(c.begin(), c.end(), rb[static_cast<std::size_t>(r)]) -
                           c.begin()) -
          1;
      interval[static_cast<std::size_t>(r)] = i;
      ts.insert(rb[static_cast<std::size_t>(r) + 1] - c[static_cast<std::size_t>(i)] +
                offsets[k][static_cast<std::size_t>(i)]);
    }
    tbps[k].assign(ts.begin(), ts.end());
    tcell[k].resize(static_cast<std::size_t>(cells));
    for (int r = 0; r < cells; ++r) {
      const int i = interval[static_cast<std::size_t>(r)];
      const Rat img = rb[static_cast<std::size_t>(r)] - c[static_cast<std::size_t>(i)] +
                      offsets[k][static_cast<std::size_t>(i)];
      const auto it = std::lower_bound(tbps[k].begin(), tbps[k].end(), img);
      tcell[k][static_cast<std::size_t>(r)] = static_cast<int>(it - tbps[k].begin());
    }
  }

  std::vector<int> tshape(d);
  for (std::size_t k = 0; k < d; ++k) tshape[k] = static_cast<int>(tbps[k].size()) - 1;
  std::vector<Rat> tmass(shape_product(tshape), Rat(0));
  std::vector<int> idx(d, 0);
  std::vector<int> t(d);
  do {
    for (std::size_t k = 0; k < d; ++k) t[k] = tcell[k][static_cast<std::size_t>(idx[k])];
    tmass[flat_index(t, tshape)] += refined.mass()[flat_index(idx, rshape)];
  } while (next_multi_index(idx, rshape));

  return MassGrid::create(tbps, tmass, grid.normalized());
}

ShuffleSpec pi_n_spec(int m, int d) {
  if (m < 1 || d < 1) throw std::invalid_argument("pi_n_spec: m and d must be positive");
  const int n = m * m;
  ShuffleAxis axis;
  axis.lengths.assign(static_cast<std::size_t>(n), Rat(1, n));
  axis.perm.resize(static_cast<std::size_t>(n));
  for (int j = 1; j <= m; ++j) {
    for (int k = 1; k <= m; ++k) {
      axis.perm[static_cast<std::size_t>(m * (j - 1) + k - 1)] = m * (k - 1) + j - 1;
    }
  }
  return ShuffleSpec{std::vector<ShuffleAxis>(static_cast<std::size_t>(d), axis)};
}

// ============================================================
// Shuffle-of-min interpolation
// ============================================================

namespace {

// Coordinates of S per axis plus {0,1}, every axis padded to the size of the
// largest one. Fill points are placed equally spaced inside the widest gap
// (leftmost on ties); any valid padding yields a correct interpolant.
std::vector<std::vector<Rat>> padded_mesh(const std::vector<Point>& S, std::size_t d) {
  std::vector<std::set<Rat>> sets(d);
  for (std::size_t k = 0; k < d; ++k) {
    sets[k].insert(Rat(0));
    sets[k].insert(Rat(1));
  }
  for (const Point& p : S) {
    if (p.size() != d) throw std::invalid_argument("som_interpolate: point dimension mismatch");
    for (std::size_t k = 0; k < d; ++k) {
      if (p[k] < 0 || p[k] > 1) {
        throw std::invalid_argument("som_interpolate: points must lie in the unit cube");
      }
      sets[k].insert(p[k]);
    }
  }
  std::size_t target = 0;
  for (const auto& s : sets) target = std::max(target, s.size());
  std::vector<std::vector<Rat>> mesh(d);
  for (std::size_t k = 0; k < d; ++k) {
    mesh[k].assign(sets[k].begin(), sets[k].end());
    const std::size_t missing = target - mesh[k].size();
    if (missing == 0) continue;
    std::size_t g = 0;
    Rat widest = mesh[k][1] - mesh[k][0];
    for (std::size_t i = 1; i + 1 < mesh[k].size(); ++i) {
      const Rat w = mesh[k][i + 1] - mesh[k][i];
      if (w > widest) {
        widest = w;
        g = i;
      }
    }
    std::vector<Rat> fill(missing);
    for (std::size_t t = 1; t <= missing; ++t) {
      fill[t - 1] = mesh[k][g] + widest * Rat(static_cast<long>(t), static_cast<long>(missing + 1));
    }
    mesh[k].insert(mesh[k].begin() + static_cast<std::ptrdiff_t>(g) + 1, fill.begin(), fill.end());
  }
  return mesh;
}

}  // namespace

ShuffleOfMin som_interpolate(const CdfTable& C, const std::vector<Point>& S) {
  const std::size_t d = C.breakpoints.size();
  if (d == 0) throw std::invalid_argument("som_interpolate: empty CDF table");
  for (std::size_t k = 0; k < d; ++k) {
    if (C.breakpoints[k].front() != 0 || C.breakpoints[k].back() != 1) {
      throw std::invalid_argument("som_interpolate: CDF table must span the unit cube");
    }
  }

  const auto mesh = padded_mesh(S, d);
  std::vector<int> vshape(d), cshape(d);
  for (std::size_t k = 0; k < d; ++k) {
    vshape[k] = static_cast<int>(mesh[k].size());
    cshape[k] = vshape[k] - 1;
  }

  std::vector<Rat> vals(shape_product(vshape));
  std::vector<int> v(d, 0);
  Point p(d);
  do {
    for (std::size_t k = 0; k < d; ++k) p[k] = mesh[k][static_cast<std::size_t>(v[k])];
    vals[flat_index(v, vshape)] = cdf_table_at(C, p);
  } while (next_multi_index(v, vshape));

  // Tiling prerequisites: grounded, uniform margins, total mass 1.
  std::fill(v.begin(), v.end(), 0);
  do {
    const Rat& val = vals[flat_index(v, vshape)];
    bool any_zero = false;
    int non_max = 0;
    std::size_t non_max_axis = 0;
    for (std::size_t k = 0; k < d; ++k) {
      if (v[k] == 0) any_zero = true;
      if (v[k] != cshape[k]) {
        ++non_max;
        non_max_axis = k;
      }
    }
    if (any_zero) {
      if (val != 0) {
        throw std::invalid_argument("som_interpolate: CDF is not grounded at a mesh vertex");
      }
    } else if (non_max == 0) {
      if (val != 1) throw std::invalid_argument("som_interpolate: total CDF mass is not 1");
    } else if (non_max == 1) {
      if (val != mesh[non_max_axis][static_cast<std::size_t>(v[non_max_axis])]) {
        throw std::invalid_argument("som_interpolate: CDF margins are not uniform at a mesh vertex");
      }
    }
  } while (next_multi_index(v, vshape));

  // Box volumes on the padded mesh; each must be nonnegative.
  std::vector<Rat> mu(shape_product(cshape));
  std::vector<int> ci(d, 0);
  std::vector<int> corner(d);
  do {
    Rat vol = 0;
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      int lowers = 0;
      for (std::size_t k = 0; k < d; ++k) {
        if ((mask >> k) & 1u) {
          corner[k] = ci[k];
          ++lowers;
        } else {
          corner[k] = ci[k] + 1;
        }
      }
      const Rat& cv = vals[flat_index(corner, vshape)];
      vol += (lowers % 2 == 0) ? cv : -cv;
    }
    if (vol < 0) {
      throw std::invalid_argument(
          "som_interpolate: negative box volume; input is not a copula on the interpolation mesh");
    }
    mu[flat_index(ci, cshape)] = vol;
  } while (next_multi_index(ci, cshape));

  // Lexicographic accumulation (first axis most significant): the start of
  // segment i along axis k is the mesh point below it plus the mass of all
  // lex-earlier cells in the same axis-k layer.
  ShuffleOfMin out;
  out.dim = static_cast<int>(d);
  std::vector<std::vector<Rat>> acc(d);
  for (std::size_t k = 0; k < d; ++k) acc[k].assign(static_cast<std::size_t>(cshape[k]), Rat(0));
  std::fill(ci.begin(), ci.end(), 0);
  do {
    const Rat& m_i = mu[flat_index(ci, cshape)];
    if (m_i > 0) {
      SomSegment seg;
      seg.start.resize(d);
      for (std::size_t k = 0; k < d; ++k) {
        seg.start[k] = mesh[k][static_cast<std::size_t>(ci[k])] + acc[k][static_cast<std::size_t>(ci[k])];
      }
      seg.mass = m_i;
      out.segments.push_back(std::move(seg));
      for (std::size_t k = 0; k < d; ++k) acc[k][static_cast<std::size_t>(ci[k])] += m_i;
    }
  } while (next_multi_index(ci, cshape));
  return out;
}

ShuffleOfMin som_interpolate(const MassGrid& C, const std::vector<Point>& S) {
  if (!check_copula(C).passed) {
    throw std::invalid_argument("som_interpolate: input grid fails the copula check");
  }
  return som_interpolate(cdf_table(C), S);
}

Rat som_cdf_at(const ShuffleOfMin& som, const Point& point) {
  if (static_cast<int>(point.size()) != som.dim) {
    throw std::invalid_argument("som_cdf_at: point dimension mismatch");
  }
  for (const Rat& x : point) {
    if (x < 0 || x > 1) throw std::invalid_argument("som_cdf_at: point outside the unit cube");
  }
  Rat total = 0;
  for (const SomSegment& seg : som.segments) {
    Rat t = point[0] - seg.start[0];
    for (std::size_t k = 1; k < point.size(); ++k) {
      const Rat c = point[k] - seg.start[k];
      if (c < t) t = c;
    }
    if (t > seg.mass) t = seg.mass;
    if (t > 0) total += t;
  }
  return total;
}

MassGrid som_to_grid(const ShuffleOfMin& som, const std::vector<std::vector<Rat>>& mesh) {
  const std::size_t d = static_cast<std::size_t>(som.dim);
  if (mesh.size() != d) throw std::invalid_argument("som_to_grid: mesh dimension mismatch");
  for (std::size_t k = 0; k < d; ++k) {
    if (mesh[k].size() < 2 || mesh[k].front() != 0 || mesh[k].back() != 1) {
      throw std::invalid_argument("som_to_grid: mesh must span the unit cube");
    }
  }
  const auto contains = [](const std::vector<Rat>& b, const Rat& x) {
    const auto it = std::lower_bound(b.begin(), b.end(), x);
    return it != b.end() && *it == x;
  };
  for (const SomSegment& seg : som.segments) {
    if (seg.start.size() != d) throw std::invalid_argument("som_to_grid: segment dimension mismatch");
    for (std::size_t k = 0; k < d; ++k) {
      if (!contains(mesh[k], seg.start[k]) || !contains(mesh[k], seg.start[k] + seg.mass)) {
        throw std::invalid_argument("som_to_grid: mesh is missing a segment endpoint");
      }
    }
  }

  std::vector<int> shape(d);
  for (std::size_t k = 0; k < d; ++k) shape[k] = static_cast<int>(mesh[k].size()) - 1;
  std::vector<Rat> mass(shape_product(shape), Rat(0));

  // Walk each diagonal: between consecutive crossing parameters the segment
  // stays inside one cell and deposits the parameter increment as mass.
  std::vector<int> cell(d);
  for (const SomSegment& seg : som.segments) {
    if (seg.mass <= 0) continue;
    std::set<Rat> ts;
    ts.insert(Rat(0));
    ts.insert(seg.mass);
    for (std::size_t k = 0; k < d; ++k) {
      for (const Rat& b : mesh[k]) {
        const Rat t = b - seg.start[k];
        if (t > 0 && t < seg.mass) ts.insert(t);
      }
    }
    auto it = ts.begin();
    Rat t1 = *it;
    for (++it; it != ts.end(); ++it) {
      const Rat& t2 = *it;
      for (std::size_t k = 0; k < d; ++k) {
        const Rat x = seg.start[k] + t1;
        cell[k] = static_cast<int>(std::upper_bound(mesh[k].begin(), mesh[k].end(), x) -
                                   mesh[k].begin()) -
                  1;
      }
      mass[flat_index(cell, shape)] += t2 - t1;
      t1 = t2;
    }
  }
  return MassGrid::create(mesh, mass, true);
}

std::vector<std::vector<Rat>> som_endpoint_mesh(const ShuffleOfMin& som) {
  const std::size_t d = static_cast<std::size_t>(som.dim);
  std::vector<std::set<Rat>> sets(d);
  for (std::size_t k = 0; k < d; ++k) {
    sets[k].insert(Rat(0));
    sets[k].insert(Rat(1));
  }
  for (const SomSegment& seg : som.segments) {
    for (std::size_t k = 0; k < d; ++k) {
      sets[k].insert(seg.start[k]);
      sets[k].insert(seg.start[k] + seg.mass);
    }
  }
  std::vector<std::vector<Rat>> mesh(d);
  for (std::size_t k = 0; k < d; ++k) mesh[k].assign(sets[k].begin(), sets[k].end());
  return mesh;
}

}  // namespace qc
