// SPDX-License-Identifier: MIT
#pragma once

#include "qc/rational.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace qc {

using Point = std::vector<Rat>;

// Axis-aligned closed box [lower, upper], componentwise lower <= upper.
struct Box {
  Point lower;
  Point upper;
};

// Cumulative vertex values of a grid measure on a rectangular mesh; the
// induced CDF is the multilinear interpolation of `values` within each cell.
// `values` is indexed over mesh vertices, last axis fastest.
struct CdfTable {
  std::vector<std::vector<Rat>> breakpoints;
  std::vector<Rat> values;
};

// Dense d-dimensional table of rational masses on half-open cells
// prod_k (a_{i-1}^k, a_i^k]; a finitely-additive signed measure on the box
// algebra, with mass spread uniformly (product measure) within each cell.
// Immutable after construction; the cumulative vertex table is precomputed.
class MassGrid {
 public:
  // Validates shape, strictly increasing breakpoints and, when `normalized`,
  // span [0,1] per axis and total mass exactly 1. Throws std::invalid_argument.
  [[nodiscard]] static MassGrid create(std::vector<std::vector<Rat>> breakpoints,
                                       std::vector<Rat> mass, bool normalized = false);

  [[nodiscard]] int dim() const { return static_cast<int>(breakpoints_.size()); }
  [[nodiscard]] const std::vector<std::vector<Rat>>& breakpoints() const { return breakpoints_; }
  [[nodiscard]] const std::vector<Rat>& mass() const { return mass_; }
  [[nodiscard]] bool normalized() const { return normalized_; }

  // Number of cells along `axis` (breakpoint count minus one).
  [[nodiscard]] int cells(int axis) const {
    return static_cast<int>(breakpoints_[static_cast<std::size_t>(axis)].size()) - 1;
  }
  [[nodiscard]] std::vector<int> cell_shape() const;
  [[nodiscard]] std::size_t total_cells() const { return mass_.size(); }
  [[nodiscard]] Rat total_mass() const;
  [[nodiscard]] Point domain_lower() const;
  [[nodiscard]] Point domain_upper() const;

  // Cumulative mass at mesh vertices: entry at vertex v equals the mass of all
  // cells with index < v componentwise. Vertex-indexed, last axis fastest.
  [[nodiscard]] const std::vector<Rat>& vertex_cdf() const { return vertex_cdf_; }

  friend bool operator==(const MassGrid& a, const MassGrid& b) {
    return a.normalized_ == b.normalized_ && a.breakpoints_ == b.breakpoints_ &&
           a.mass_ == b.mass_;
  }

 private:
  MassGrid() = default;

  std::vector<std::vector<Rat>> breakpoints_;
  std::vector<Rat> mass_;
  bool normalized_ = false;
  std::vector<Rat> vertex_cdf_;
};

// ---------------------------------------------------------------------------
// Dense-table index helpers (last axis fastest).
// ---------------------------------------------------------------------------

[[nodiscard]] std::size_t flat_index(const std::vector<int>& idx, const std::vector<int>& shape);

// Odometer step over [0, shape_0) x ... x [0, shape_{d-1}), last axis fastest.
// Returns false when `idx` wraps back to all zeros.
bool next_multi_index(std::vector<int>& idx, const std::vector<int>& shape);

// ---------------------------------------------------------------------------
// Measure and CDF operations.
// ---------------------------------------------------------------------------

// Signed mass of `box`; partial cells are apportioned by the uniform-spread
// convention, so the result is additive over disjoint box unions and equals
// the plain entry sum on cell-aligned boxes. Throws if the box leaves the
// grid's domain or has lower > upper.
[[nodiscard]] Rat volume(const MassGrid& grid, const Box& box);

// Mass of the box (domain lower corner, point]; multilinear within each cell
// and equal to the cumulative vertex table at mesh vertices. Throws if the
// point is outside the domain.
[[nodiscard]] Rat cdf_at(const MassGrid& grid, const Point& point);

// Mass of the full-width slab over (lo, hi] on `axis`.
[[nodiscard]] Rat margin(const MassGrid& grid, int axis, const Rat& lo, const Rat& hi);

// Re-expresses `grid` on a finer mesh that must contain every existing
// breakpoint and share the domain endpoints; cell masses split proportionally
// to sub-cell Lebesgue volume, so all original cell volumes are preserved.
[[nodiscard]] MassGrid refine_to_mesh(const MassGrid& grid,
                                      const std::vector<std::vector<Rat>>& mesh);

// Both grids re-expressed on the per-axis union of their breakpoints.
// Requires equal dimension and equal domain endpoints.
[[nodiscard]] std::pair<MassGrid, MassGrid> refine_to_common_mesh(const MassGrid& g1,
                                                                  const MassGrid& g2);

struct SupDistance {
  Rat value;
  Point witness;  // common-mesh vertex where |cdf1 - cdf2| attains `value`
};

// Exact sup-norm distance between the induced CDFs. On the common mesh both
// CDFs are multilinear per cell, so their difference attains its extrema at
// cell vertices; the result is the max over common-mesh vertices, together
// with the first witness vertex in lexicographic order.
[[nodiscard]] SupDistance sup_norm_distance_witness(const MassGrid& g1, const MassGrid& g2);
[[nodiscard]] Rat sup_norm_distance(const MassGrid& g1, const MassGrid& g2);

// Cumulative vertex table as a standalone value, and its multilinear
// evaluation at an arbitrary in-domain point.
[[nodiscard]] CdfTable cdf_table(const MassGrid& grid);
[[nodiscard]] Rat cdf_table_at(const CdfTable& table, const Point& point);

// ---------------------------------------------------------------------------
// Stock grids.
// ---------------------------------------------------------------------------

// Checkerboard discretization of the min copula on the uniform n-mesh:
// mass 1/n on each diagonal cell (i, ..., i).
[[nodiscard]] MassGrid min_copula_grid(int n, int d);

// Checkerboard discretization of the product copula on the uniform n-mesh:
// mass n^{-d} on every cell.
[[nodiscard]] MassGrid product_copula_grid(int n, int d);

}  // namespace qc
