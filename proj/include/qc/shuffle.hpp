// SPDX-License-Identifier: MIT
#pragma once

#include "qc/grid.hpp"

#include <vector>

namespace qc {

// One axis of an interval shuffle: the axis span splits into intervals of the
// given positive lengths; interval i is moved to slot perm[i]. perm is stored
// 0-based; the JSON form is 1-based.
struct ShuffleAxis {
  std::vector<Rat> lengths;
  std::vector<int> perm;
};

struct ShuffleSpec {
  std::vector<ShuffleAxis> axes;
};

// Diagonal support segment: mass spread uniformly along start + t(1,...,1)
// for t in (0, mass].
struct SomSegment {
  std::vector<Rat> start;
  Rat mass;
};

// Shuffle-of-min measure on [0,1]^d. Invariant: per axis, the intervals
// [start_k, start_k + mass] of the segments tile [0,1]; total mass is 1.
struct ShuffleOfMin {
  int dim = 0;
  std::vector<SomSegment> segments;
};

// Pushforward of the grid measure under the coordinatewise piecewise interval
// translations; the grid is refined to the interval boundaries first. Per axis
// the lengths must sum to the axis span. Total mass and per-interval slab
// masses are preserved.
[[nodiscard]] MassGrid apply_shuffle(const MassGrid& grid, const ShuffleSpec& spec);

// n = m^2 equal intervals of length 1/n on each of the d axes, with the
// block-transposing permutation m(j-1)+k -> m(k-1)+j (an involution).
[[nodiscard]] ShuffleSpec pi_n_spec(int m, int d);

// Straight shuffle of min whose CDF agrees with C at every point of S and at
// every vertex of the mesh generated per axis by the coordinates of S plus
// {0,1}, padded to a common size. Throws std::invalid_argument when C fails
// check_copula.
[[nodiscard]] ShuffleOfMin som_interpolate(const MassGrid& C,
                                           const std::vector<Point>& S);

// Same construction from a CDF table; the table must be grounded, have
// uniform margins, and produce nonnegative box volumes on the padded mesh.
[[nodiscard]] ShuffleOfMin som_interpolate(const CdfTable& C,
                                           const std::vector<Point>& S);

// Measure of (0, point] under the diagonal-segment measure:
// sum of clamp(min_k(point_k - start_k), 0, mass) over segments.
[[nodiscard]] Rat som_cdf_at(const ShuffleOfMin& som, const Point& point);

// Checkerboard discretization: each cell receives the diagonal length falling
// inside it. Every segment endpoint must be a mesh breakpoint; the grid CDF
// then equals som_cdf_at at all mesh vertices.
[[nodiscard]] MassGrid som_to_grid(const ShuffleOfMin& som,
                                   const std::vector<std::vector<Rat>>& mesh);

// Per-axis sorted breakpoint sets containing {0,1} and all segment endpoints;
// the coarsest mesh accepted by som_to_grid.
[[nodiscard]] std::vector<std::vector<Rat>> som_endpoint_mesh(const ShuffleOfMin& som);

}  // namespace qc
