// SPDX-License-Identifier: MIT
#pragma once

#include "qc/grid.hpp"
#include "qc/shuffle.hpp"

#include <vector>

namespace qc {

// Block substitution: every cell of A is subdivided proportionally to Q's mesh
// and carries A's cell mass distributed per Q's mass table, i.e. the
// d-dimensional Kronecker product of the two tables. Q is not renormalized;
// the result is flagged normalized when A is and Q has total mass 1. For
// quasi-copula inputs the output is again a quasi-copula.
[[nodiscard]] MassGrid transform(const MassGrid& A, const MassGrid& Q);

// Big-box volume aggregation onto the uniform m-mesh; partial cells are
// apportioned by the uniform-spread convention. Requires a normalized grid.
[[nodiscard]] MassGrid restrict_to_uniform_mesh(const MassGrid& grid, int m);

// Tensor product on the uniform mesh with n = m^2 cells per axis: the small
// box at position s inside big box r carries mass mu_A(box r) * mu_B(box s).
[[nodiscard]] MassGrid tensor_product(const MassGrid& A, const MassGrid& B, int m);

// Diagonal arrangement of m rescaled copies of bivariate Q (its m-mesh
// restriction), zero elsewhere; coarse-grid values match the min copula.
[[nodiscard]] MassGrid ordinal_multiple(const MassGrid& Q, int m);

struct ApproxBounds {
  Rat dist_q1_a1;
  Rat dist_q2_a2;
  Rat bound;  // 2d/m
};

// A1 = Q1 (x)_m Q2, A2 = Q2 (x)_m Q1, related exactly by the block-transposing
// shuffle; both within 2d/m of their targets in sup norm.
struct ApproxPair {
  MassGrid a1;
  MassGrid a2;
  ShuffleSpec spec;
  int m = 0;
  ApproxBounds certified;
};

// Builds the pair, computes exact sup-norm distances, and certifies both the
// shuffle identity and the 2d/m bound (std::logic_error on violation, which
// would signal an implementation bug, never bad input).
[[nodiscard]] ApproxPair approx_pair(const MassGrid& q1, const MassGrid& q2, int m);

// Mesh parameter guaranteeing approximation error below eps: ceil(2d/eps)+1.
[[nodiscard]] int mesh_for_epsilon(const Rat& eps, int d);

enum class EnvelopeMode { inf_of_sup, sup_of_inf };

// Two-stage pointwise extremum over groups of CDF tables sharing one mesh:
// inf over groups of (sup within group), or the dual. A single group degrades
// to a plain pointwise sup (resp. inf).
[[nodiscard]] CdfTable envelope(const std::vector<std::vector<CdfTable>>& groups,
                                EnvelopeMode mode);

}  // namespace qc
