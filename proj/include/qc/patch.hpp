// SPDX-License-Identifier: MIT
#pragma once

#include "qc/grid.hpp"

#include <json.hpp>

#include <array>
#include <string>
#include <vector>

namespace qc {

// Signed mass pattern on an m x n patch: i counts columns west->east,
// j counts rows south->north, both 1-based; storage is row-major bottom row
// first.
struct PatchPattern {
  int m = 0;
  int n = 0;
  std::vector<Rat> values;

  [[nodiscard]] const Rat& at(int i, int j) const {
    return values[static_cast<std::size_t>((j - 1) * m + (i - 1))];
  }
};

// Per-line completion bounds: mu_h_* indexed by row j, mu_v_* by column i.
// mu_h0[j] = mu_h_minus[j] + row sum + mu_h_plus[j] is the row's minimal
// total; mu is the maximum over all line totals (the smallest feasible level).
struct PatchBounds {
  std::vector<Rat> mu_h_minus, mu_h_plus;
  std::vector<Rat> mu_v_minus, mu_v_plus;
  std::vector<Rat> mu_h0, mu_v0;
  Rat mu;
  Rat v0;
};

enum class ForkStrategy { half, west_north, east_south, custom };

// Custom forking fractions in [0,1]: w_h[j] of a row's missing mass goes to
// the west cell, w_v[i] of a column's missing mass to the south cell.
struct ForkWeights {
  std::vector<Rat> w_h;
  std::vector<Rat> w_v;
};

// Border cell values after distributing each line's missing mass:
// x_minus[j] + row sum + x_plus[j] = mu and likewise for columns.
struct Forking {
  std::vector<Rat> x_minus, x_plus;
  std::vector<Rat> y_minus, y_plus;
  ForkStrategy strategy = ForkStrategy::half;
};

enum class ExtraKind { none, north_row, east_col, south_row, west_col };

// Corner masses by compass position plus at most one extra line holding two
// cells: extra_a sits at the west (row kinds) or south (column kinds) end,
// extra_b at the opposite end.
struct CornerPlacement {
  Rat sw, se, nw, ne;
  ExtraKind extra = ExtraKind::none;
  Rat extra_a, extra_b;
  std::string case_id;
};

// Square extension: table is row-major bottom row first, table[(r-1)*N+(c-1)]
// for 1-based row r and column c; the pattern occupies columns
// patch_col..patch_col+m-1 and rows patch_row..patch_row+n-1. Every row and
// column sums to mu and every cell outside the pattern is nonnegative.
struct ExtensionResult {
  int N = 0;
  Rat mu;
  std::vector<Rat> table;
  int patch_col = 0;
  int patch_row = 0;
  CornerPlacement corners;
  nlohmann::json trace = nlohmann::json::array();
};

struct ExtendOptions {
  ForkStrategy strategy = ForkStrategy::half;
  ForkWeights weights;  // consulted only for ForkStrategy::custom
  bool mirror_h = false;
  bool mirror_v = false;
  bool with_trace = true;
};

// Minimal per-line completion bounds and the level mu. Throws
// std::invalid_argument when mu <= 0 (all-zero pattern), which admits no
// extension.
[[nodiscard]] PatchBounds bounds(const PatchPattern& pattern);

// Bordered (m+2) x (n+2) grid on the unit-integer mesh: west/east columns hold
// mu_h_minus/mu_h_plus, south/north rows mu_v_minus/mu_v_plus, corner cells 0.
// Every boundary-touching rectangle of this grid has nonnegative mass.
[[nodiscard]] MassGrid geometric_extend(const PatchPattern& pattern, const PatchBounds& b);

// Distributes each line's missing mass mu - mu_?0 between its two border
// cells per the strategy. Throws on malformed custom weights.
[[nodiscard]] Forking fork(const PatchBounds& b, ForkStrategy strategy,
                           const ForkWeights& weights = {});

// Splits one side's border line (entries >= 0) into parallel lines: all but
// the outermost sum exactly mu, the outermost sums to the remainder (or mu
// when the total is a positive multiple); per-entry totals are preserved.
// Returned innermost first; an all-zero side yields an empty list.
[[nodiscard]] std::vector<std::vector<Rat>> spread(const std::vector<Rat>& side_entries,
                                                   const Rat& mu);

// Remainders of the four side totals modulo mu, plus rho = V_0 mod mu, with
// side presence in the order west, east, south, north.
struct CornerInputs {
  Rat rho;
  Rat rho_h_minus, rho_h_plus;
  Rat rho_v_minus, rho_v_plus;
  std::array<bool, 4> present{};  // W, E, S, N
};

// Case analysis assigning the corner masses (all in [0, mu)) and at most one
// extra line so that every outer line of the assembly totals mu. The mirror
// flags reflect the orientation of the free choices (which corner zeroes out,
// which side hosts an extra line); forced placements are unaffected. Throws
// std::logic_error on remainders violating the mod-mu consistency identities,
// which cannot arise from fork/spread output.
[[nodiscard]] CornerPlacement place_corners(const CornerInputs& in, const Rat& mu,
                                            bool mirror_h = false, bool mirror_v = false);

// Full pipeline: bounds -> fork -> spread per side -> corner placement ->
// assembly, with every invariant of ExtensionResult re-verified. A pattern
// with equal line sums and nonnegative directed partial sums is returned
// as-is.
[[nodiscard]] ExtensionResult extend(const PatchPattern& pattern,
                                     const ExtendOptions& options = {});

// The extension as an unnormalized grid on the unit-integer mesh.
[[nodiscard]] MassGrid extension_grid(const ExtensionResult& result);

// Uniform 1/N mesh, masses divided by N*mu: a normalized grid with stochastic
// margins that passes the quasi-copula check.
[[nodiscard]] MassGrid normalize(const ExtensionResult& result);

}  // namespace qc
