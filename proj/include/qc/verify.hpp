// SPDX-License-Identifier: MIT
#pragma once

#include "qc/grid.hpp"
#include "qc/rational.hpp"

#include <string>
#include <vector>

namespace qc {

struct VerifyFailure {
  std::string condition;
  std::string witness;
  Rat value;
};

// passed <=> no failing condition was found anywhere; `failures` carries at
// most `max_failures` entries, enumerated in a fixed lexicographic order.
struct VerifyReport {
  bool passed = true;
  std::vector<VerifyFailure> failures;
};

inline constexpr int kMaxReportFailures = 16;

// Copula axioms for a normalized grid: every cell mass >= 0 (which implies
// nonnegative volume on every box) and every single-cell slab has mass equal
// to its width (uniform margins; groundedness is automatic for grid
// measures). Throws std::invalid_argument on unnormalized input.
[[nodiscard]] VerifyReport check_copula(const MassGrid& grid,
                                        int max_failures = kMaxReportFailures);

// Quasi-copula axioms for a normalized grid: exact stochastic margins plus
// nonnegative mass on every mesh-aligned band prod_{l != k} (0, y_l] x
// (x_k, y_k] and on its complement within the slab. Mesh-aligned parameters
// suffice because the uniform cell spread makes the mass of such a set
// multilinear in each continuous parameter, so extrema occur at breakpoints.
// Throws std::invalid_argument on unnormalized input.
[[nodiscard]] VerifyReport check_quasicopula(const MassGrid& grid,
                                             int max_failures = kMaxReportFailures);

// Bivariate boundary test: every mesh-aligned rectangle with at least one
// side on the boundary of the domain has nonnegative volume. Works on
// unnormalized grids. Throws std::invalid_argument unless dim == 2.
[[nodiscard]] VerifyReport check_geometric_condition(const MassGrid& grid,
                                                     int max_failures = kMaxReportFailures);

}  // namespace qc
