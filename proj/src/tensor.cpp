// SPDX-License-Identifier: MIT
#include "qc/tensor.hpp"

#include <cstddef>
#include <stdexcept>

namespace qc {

namespace {

std::size_t shape_product(const std::vector<int>& shape) {
  std::size_t total = 1;
  for (int n : shape) total *= static_cast<std::size_t>(n);
  return total;
}

void require_normalized(const MassGrid& grid, const char* op) {
  if (!grid.normalized()) {
    throw std::invalid_argument(std::string(op) + ": grid must be normalized");
  }
}

}  // namespace

// ============================================================
// Block substitution and tensor products
// ============================================================

MassGrid transform(const MassGrid& A, const MassGrid& Q) {
  const std::size_t d = static_cast<std::size_t>(A.dim());
  if (Q.dim() != A.dim()) {
    throw std::invalid_argument("transform: grids must have the same dimension");
  }

  const std::vector<int> ashape = A.cell_shape();
  const std::vector<int> qshape = Q.cell_shape();
  std::vector<std::vector<Rat>> bps(d);
  std::vector<int> shape(d);
  for (std::size_t k = 0; k < d; ++k) {
    const auto& ab = A.breakpoints()[k];
    const auto& qb = Q.breakpoints()[k];
    const Rat qspan = qb.back() - qb.front();
    // Each A-cell contributes the proportional images of Q's breakpoints
    // except the last, which coincides with the next cell's first.
    for (std::size_t c = 0; c + 1 < ab.size(); ++c) {
      const Rat width = ab[c + 1] - ab[c];
      for (std::size_t j = 0; j + 1 < qb.size(); ++j) {
        bps[k].push_back(ab[c] + width * (qb[j] - qb.front()) / qspan);
      }
    }
    bps[k].push_back(ab.back());
    shape[k] = ashape[k] * qshape[k];
  }

  std::vector<Rat> mass(shape_product(shape));
  std::vector<int> a(d, 0);
  std::vector<int> g(d);
  do {
    const Rat& ma = A.mass()[flat_index(a, ashape)];
    std::vector<int> q(d, 0);
    do {
      for (std::size_t k = 0; k < d; ++k) g[k] = a[k] * qshape[k] + q[k];
      mass[flat_index(g, shape)] = ma * Q.mass()[flat_index(q, qshape)];
    } while (next_multi_index(q, qshape));
  } while (next_multi_index(a, ashape));

  const bool normalized = A.normalized() && Q.total_mass() == 1;
  return MassGrid::create(bps, mass, normalized);
}

MassGrid restrict_to_uniform_mesh(const MassGrid& grid, int m) {
  require_normalized(grid, "restrict_to_uniform_mesh");
  if (m < 1) throw std::invalid_argument("restrict_to_uniform_mesh: m must be positive");
  const std::size_t d = static_cast<std::size_t>(grid.dim());
  const std::vector<int> shape(d, m);
  std::vector<std::vector<Rat>> bps(d);
  for (std::size_t k = 0; k < d; ++k) {
    for (int j = 0; j <= m; ++j) bps[k].push_back(Rat(j, m));
  }
  std::vector<Rat> mass(shape_product(shape));
  std::vector<int> r(d, 0);
  do {
    Box box;
    box.lower.resize(d);
    box.upper.resize(d);
    for (std::size_t k = 0; k < d; ++k) {
      box.lower[k] = Rat(r[k], m);
      box.upper[k] = Rat(r[k] + 1, m);
    }
    mass[flat_index(r, shape)] = volume(grid, box);
  } while (next_multi_index(r, shape));
  return MassGrid::create(bps, mass, true);
}

MassGrid tensor_product(const MassGrid& A, const MassGrid& B, int m) {
  if (A.dim() != B.dim()) {
    throw std::invalid_argument("tensor_product: grids must have the same dimension");
  }
  if (m < 1) throw std::invalid_argument("tensor_product: m must be positive");
  require_normalized(A, "tensor_product");
  require_normalized(B, "tensor_product");
  return transform(restrict_to_uniform_mesh(A, m), restrict_to_uniform_mesh(B, m));
}

MassGrid ordinal_multiple(const MassGrid& Q, int m) {
  if (Q.dim() != 2) throw std::invalid_argument("ordinal_multiple: grid must be bivariate");
  return tensor_product(min_copula_grid(m, 2), Q, m);
}

// ============================================================
// Approximation pairs
// ============================================================

ApproxPair approx_pair(const MassGrid& q1, const MassGrid& q2, int m) {
  if (q1.dim() != q2.dim()) {
    throw std::invalid_argument("approx_pair: grids must have the same dimension");
  }
  const int d = q1.dim();
  ApproxPair out{tensor_product(q1, q2, m), tensor_product(q2, q1, m), pi_n_spec(m, d), m,
                 ApproxBounds{}};
  if (apply_shuffle(out.a1, out.spec) != out.a2) {
    throw std::logic_error("approx_pair: shuffle identity violated");
  }
  out.certified.dist_q1_a1 = sup_norm_distance(q1, out.a1);
  out.certified.dist_q2_a2 = sup_norm_distance(q2, out.a2);
  out.certified.bound = Rat(2 * d, m);
  if (out.certified.dist_q1_a1 > out.certified.bound ||
      out.certified.dist_q2_a2 > out.certified.bound) {
    throw std::logic_error("approx_pair: approximation bound violated");
  }
  return out;
}

int mesh_for_epsilon(const Rat& eps, int d) {
  if (eps <= 0) throw std::invalid_argument("mesh_for_epsilon: eps must be positive");
  if (d < 1) throw std::invalid_argument("mesh_for_epsilon: d must be positive");
  const Int m = ceil_rat(Rat(2 * d) / eps) + 1;
  return static_cast<int>(m);
}

// ============================================================
// Envelope combinator
// ============================================================

CdfTable envelope(const std::vector<std::vector<CdfTable>>& groups, EnvelopeMode mode) {
  if (groups.empty()) throw std::invalid_argument("envelope: empty family");
  const CdfTable* first = nullptr;
  for (const auto& group : groups) {
    if (group.empty()) throw std::invalid_argument("envelope: empty group");
    for (const auto& table : group) {
      if (first == nullptr) {
        first = &table;
      } else if (table.breakpoints != first->breakpoints ||
                 table.values.size() != first->values.size()) {
        throw std::invalid_argument("envelope: tables must share a common mesh");
      }
    }
  }

  const bool outer_min = mode == EnvelopeMode::inf_of_sup;
  CdfTable out;
  out.breakpoints = first->breakpoints;
  out.values.resize(first->values.size());
  for (std::size_t v = 0; v < out.values.size(); ++v) {
    Rat outer;
    bool outer_set = false;
    for (const auto& group : groups) {
      Rat inner = group.front().values[v];
      for (std::size_t t = 1; t < group.size(); ++t) {
        const Rat& x = group[t].values[v];
        if (outer_min ? (x > inner) : (x < inner)) inner = x;
      }
      if (!outer_set) {
        outer = inner;
        outer_set = true;
      } else if (outer_min ? (inner < outer) : (inner > outer)) {
        outer = inner;
      }
    }
    out.values[v] = outer;
  }
  return out;
}

}  // namespace qc
