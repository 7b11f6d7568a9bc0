// SPDX-License-Identifier: MIT
#include "qc/patch.hpp"

#include "qc/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace qc {

namespace {

void validate_pattern(const PatchPattern& p) {
  if (p.m < 1 || p.n < 1) {
    throw std::invalid_argument("pattern: dimensions must be positive");
  }
  if (p.values.size() != static_cast<std::size_t>(p.m) * static_cast<std::size_t>(p.n)) {
    throw std::invalid_argument("pattern: value count does not match dimensions");
  }
}

[[nodiscard]] Rat vec_sum(const std::vector<Rat>& v) {
  return std::accumulate(v.begin(), v.end(), Rat(0));
}

[[nodiscard]] std::vector<std::string> rats_to_strings(const std::vector<Rat>& v) {
  std::vector<std::string> out;
  out.reserve(v.size());
  for (const Rat& r : v) out.push_back(rat_to_string(r));
  return out;
}

// Rows north->south, the display convention for tables.
[[nodiscard]] nlohmann::json table_json(const std::vector<Rat>& table, int rows, int cols) {
  nlohmann::json out = nlohmann::json::array();
  for (int r = rows; r >= 1; --r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 1; c <= cols; ++c) {
      row.push_back(rat_to_string(table[static_cast<std::size_t>((r - 1) * cols + (c - 1))]));
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace

// ============================== bounds ==============================

PatchBounds bounds(const PatchPattern& pattern) {
  validate_pattern(pattern);
  const int m = pattern.m;
  const int n = pattern.n;
  PatchBounds b;
  b.mu_h_minus.assign(static_cast<std::size_t>(n), Rat(0));
  b.mu_h_plus.assign(static_cast<std::size_t>(n), Rat(0));
  b.mu_v_minus.assign(static_cast<std::size_t>(m), Rat(0));
  b.mu_v_plus.assign(static_cast<std::size_t>(m), Rat(0));
  b.mu_h0.assign(static_cast<std::size_t>(n), Rat(0));
  b.mu_v0.assign(static_cast<std::size_t>(m), Rat(0));
  b.v0 = vec_sum(pattern.values);

  for (int j = 1; j <= n; ++j) {
    Rat from_west(0), min_west(0), from_east(0), min_east(0), row_sum(0);
    for (int i = 1; i <= m; ++i) {
      from_west += pattern.at(i, j);
      min_west = std::min(min_west, from_west);
      from_east += pattern.at(m + 1 - i, j);
      min_east = std::min(min_east, from_east);
      row_sum += pattern.at(i, j);
    }
    b.mu_h_minus[static_cast<std::size_t>(j - 1)] = -min_west;
    b.mu_h_plus[static_cast<std::size_t>(j - 1)] = -min_east;
    b.mu_h0[static_cast<std::size_t>(j - 1)] = -min_west + row_sum - min_east;
  }
  for (int i = 1; i <= m; ++i) {
    Rat from_south(0), min_south(0), from_north(0), min_north(0), col_sum(0);
    for (int j = 1; j <= n; ++j) {
      from_south += pattern.at(i, j);
      min_south = std::min(min_south, from_south);
      from_north += pattern.at(i, n + 1 - j);
      min_north = std::min(min_north, from_north);
      col_sum += pattern.at(i, j);
    }
    b.mu_v_minus[static_cast<std::size_t>(i - 1)] = -min_south;
    b.mu_v_plus[static_cast<std::size_t>(i - 1)] = -min_north;
    b.mu_v0[static_cast<std::size_t>(i - 1)] = -min_south + col_sum - min_north;
  }

  b.mu = b.mu_h0.front();
  for (const Rat& r : b.mu_h0) b.mu = std::max(b.mu, r);
  for (const Rat& r : b.mu_v0) b.mu = std::max(b.mu, r);
  if (b.mu <= 0) {
    throw std::invalid_argument("bounds: pattern is all-zero, no extension level exists");
  }
  return b;
}

// ========================== geometric_extend ==========================

MassGrid geometric_extend(const PatchPattern& pattern, const PatchBounds& b) {
  const int m = pattern.m;
  const int n = pattern.n;
  const int cols = m + 2;
  const int rows = n + 2;
  std::vector<Rat> mass(static_cast<std::size_t>(cols) * static_cast<std::size_t>(rows), Rat(0));
  // Axis-major storage: mass[col * rows + row], 0-based.
  auto cell = [&](int col, int row) -> Rat& {
    return mass[static_cast<std::size_t>(col) * static_cast<std::size_t>(rows) +
                static_cast<std::size_t>(row)];
  };
  for (int j = 1; j <= n; ++j) {
    cell(0, j) = b.mu_h_minus[static_cast<std::size_t>(j - 1)];
    cell(m + 1, j) = b.mu_h_plus[static_cast<std::size_t>(j - 1)];
  }
  for (int i = 1; i <= m; ++i) {
    cell(i, 0) = b.mu_v_minus[static_cast<std::size_t>(i - 1)];
    cell(i, n + 1) = b.mu_v_plus[static_cast<std::size_t>(i - 1)];
  }
  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i <= m; ++i) cell(i, j) = pattern.at(i, j);
  }
  std::vector<Rat> bx, by;
  for (int c = 0; c <= cols; ++c) bx.emplace_back(c);
  for (int r = 0; r <= rows; ++r) by.emplace_back(r);
  return MassGrid::create({bx, by}, mass, false);
}

// =============================== fork ===============================

Forking fork(const PatchBounds& b, ForkStrategy strategy, const ForkWeights& weights) {
  const std::size_t n = b.mu_h0.size();
  const std::size_t m = b.mu_v0.size();
  std::vector<Rat> w_h(n), w_v(m);
  switch (strategy) {
    case ForkStrategy::half:
      std::fill(w_h.begin(), w_h.end(), Rat(1, 2));
      std::fill(w_v.begin(), w_v.end(), Rat(1, 2));
      break;
    case ForkStrategy::west_north:
      std::fill(w_h.begin(), w_h.end(), Rat(1));
      std::fill(w_v.begin(), w_v.end(), Rat(0));
      break;
    case ForkStrategy::east_south:
      std::fill(w_h.begin(), w_h.end(), Rat(0));
      std::fill(w_v.begin(), w_v.end(), Rat(1));
      break;
    case ForkStrategy::custom:
      if (weights.w_h.size() != n || weights.w_v.size() != m) {
        throw std::invalid_argument("fork: custom weight counts do not match pattern lines");
      }
      for (const Rat& w : weights.w_h) {
        if (w < 0 || w > 1) throw std::invalid_argument("fork: weight outside [0,1]");
      }
      for (const Rat& w : weights.w_v) {
        if (w < 0 || w > 1) throw std::invalid_argument("fork: weight outside [0,1]");
      }
      w_h = weights.w_h;
      w_v = weights.w_v;
      break;
  }

  Forking f;
  f.strategy = strategy;
  f.x_minus.resize(n);
  f.x_plus.resize(n);
  f.y_minus.resize(m);
  f.y_plus.resize(m);
  for (std::size_t j = 0; j < n; ++j) {
    const Rat missing = b.mu - b.mu_h0[j];
    f.x_minus[j] = b.mu_h_minus[j] + w_h[j] * missing;
    f.x_plus[j] = b.mu_h_plus[j] + (Rat(1) - w_h[j]) * missing;
  }
  for (std::size_t i = 0; i < m; ++i) {
    const Rat missing = b.mu - b.mu_v0[i];
    f.y_minus[i] = b.mu_v_minus[i] + w_v[i] * missing;
    f.y_plus[i] = b.mu_v_plus[i] + (Rat(1) - w_v[i]) * missing;
  }
  return f;
}

// ============================== spread ==============================

std::vector<std::vector<Rat>> spread(const std::vector<Rat>& side_entries, const Rat& mu) {
  if (mu <= 0) throw std::invalid_argument("spread: mu must be positive");
  for (const Rat& e : side_entries) {
    if (e < 0) throw std::invalid_argument("spread: negative side entry");
  }
  std::vector<std::vector<Rat>> lines;
  std::vector<Rat> cur = side_entries;
  while (true) {
    const Rat total = vec_sum(cur);
    if (total == 0) break;
    if (total <= mu) {
      lines.push_back(std::move(cur));
      break;
    }
    // First entry whose running prefix crosses mu splits between this line
    // and the next outer one.
    Rat prefix(0);
    std::size_t s = 0;
    while (prefix + cur[s] <= mu) {
      prefix += cur[s];
      ++s;
    }
    std::vector<Rat> inner(cur.size(), Rat(0));
    for (std::size_t t = 0; t < s; ++t) inner[t] = cur[t];
    inner[s] = mu - prefix;
    lines.push_back(std::move(inner));
    std::vector<Rat> outer(cur.size(), Rat(0));
    outer[s] = cur[s] + prefix - mu;
    for (std::size_t t = s + 1; t < cur.size(); ++t) outer[t] = cur[t];
    cur = std::move(outer);
  }
  return lines;
}

// =========================== place_corners ===========================

namespace {

// Presence order in CornerInputs::present.
constexpr std::size_t kW = 0, kE = 1, kS = 2, kN = 3;

[[nodiscard]] CornerInputs mirror_h_inputs(CornerInputs in) {
  std::swap(in.rho_h_minus, in.rho_h_plus);
  std::swap(in.present[kW], in.present[kE]);
  return in;
}

[[nodiscard]] CornerInputs mirror_v_inputs(CornerInputs in) {
  std::swap(in.rho_v_minus, in.rho_v_plus);
  std::swap(in.present[kS], in.present[kN]);
  return in;
}

[[nodiscard]] CornerInputs transpose_inputs(CornerInputs in) {
  std::swap(in.rho_h_minus, in.rho_v_minus);
  std::swap(in.rho_h_plus, in.rho_v_plus);
  std::swap(in.present[kW], in.present[kS]);
  std::swap(in.present[kE], in.present[kN]);
  return in;
}

[[nodiscard]] CornerPlacement mirror_h_placement(CornerPlacement p) {
  std::swap(p.sw, p.se);
  std::swap(p.nw, p.ne);
  if (p.extra == ExtraKind::west_col) {
    p.extra = ExtraKind::east_col;
  } else if (p.extra == ExtraKind::east_col) {
    p.extra = ExtraKind::west_col;
  } else if (p.extra != ExtraKind::none) {
    std::swap(p.extra_a, p.extra_b);  // row kinds: west and east ends swap
  }
  return p;
}

[[nodiscard]] CornerPlacement mirror_v_placement(CornerPlacement p) {
  std::swap(p.sw, p.nw);
  std::swap(p.se, p.ne);
  if (p.extra == ExtraKind::north_row) {
    p.extra = ExtraKind::south_row;
  } else if (p.extra == ExtraKind::south_row) {
    p.extra = ExtraKind::north_row;
  } else if (p.extra != ExtraKind::none) {
    std::swap(p.extra_a, p.extra_b);  // column kinds: south and north ends swap
  }
  return p;
}

[[nodiscard]] CornerPlacement transpose_placement(CornerPlacement p) {
  std::swap(p.se, p.nw);
  switch (p.extra) {
    case ExtraKind::north_row: p.extra = ExtraKind::east_col; break;
    case ExtraKind::east_col: p.extra = ExtraKind::north_row; break;
    case ExtraKind::south_row: p.extra = ExtraKind::west_col; break;
    case ExtraKind::west_col: p.extra = ExtraKind::south_row; break;
    case ExtraKind::none: break;
  }
  return p;
}

[[nodiscard]] CornerPlacement dispatch_corners(const CornerInputs& in, const Rat& mu);

// Exactly one remainder is zero and it is rho_h_minus; rho > 0.
[[nodiscard]] CornerPlacement one_zero_canonical(const CornerInputs& in, const Rat& mu) {
  CornerPlacement p;
  const Rat vsum = in.rho_v_minus + in.rho_v_plus;
  if (vsum == 2 * mu - in.rho) {
    p.se = mu - in.rho_v_minus;
    p.ne = mu - in.rho_v_plus;
    p.case_id = "one-zero-wrap";
  } else {
    p.ne = mu - in.rho_h_plus;  // equals rho
    p.extra = ExtraKind::east_col;
    p.extra_a = mu - in.rho_v_minus;
    p.extra_b = in.rho_h_plus - in.rho_v_plus;  // equals rho_v_minus
    p.case_id = "one-zero-extra";
  }
  return p;
}

[[nodiscard]] CornerPlacement dispatch_corners(const CornerInputs& in, const Rat& mu) {
  const bool zhm = in.rho_h_minus == 0;
  const bool zhp = in.rho_h_plus == 0;
  const bool zvm = in.rho_v_minus == 0;
  const bool zvp = in.rho_v_plus == 0;
  const Rat hsum = in.rho_h_minus + in.rho_h_plus;
  const Rat vsum = in.rho_v_minus + in.rho_v_plus;
  CornerPlacement p;

  if (in.rho == 0) {
    if (zhm && zhp && zvm && zvp) {
      p.case_id = "exact";
    } else if (zhm && zhp) {
      // Both outer columns already total mu; an extra east column tops up
      // the outer rows.
      p.extra = ExtraKind::east_col;
      p.extra_a = mu - in.rho_v_minus;
      p.extra_b = mu - in.rho_v_plus;
      p.case_id = "zero-rho-extra-east";
    } else if (zvm && zvp) {
      p.extra = ExtraKind::north_row;
      p.extra_a = mu - in.rho_h_minus;
      p.extra_b = mu - in.rho_h_plus;
      p.case_id = "zero-rho-extra-north";
    } else {
      p.sw = std::min(in.rho_h_plus, in.rho_v_plus);
      p.nw = mu - in.rho_h_minus - p.sw;
      p.se = mu - in.rho_v_minus - p.sw;
      p.ne = std::min(in.rho_h_minus, in.rho_v_minus);
      p.case_id = "four-corners";
    }
    return p;
  }

  const int zeros = int(zhm) + int(zhp) + int(zvm) + int(zvp);
  if (zeros == 2) {
    // One zero per direction: the whole residue rho lands on the corner of
    // the two sides with nonzero remainders.
    if (zhm && zvm) {
      p.ne = in.rho;
      p.case_id = "single-ne";
    } else if (zhm && zvp) {
      p.se = in.rho;
      p.case_id = "single-se";
    } else if (zhp && zvm) {
      p.nw = in.rho;
      p.case_id = "single-nw";
    } else {
      p.sw = in.rho;
      p.case_id = "single-sw";
    }
    return p;
  }

  if (zeros == 1) {
    // Reflect the zero onto rho_h_minus, solve there, reflect back.
    if (zhm) return one_zero_canonical(in, mu);
    if (zhp) return mirror_h_placement(one_zero_canonical(mirror_h_inputs(in), mu));
    if (zvm) return transpose_placement(one_zero_canonical(transpose_inputs(in), mu));
    return mirror_v_placement(
        transpose_placement(one_zero_canonical(transpose_inputs(mirror_v_inputs(in)), mu)));
  }

  // No zero remainder: both direction sums are mu - rho or 2mu - rho.
  const bool h_wraps = hsum == 2 * mu - in.rho;
  const bool v_wraps = vsum == 2 * mu - in.rho;
  if (!h_wraps && !v_wraps) {
    p.sw = std::min(in.rho_h_plus, in.rho_v_plus);
    p.nw = mu - in.rho_h_minus - p.sw;
    p.se = mu - in.rho_v_minus - p.sw;
    p.ne = std::min(in.rho_h_minus, in.rho_v_minus);
    p.case_id = "four-corners";
  } else if (h_wraps && v_wraps) {
    p.nw = mu - in.rho_h_minus;
    p.se = mu - in.rho_v_minus;
    p.ne = in.rho_h_minus - in.rho_v_plus;
    p.case_id = "four-corners-wrap";
    if (p.ne < 0) {
      p.ne = 0;
      p.nw = mu - in.rho_v_plus;
      p.se = mu - in.rho_h_plus;
      p.sw = in.rho_v_plus - in.rho_h_minus;
      p.case_id = "four-corners-wrap-alt";
    }
  } else if (v_wraps) {
    // Vertical direction carries a full extra level: extra north row.
    p.se = mu - in.rho_v_minus;
    p.ne = mu - in.rho_v_plus;
    p.extra = ExtraKind::north_row;
    p.extra_a = mu - in.rho_h_minus;
    p.extra_b = in.rho_h_minus;
    p.case_id = "mixed-extra-north";
  } else {
    p.nw = mu - in.rho_h_minus;
    p.ne = mu - in.rho_h_plus;
    p.extra = ExtraKind::east_col;
    p.extra_a = mu - in.rho_v_minus;
    p.extra_b = in.rho_v_minus;
    p.case_id = "mixed-extra-east";
  }
  return p;
}

}  // namespace

CornerPlacement place_corners(const CornerInputs& in, const Rat& mu, bool mirror_h,
                              bool mirror_v) {
  if (mu <= 0) throw std::invalid_argument("place_corners: mu must be positive");
  const Rat zero(0);
  for (const Rat* r : {&in.rho, &in.rho_h_minus, &in.rho_h_plus, &in.rho_v_minus,
                       &in.rho_v_plus}) {
    if (*r < zero || *r >= mu) {
      throw std::logic_error("place_corners: remainder outside [0, mu)");
    }
  }
  if (mod_rat(in.rho_h_minus + in.rho + in.rho_h_plus, mu) != 0 ||
      mod_rat(in.rho_v_minus + in.rho + in.rho_v_plus, mu) != 0) {
    throw std::logic_error("place_corners: remainders violate the mod-mu identity");
  }
  if ((!in.present[kW] && in.rho_h_minus != 0) || (!in.present[kE] && in.rho_h_plus != 0) ||
      (!in.present[kS] && in.rho_v_minus != 0) || (!in.present[kN] && in.rho_v_plus != 0)) {
    throw std::logic_error("place_corners: absent side carries a nonzero remainder");
  }

  CornerInputs work = in;
  if (mirror_h) work = mirror_h_inputs(work);
  if (mirror_v) work = mirror_v_inputs(work);
  CornerPlacement p = dispatch_corners(work, mu);
  if (mirror_v) p = mirror_v_placement(p);
  if (mirror_h) p = mirror_h_placement(p);
  return p;
}

// ============================== extend ==============================

namespace {

[[nodiscard]] const char* strategy_name(ForkStrategy s) {
  switch (s) {
    case ForkStrategy::half: return "half";
    case ForkStrategy::west_north: return "west-north";
    case ForkStrategy::east_south: return "east-south";
    case ForkStrategy::custom: return "custom";
  }
  return "half";
}

[[nodiscard]] nlohmann::json lines_json(const std::vector<std::vector<Rat>>& lines) {
  // Reported outermost first, matching assembly order from the border inward.
  nlohmann::json out = nlohmann::json::array();
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    out.push_back(rats_to_strings(*it));
  }
  return out;
}

// Every nonzero corner or extra-line cell must land on existing host lines.
[[nodiscard]] bool placement_hosted(const CornerPlacement& p, bool w, bool e, bool s, bool n) {
  if (p.sw != 0 && !(w && s)) return false;
  if (p.se != 0 && !(e && s)) return false;
  if (p.nw != 0 && !(w && n)) return false;
  if (p.ne != 0 && !(e && n)) return false;
  switch (p.extra) {
    case ExtraKind::north_row:
    case ExtraKind::south_row:
      if (p.extra_a != 0 && !w) return false;
      if (p.extra_b != 0 && !e) return false;
      break;
    case ExtraKind::east_col:
    case ExtraKind::west_col:
      if (p.extra_a != 0 && !s) return false;
      if (p.extra_b != 0 && !n) return false;
      break;
    case ExtraKind::none:
      break;
  }
  return true;
}

void verify_extension(const PatchPattern& pattern, const ExtensionResult& r) {
  const int N = r.N;
  if (static_cast<std::size_t>(N) * static_cast<std::size_t>(N) != r.table.size()) {
    throw std::logic_error("extend: assembled table is not square");
  }
  auto cell = [&](int col, int row) -> const Rat& {
    return r.table[static_cast<std::size_t>((row - 1) * N + (col - 1))];
  };
  for (int row = 1; row <= N; ++row) {
    Rat s(0);
    for (int col = 1; col <= N; ++col) s += cell(col, row);
    if (s != r.mu) throw std::logic_error("extend: row sum differs from mu");
  }
  for (int col = 1; col <= N; ++col) {
    Rat s(0);
    for (int row = 1; row <= N; ++row) s += cell(col, row);
    if (s != r.mu) throw std::logic_error("extend: column sum differs from mu");
  }
  for (int j = 1; j <= pattern.n; ++j) {
    for (int i = 1; i <= pattern.m; ++i) {
      if (cell(r.patch_col + i - 1, r.patch_row + j - 1) != pattern.at(i, j)) {
        throw std::logic_error("extend: pattern not embedded verbatim");
      }
    }
  }
  for (int row = 1; row <= N; ++row) {
    for (int col = 1; col <= N; ++col) {
      const bool inside = col >= r.patch_col && col < r.patch_col + pattern.m &&
                          row >= r.patch_row && row < r.patch_row + pattern.n;
      if (!inside && cell(col, row) < 0) {
        throw std::logic_error("extend: negative mass outside the pattern");
      }
    }
  }
}

}  // namespace

ExtensionResult extend(const PatchPattern& pattern, const ExtendOptions& options) {
  const PatchBounds b = bounds(pattern);
  const Forking f = fork(b, options.strategy, options.weights);

  const auto west = spread(f.x_minus, b.mu);
  const auto east = spread(f.x_plus, b.mu);
  const auto south = spread(f.y_minus, b.mu);
  const auto north = spread(f.y_plus, b.mu);

  CornerInputs ci;
  ci.rho = mod_rat(b.v0, b.mu);
  ci.rho_h_minus = mod_rat(vec_sum(f.x_minus), b.mu);
  ci.rho_h_plus = mod_rat(vec_sum(f.x_plus), b.mu);
  ci.rho_v_minus = mod_rat(vec_sum(f.y_minus), b.mu);
  ci.rho_v_plus = mod_rat(vec_sum(f.y_plus), b.mu);
  ci.present = {!west.empty(), !east.empty(), !south.empty(), !north.empty()};

  CornerPlacement pl = place_corners(ci, b.mu, options.mirror_h, options.mirror_v);
  if (!placement_hosted(pl, ci.present[kW], ci.present[kE], ci.present[kS], ci.present[kN])) {
    // Fallback required by the contract; unreachable for fork/spread output
    // since a nonzero remainder forces its side to exist.
    if (options.strategy == ForkStrategy::half) {
      throw std::logic_error("extend: corner placement needs an absent side");
    }
    ExtendOptions retry = options;
    retry.strategy = ForkStrategy::half;
    retry.weights = {};
    ExtensionResult res = extend(pattern, retry);
    if (options.with_trace) {
      res.trace.insert(res.trace.begin(),
                       nlohmann::json{{"step", "retry"},
                                      {"from_strategy", strategy_name(options.strategy)},
                                      {"to_strategy", "half"}});
    }
    return res;
  }

  const int m = pattern.m;
  const int n = pattern.n;
  const int nw_cols = static_cast<int>(west.size());
  const int ne_cols = static_cast<int>(east.size());
  const int ns_rows = static_cast<int>(south.size());
  const int nn_rows = static_cast<int>(north.size());
  const int xw = pl.extra == ExtraKind::west_col ? 1 : 0;
  const int xe = pl.extra == ExtraKind::east_col ? 1 : 0;
  const int xs = pl.extra == ExtraKind::south_row ? 1 : 0;
  const int xn = pl.extra == ExtraKind::north_row ? 1 : 0;

  ExtensionResult r;
  r.mu = b.mu;
  r.corners = pl;
  const int ncols = xw + nw_cols + m + ne_cols + xe;
  const int nrows = xs + ns_rows + n + nn_rows + xn;
  if (ncols != nrows) throw std::logic_error("extend: assembly is not square");
  r.N = ncols;
  r.patch_col = xw + nw_cols + 1;
  r.patch_row = xs + ns_rows + 1;
  r.table.assign(static_cast<std::size_t>(r.N) * static_cast<std::size_t>(r.N), Rat(0));
  auto cell = [&](int col, int row) -> Rat& {
    return r.table[static_cast<std::size_t>((row - 1) * r.N + (col - 1))];
  };

  for (int j = 1; j <= n; ++j) {
    for (int i = 1; i <= m; ++i) {
      cell(r.patch_col + i - 1, r.patch_row + j - 1) = pattern.at(i, j);
    }
  }
  // Spread lines sit innermost first; column/row 1 is the far border.
  for (int w = 0; w < nw_cols; ++w) {
    const int col = xw + nw_cols - w;
    for (int j = 1; j <= n; ++j) cell(col, r.patch_row + j - 1) = west[w][j - 1];
  }
  for (int e = 0; e < ne_cols; ++e) {
    const int col = xw + nw_cols + m + 1 + e;
    for (int j = 1; j <= n; ++j) cell(col, r.patch_row + j - 1) = east[e][j - 1];
  }
  for (int s = 0; s < ns_rows; ++s) {
    const int row = xs + ns_rows - s;
    for (int i = 1; i <= m; ++i) cell(r.patch_col + i - 1, row) = south[s][i - 1];
  }
  for (int t = 0; t < nn_rows; ++t) {
    const int row = xs + ns_rows + n + 1 + t;
    for (int i = 1; i <= m; ++i) cell(r.patch_col + i - 1, row) = north[t][i - 1];
  }

  // Corners sit on the outermost spread lines, never on extra lines.
  const int west_out = xw + 1;
  const int east_out = xw + nw_cols + m + ne_cols;
  const int south_out = xs + 1;
  const int north_out = xs + ns_rows + n + nn_rows;
  if (pl.sw != 0) cell(west_out, south_out) = pl.sw;
  if (pl.se != 0) cell(east_out, south_out) = pl.se;
  if (pl.nw != 0) cell(west_out, north_out) = pl.nw;
  if (pl.ne != 0) cell(east_out, north_out) = pl.ne;
  switch (pl.extra) {
    case ExtraKind::north_row:
      cell(west_out, r.N) = pl.extra_a;
      cell(east_out, r.N) = pl.extra_b;
      break;
    case ExtraKind::south_row:
      cell(west_out, 1) = pl.extra_a;
      cell(east_out, 1) = pl.extra_b;
      break;
    case ExtraKind::east_col:
      cell(r.N, south_out) = pl.extra_a;
      cell(r.N, north_out) = pl.extra_b;
      break;
    case ExtraKind::west_col:
      cell(1, south_out) = pl.extra_a;
      cell(1, north_out) = pl.extra_b;
      break;
    case ExtraKind::none:
      break;
  }

  verify_extension(pattern, r);

  if (options.with_trace) {
    const MassGrid geo = geometric_extend(pattern, b);
    nlohmann::json geo_table = nlohmann::json::array();
    {
      const int rows = n + 2;
      const int cols = m + 2;
      for (int row = rows; row >= 1; --row) {
        nlohmann::json jrow = nlohmann::json::array();
        for (int col = 1; col <= cols; ++col) {
          jrow.push_back(rat_to_string(
              geo.mass()[static_cast<std::size_t>(col - 1) * static_cast<std::size_t>(rows) +
                         static_cast<std::size_t>(row - 1)]));
        }
        geo_table.push_back(std::move(jrow));
      }
    }
    r.trace = nlohmann::json::array({
        nlohmann::json{{"step", "bounds"},
                       {"mu", rat_to_string(b.mu)},
                       {"v0", rat_to_string(b.v0)},
                       {"mu_h_minus", rats_to_strings(b.mu_h_minus)},
                       {"mu_h_plus", rats_to_strings(b.mu_h_plus)},
                       {"mu_v_minus", rats_to_strings(b.mu_v_minus)},
                       {"mu_v_plus", rats_to_strings(b.mu_v_plus)},
                       {"mu_h0", rats_to_strings(b.mu_h0)},
                       {"mu_v0", rats_to_strings(b.mu_v0)}},
        nlohmann::json{{"step", "geometric"}, {"table", std::move(geo_table)}},
        nlohmann::json{{"step", "fork"},
                       {"strategy", strategy_name(f.strategy)},
                       {"x_minus", rats_to_strings(f.x_minus)},
                       {"x_plus", rats_to_strings(f.x_plus)},
                       {"y_minus", rats_to_strings(f.y_minus)},
                       {"y_plus", rats_to_strings(f.y_plus)}},
        nlohmann::json{{"step", "spread"},
                       {"west", lines_json(west)},
                       {"east", lines_json(east)},
                       {"south", lines_json(south)},
                       {"north", lines_json(north)}},
        nlohmann::json{{"step", "corners"},
                       {"case", pl.case_id},
                       {"rho", rat_to_string(ci.rho)},
                       {"rho_h_minus", rat_to_string(ci.rho_h_minus)},
                       {"rho_h_plus", rat_to_string(ci.rho_h_plus)},
                       {"rho_v_minus", rat_to_string(ci.rho_v_minus)},
                       {"rho_v_plus", rat_to_string(ci.rho_v_plus)},
                       {"sw", rat_to_string(pl.sw)},
                       {"se", rat_to_string(pl.se)},
                       {"nw", rat_to_string(pl.nw)},
                       {"ne", rat_to_string(pl.ne)}},
        nlohmann::json{{"step", "assembled"},
                       {"N", r.N},
                       {"mu", rat_to_string(r.mu)},
                       {"patch_col", r.patch_col},
                       {"patch_row", r.patch_row},
                       {"table", table_json(r.table, r.N, r.N)}},
    });
  }
  return r;
}

// ===================== extension_grid / normalize =====================

MassGrid extension_grid(const ExtensionResult& result) {
  const int N = result.N;
  std::vector<Rat> mass(static_cast<std::size_t>(N) * static_cast<std::size_t>(N));
  for (int col = 1; col <= N; ++col) {
    for (int row = 1; row <= N; ++row) {
      mass[static_cast<std::size_t>(col - 1) * static_cast<std::size_t>(N) +
           static_cast<std::size_t>(row - 1)] =
          result.table[static_cast<std::size_t>((row - 1) * N + (col - 1))];
    }
  }
  std::vector<Rat> bps;
  for (int c = 0; c <= N; ++c) bps.emplace_back(c);
  return MassGrid::create({bps, bps}, mass, false);
}

MassGrid normalize(const ExtensionResult& result) {
  const int N = result.N;
  const Rat scale = Rat(1) / (Rat(N) * result.mu);
  std::vector<Rat> mass(static_cast<std::size_t>(N) * static_cast<std::size_t>(N));
  for (int col = 1; col <= N; ++col) {
    for (int row = 1; row <= N; ++row) {
      mass[static_cast<std::size_t>(col - 1) * static_cast<std::size_t>(N) +
           static_cast<std::size_t>(row - 1)] =
          result.table[static_cast<std::size_t>((row - 1) * N + (col - 1))] * scale;
    }
  }
  std::vector<Rat> bps;
  for (int c = 0; c <= N; ++c) bps.push_back(Rat(c, N));
  return MassGrid::create({bps, bps}, mass, true);
}

}  // namespace qc
