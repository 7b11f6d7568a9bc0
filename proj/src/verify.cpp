// SPDX-License-Identifier: MIT
#include "qc/verify.hpp"

#include <sstream>
#include <stdexcept>

namespace qc {

namespace {

class Collector {
 public:
  explicit Collector(int max_failures) : max_(max_failures) {}

  void add(std::string condition, std::string witness, Rat value) {
    failed_ = true;
    if (static_cast<int>(failures_.size()) < max_) {
      failures_.push_back({std::move(condition), std::move(witness), std::move(value)});
    }
  }

  [[nodiscard]] VerifyReport report() && {
    return VerifyReport{!failed_, std::move(failures_)};
  }

 private:
  int max_;
  bool failed_ = false;
  std::vector<VerifyFailure> failures_;
};

std::string point_str(const std::vector<Rat>& p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (k) os << ",";
    os << rat_to_string(p[k]);
  }
  os << ")";
  return os.str();
}

std::string interval_str(const Rat& lo, const Rat& hi) {
  return "(" + rat_to_string(lo) + "," + rat_to_string(hi) + "]";
}

void require_normalized(const MassGrid& grid, const char* op) {
  if (!grid.normalized()) {
    throw std::invalid_argument(std::string(op) + ": grid must be normalized");
  }
}

// Exact stochastic margins, checked slab by slab; additivity extends the
// equality to every interval.
void check_margins(const MassGrid& grid, Collector& out) {
  for (int k = 0; k < grid.dim(); ++k) {
    const auto& bps = grid.breakpoints()[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i + 1 < bps.size(); ++i) {
      const Rat got = margin(grid, k, bps[i], bps[i + 1]);
      const Rat want = bps[i + 1] - bps[i];
      if (got != want) {
        out.add("stochastic-margin",
                "axis " + std::to_string(k + 1) + " slab " + interval_str(bps[i], bps[i + 1]),
                got);
      }
    }
  }
}

}  // namespace

VerifyReport check_copula(const MassGrid& grid, int max_failures) {
  require_normalized(grid, "check_copula");
  Collector out(max_failures);

  const auto shape = grid.cell_shape();
  std::vector<int> idx(shape.size(), 0);
  do {
    const Rat& m = grid.mass()[flat_index(idx, shape)];
    if (m < 0) {
      std::vector<Rat> lower(shape.size());
      for (std::size_t k = 0; k < shape.size(); ++k) {
        lower[k] = grid.breakpoints()[k][static_cast<std::size_t>(idx[k])];
      }
      out.add("cell-nonnegative", "cell with lower corner " + point_str(lower), m);
    }
  } while (next_multi_index(idx, shape));

  check_margins(grid, out);
  return std::move(out).report();
}

VerifyReport check_quasicopula(const MassGrid& grid, int max_failures) {
  require_normalized(grid, "check_quasicopula");
  Collector out(max_failures);
  check_margins(grid, out);

  const std::size_t d = static_cast<std::size_t>(grid.dim());
  const auto& cdf = grid.vertex_cdf();
  std::vector<int> vshape(d);
  for (std::size_t k = 0; k < d; ++k) {
    vshape[k] = static_cast<int>(grid.breakpoints()[k].size());
  }

  for (std::size_t k = 0; k < d; ++k) {
    const auto& kbps = grid.breakpoints()[k];
    const int nk = static_cast<int>(kbps.size()) - 1;
    // Upper corners of the band on the remaining axes, each over 1..n_l.
    std::vector<int> ushape;
    std::vector<std::size_t> uaxes;
    for (std::size_t l = 0; l < d; ++l) {
      if (l == k) continue;
      ushape.push_back(static_cast<int>(grid.breakpoints()[l].size()) - 1);
      uaxes.push_back(l);
    }
    for (int x = 0; x < nk; ++x) {
      for (int y = x + 1; y <= nk; ++y) {
        const Rat slab = margin(grid, static_cast<int>(k), kbps[static_cast<std::size_t>(x)],
                                kbps[static_cast<std::size_t>(y)]);
        std::vector<int> u(uaxes.size(), 0);
        do {
          std::vector<int> vhi(d), vlo(d);
          std::vector<Rat> uppers(uaxes.size());
          for (std::size_t t = 0; t < uaxes.size(); ++t) {
            vhi[uaxes[t]] = u[t] + 1;
            vlo[uaxes[t]] = u[t] + 1;
            uppers[t] = grid.breakpoints()[uaxes[t]][static_cast<std::size_t>(u[t]) + 1];
          }
          vhi[k] = y;
          vlo[k] = x;
          const Rat band = cdf[flat_index(vhi, vshape)] - cdf[flat_index(vlo, vshape)];
          const std::string loc = "axis " + std::to_string(k + 1) + " interval " +
                                  interval_str(kbps[static_cast<std::size_t>(x)],
                                               kbps[static_cast<std::size_t>(y)]) +
                                  " uppers " + point_str(uppers);
          if (band < 0) out.add("band-nonnegative", loc, band);
          if (slab - band < 0) out.add("band-complement-nonnegative", loc, slab - band);
        } while (!u.empty() && next_multi_index(u, ushape));
      }
    }
  }
  return std::move(out).report();
}

VerifyReport check_geometric_condition(const MassGrid& grid, int max_failures) {
  if (grid.dim() != 2) {
    throw std::invalid_argument("check_geometric_condition: grid must be bivariate");
  }
  Collector out(max_failures);
  const auto& bx = grid.breakpoints()[0];
  const auto& by = grid.breakpoints()[1];
  const int nx = static_cast<int>(bx.size()) - 1;
  const int ny = static_cast<int>(by.size()) - 1;
  const auto& cdf = grid.vertex_cdf();
  const std::vector<int> vshape{nx + 1, ny + 1};
  auto c = [&](int i, int j) { return cdf[flat_index({i, j}, vshape)]; };

  for (int x1 = 0; x1 < nx; ++x1) {
    for (int x2 = x1 + 1; x2 <= nx; ++x2) {
      for (int y1 = 0; y1 < ny; ++y1) {
        for (int y2 = y1 + 1; y2 <= ny; ++y2) {
          const bool touches = x1 == 0 || x2 == nx || y1 == 0 || y2 == ny;
          if (!touches) continue;
          const Rat vol = c(x2, y2) - c(x1, y2) - c(x2, y1) + c(x1, y1);
          if (vol < 0) {
            out.add("boundary-rectangle-nonnegative",
                    "rectangle [" + rat_to_string(bx[static_cast<std::size_t>(x1)]) + "," +
                        rat_to_string(bx[static_cast<std::size_t>(x2)]) + "]x[" +
                        rat_to_string(by[static_cast<std::size_t>(y1)]) + "," +
                        rat_to_string(by[static_cast<std::size_t>(y2)]) + "]",
                    vol);
          }
        }
      }
    }
  }
  return std::move(out).report();
}

}  // namespace qc
