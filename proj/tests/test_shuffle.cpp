// SPDX-License-Identifier: MIT
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qc/grid.hpp"
#include "qc/shuffle.hpp"
#include "qc/verify.hpp"
#include "testutil.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

using namespace qc;
using namespace qctest;

namespace {

Rat rs(const std::string& s) { return rat_from_string(s); }

ShuffleSpec inverse_spec(const ShuffleSpec& s) {
  ShuffleSpec inv;
  for (const auto& ax : s.axes) {
    const std::size_t m = ax.lengths.size();
    ShuffleAxis ia;
    ia.lengths.resize(m);
    ia.perm.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      ia.lengths[static_cast<std::size_t>(ax.perm[i])] = ax.lengths[i];
      ia.perm[static_cast<std::size_t>(ax.perm[i])] = static_cast<int>(i);
    }
    inv.axes.push_back(std::move(ia));
  }
  return inv;
}

ShuffleAxis random_axis_shuffle(Rng& rng, int parts, int den) {
  std::vector<int> cuts;
  while (static_cast<int>(cuts.size()) < parts - 1) {
    const int c = rand_int(rng, 1, den - 1);
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  ShuffleAxis ax;
  int prev = 0;
  for (int c : cuts) {
    ax.lengths.push_back(Rat(c - prev, den));
    prev = c;
  }
  ax.lengths.push_back(Rat(den - prev, den));
  ax.perm.resize(static_cast<std::size_t>(parts));
  std::iota(ax.perm.begin(), ax.perm.end(), 0);
  std::shuffle(ax.perm.begin(), ax.perm.end(), rng);
  return ax;
}

}  // namespace

TEST_CASE("pi_n_spec: frozen permutations and involution") {
  const ShuffleSpec id1 = pi_n_spec(1, 2);
  REQUIRE_EQ(id1.axes.size(), 2);
  CHECK_EQ(id1.axes[0].lengths, std::vector<Rat>{Rat(1)});
  CHECK_EQ(id1.axes[0].perm, std::vector<int>{0});

  const ShuffleSpec s2 = pi_n_spec(2, 1);
  CHECK_EQ(s2.axes[0].lengths, std::vector<Rat>(4, Rat(1, 4)));
  CHECK_EQ(s2.axes[0].perm, std::vector<int>({0, 2, 1, 3}));

  for (int m = 1; m <= 8; ++m) {
    const auto perm = pi_n_spec(m, 1).axes[0].perm;
    for (std::size_t i = 0; i < perm.size(); ++i) {
      CHECK_EQ(perm[static_cast<std::size_t>(perm[i])], static_cast<int>(i));
    }
  }
}

TEST_CASE("apply_shuffle: identity permutation leaves the grid unchanged") {
  const MassGrid m = min_copula_grid(4, 2);
  ShuffleAxis whole;
  whole.lengths = {Rat(1)};
  whole.perm = {0};
  CHECK_EQ(apply_shuffle(m, ShuffleSpec{{whole, whole}}), m);

  ShuffleAxis halves;
  halves.lengths = {Rat(1, 2), Rat(1, 2)};
  halves.perm = {0, 1};
  CHECK_EQ(apply_shuffle(m, ShuffleSpec{{halves, halves}}), m);
}

TEST_CASE("apply_shuffle: two-interval swap of the diagonal, against brute force") {
  const MassGrid m = min_copula_grid(4, 2);
  ShuffleAxis swap2;
  swap2.lengths = {Rat(1, 2), Rat(1, 2)};
  swap2.perm = {1, 0};
  ShuffleAxis keep;
  keep.lengths = {Rat(1)};
  keep.perm = {0};
  const MassGrid shuffled = apply_shuffle(m, ShuffleSpec{{swap2, keep}});

  // Brute-force pushforward of the 16-cell table: x -> x +- 1/2, y fixed.
  std::vector<Rat> expected(16, Rat(0));
  const std::vector<int> shape{4, 4};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const int ti = (i + 2) % 4;
      expected[flat_index({ti, j}, shape)] += m.mass()[flat_index({i, j}, shape)];
    }
  }
  const MassGrid want = MassGrid::create(m.breakpoints(), expected, true);
  CHECK_EQ(shuffled, want);
  // The result is the classical straight shuffle: still a copula.
  CHECK(check_copula(shuffled).passed);
}

TEST_CASE("apply_shuffle: preserves total mass and per-interval slab masses") {
  Rng rng(421);
  for (int trial = 0; trial < 25; ++trial) {
    const int n = rand_int(rng, 2, 4);
    const int flips = rand_int(rng, 0, 3);
    const MassGrid g = random_stochastic_grid(rng, n, flips);
    ShuffleSpec spec;
    std::vector<std::vector<Rat>> cuts(2), offs(2);
    for (int k = 0; k < 2; ++k) {
      const int parts = rand_int(rng, 2, 4);
      spec.axes.push_back(random_axis_shuffle(rng, parts, 12));
      const auto& ax = spec.axes.back();
      Rat c = 0;
      for (const Rat& len : ax.lengths) {
        cuts[static_cast<std::size_t>(k)].push_back(c);
        c += len;
      }
      for (std::size_t i = 0; i < ax.lengths.size(); ++i) {
        Rat off = 0;
        for (std::size_t j = 0; j < ax.lengths.size(); ++j) {
          if (ax.perm[j] < ax.perm[i]) off += ax.lengths[j];
        }
        offs[static_cast<std::size_t>(k)].push_back(off);
      }
    }
    const MassGrid h = apply_shuffle(g, spec);
    CHECK_EQ(h.total_mass(), g.total_mass());
    for (int k = 0; k < 2; ++k) {
      const auto& ax = spec.axes[static_cast<std::size_t>(k)];
      for (std::size_t i = 0; i < ax.lengths.size(); ++i) {
        const Rat src = margin(g, k, cuts[static_cast<std::size_t>(k)][i],
                               cuts[static_cast<std::size_t>(k)][i] + ax.lengths[i]);
        const Rat dst = margin(h, k, offs[static_cast<std::size_t>(k)][i],
                               offs[static_cast<std::size_t>(k)][i] + ax.lengths[i]);
        CHECK_EQ(src, dst);
      }
    }
  }
}

TEST_CASE("apply_shuffle: inverse permutations recover the original grid") {
  Rng rng(87);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rand_int(rng, 2, 4);
    const int flips = rand_int(rng, 0, 3);
    const MassGrid g = random_stochastic_grid(rng, n, flips);
    ShuffleSpec spec;
    spec.axes.push_back(random_axis_shuffle(rng, rand_int(rng, 2, 4), 10));
    spec.axes.push_back(random_axis_shuffle(rng, rand_int(rng, 2, 4), 10));
    const MassGrid round = apply_shuffle(apply_shuffle(g, spec), inverse_spec(spec));
    const auto [a, b] = refine_to_common_mesh(g, round);
    CHECK_EQ(a, b);
  }
}

TEST_CASE("apply_shuffle: pi_n applied twice is the identity") {
  Rng rng(5);
  const MassGrid g = random_checkerboard_copula(rng, 2, 4);
  const ShuffleSpec spec = pi_n_spec(2, 2);
  const MassGrid round = apply_shuffle(apply_shuffle(g, spec), spec);
  const auto [a, b] = refine_to_common_mesh(g, round);
  CHECK_EQ(a, b);
}

TEST_CASE("apply_shuffle: input validation") {
  const MassGrid m = min_copula_grid(2, 2);
  ShuffleAxis whole;
  whole.lengths = {Rat(1)};
  whole.perm = {0};
  CHECK_THROWS_AS(apply_shuffle(m, ShuffleSpec{{whole}}), std::invalid_argument);

  ShuffleAxis shortlen;
  shortlen.lengths = {Rat(1, 2), Rat(1, 4)};
  shortlen.perm = {0, 1};
  CHECK_THROWS_AS(apply_shuffle(m, ShuffleSpec{{shortlen, whole}}), std::invalid_argument);

  ShuffleAxis badperm;
  badperm.lengths = {Rat(1, 2), Rat(1, 2)};
  badperm.perm = {0, 0};
  CHECK_THROWS_AS(apply_shuffle(m, ShuffleSpec{{badperm, whole}}), std::invalid_argument);
}

TEST_CASE("shuffle of a proper quasi-copula can fail the quasi-copula check") {
  const MassGrid q = proper_qc_4x4();
  REQUIRE(check_quasicopula(q).passed);
  REQUIRE_FALSE(check_copula(q).passed);

  ShuffleAxis keep;
  keep.lengths = {Rat(1)};
  keep.perm = {0};
  ShuffleAxis swap_low;
  swap_low.lengths = {Rat(1, 4), Rat(1, 4), Rat(1, 2)};
  swap_low.perm = {1, 0, 2};
  const MassGrid shuffled = apply_shuffle(q, ShuffleSpec{{keep, swap_low}});
  const VerifyReport rep = check_quasicopula(shuffled);
  CHECK_FALSE(rep.passed);
  bool found = false;
  for (const auto& f : rep.failures) {
    if (f.condition == "band-nonnegative" && f.value == rs("-1/4")) found = true;
  }
  CHECK(found);
}

TEST_CASE("som_interpolate: min copula stays on the diagonal") {
  const MassGrid m = min_copula_grid(4, 2);
  const ShuffleOfMin som = som_interpolate(m, {Point{rs("1/2"), rs("1/2")}});
  REQUIRE_EQ(som.segments.size(), 2);
  CHECK_EQ(som.segments[0].start, Point({Rat(0), Rat(0)}));
  CHECK_EQ(som.segments[0].mass, rs("1/2"));
  CHECK_EQ(som.segments[1].start, Point({rs("1/2"), rs("1/2")}));
  CHECK_EQ(som.segments[1].mass, rs("1/2"));
  for (const auto& t : {rs("1/5"), rs("1/2"), rs("7/8"), Rat(1)}) {
    CHECK_EQ(som_cdf_at(som, Point{t, t}), t);
  }
  CHECK_EQ(som_cdf_at(som, Point{rs("1/3"), rs("3/4")}), rs("1/3"));
}

TEST_CASE("som_interpolate: product copula through (1/2,1/2)") {
  const MassGrid pi = product_copula_grid(2, 2);
  const ShuffleOfMin som = som_interpolate(pi, {Point{rs("1/2"), rs("1/2")}});
  REQUIRE_EQ(som.segments.size(), 4);
  // Lex order of the interpolation cells fixes the segment order.
  CHECK_EQ(som.segments[0].start, Point({Rat(0), Rat(0)}));
  CHECK_EQ(som.segments[1].start, Point({rs("1/4"), rs("1/2")}));
  CHECK_EQ(som.segments[2].start, Point({rs("1/2"), rs("1/4")}));
  CHECK_EQ(som.segments[3].start, Point({rs("3/4"), rs("3/4")}));
  for (const auto& seg : som.segments) CHECK_EQ(seg.mass, rs("1/4"));
  CHECK_EQ(som_cdf_at(som, Point{rs("1/2"), rs("1/2")}), rs("1/4"));
  CHECK_EQ(som_cdf_at(som, Point{Rat(1), Rat(1)}), Rat(1));
}

TEST_CASE("som_interpolate: axis padding fills the widest gap") {
  const MassGrid pi = product_copula_grid(2, 2);
  const std::vector<Point> s{Point{rs("1/2"), rs("1/3")}, Point{rs("3/4"), rs("1/3")}};
  const ShuffleOfMin som = som_interpolate(pi, s);
  // Axis 1 mesh {0,1/2,3/4,1} forces one fill point on axis 2: the widest gap
  // (1/3,1) splits at 2/3, visible in the segment starting at (1/3,2/3).
  REQUIRE_EQ(som.segments.size(), 9);
  bool found = false;
  for (const auto& seg : som.segments) {
    if (seg.start == Point({rs("1/3"), rs("2/3")})) {
      found = true;
      CHECK_EQ(seg.mass, rs("1/6"));
    }
  }
  CHECK(found);
  for (const Point& p : s) CHECK_EQ(som_cdf_at(som, p), cdf_at(pi, p));
}

TEST_CASE("som_interpolate: agreement and tiling on random checkerboard copulas") {
  Rng rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = rand_int(rng, 2, 3);
    const int n = rand_int(rng, 2, 3);
    const MassGrid c = random_checkerboard_copula(rng, d, n);
    std::vector<Point> s;
    const int pts = rand_int(rng, 1, 2);
    for (int t = 0; t < pts; ++t) {
      Point p(static_cast<std::size_t>(d));
      for (auto& x : p) x = Rat(rand_int(rng, 1, 11), 12);
      s.push_back(p);
    }
    const ShuffleOfMin som = som_interpolate(c, s);
    for (const Point& p : s) CHECK_EQ(som_cdf_at(som, p), cdf_at(c, p));

    // Tiling: per axis the segment intervals abut and cover [0,1].
    Rat total = 0;
    for (const auto& seg : som.segments) total += seg.mass;
    CHECK_EQ(total, Rat(1));
    for (int k = 0; k < d; ++k) {
      std::vector<std::pair<Rat, Rat>> spans;
      for (const auto& seg : som.segments) {
        spans.emplace_back(seg.start[static_cast<std::size_t>(k)],
                           seg.start[static_cast<std::size_t>(k)] + seg.mass);
      }
      std::sort(spans.begin(), spans.end());
      REQUIRE_FALSE(spans.empty());
      CHECK_EQ(spans.front().first, Rat(0));
      for (std::size_t i = 0; i + 1 < spans.size(); ++i) {
        CHECK_EQ(spans[i].second, spans[i + 1].first);
      }
      CHECK_EQ(spans.back().second, Rat(1));
    }
  }
}

TEST_CASE("som_interpolate: rejects non-copula inputs") {
  const MassGrid q = proper_qc_4x4();
  CHECK_THROWS_AS(som_interpolate(q, {Point{rs("1/2"), rs("1/2")}}), std::invalid_argument);
  // Via CDF table: the padded mesh isolates a negative box.
  const CdfTable t = cdf_table(q);
  const std::vector<Point> s{Point{rs("1/4"), rs("1/2")}, Point{rs("1/2"), rs("3/4")}};
  CHECK_THROWS_AS(som_interpolate(t, s), std::invalid_argument);
}

TEST_CASE("som_to_grid: frozen discretizations") {
  const MassGrid m2 = min_copula_grid(4, 2);
  const ShuffleOfMin msom = som_interpolate(m2, {Point{rs("1/2"), rs("1/2")}});
  const std::vector<std::vector<Rat>> halves{rats({"0", "1/2", "1"}), rats({"0", "1/2", "1"})};
  CHECK_EQ(som_to_grid(msom, halves), min_copula_grid(2, 2));

  const MassGrid pi = product_copula_grid(2, 2);
  const ShuffleOfMin psom = som_interpolate(pi, {Point{rs("1/2"), rs("1/2")}});
  const MassGrid g = som_to_grid(psom, som_endpoint_mesh(psom));
  const MassGrid want = make_grid(
      {{"0", "1/4", "1/2", "3/4", "1"}, {"0", "1/4", "1/2", "3/4", "1"}},
      {"1/4", "0", "0", "0", "0", "0", "1/4", "0", "0", "1/4", "0", "0", "0", "0", "0", "1/4"},
      true);
  CHECK_EQ(g, want);
  CHECK(check_copula(g).passed);

  CHECK_THROWS_AS(som_to_grid(psom, halves), std::invalid_argument);
}

TEST_CASE("som_to_grid: vertex CDF agreement and copula check on random inputs") {
  Rng rng(2718);
  for (int trial = 0; trial < 15; ++trial) {
    const int d = rand_int(rng, 2, 3);
    const int n = rand_int(rng, 2, 3);
    const MassGrid c = random_checkerboard_copula(rng, d, n);
    Point p(static_cast<std::size_t>(d));
    for (auto& x : p) x = Rat(rand_int(rng, 1, 5), 6);
    const ShuffleOfMin som = som_interpolate(c, {p});
    const auto mesh = som_endpoint_mesh(som);
    const MassGrid g = som_to_grid(som, mesh);
    CHECK(check_copula(g).passed);
    std::vector<int> vshape(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      vshape[static_cast<std::size_t>(k)] = static_cast<int>(mesh[static_cast<std::size_t>(k)].size());
    }
    std::vector<int> v(static_cast<std::size_t>(d), 0);
    do {
      Point vertex(static_cast<std::size_t>(d));
      for (int k = 0; k < d; ++k) {
        vertex[static_cast<std::size_t>(k)] =
            mesh[static_cast<std::size_t>(k)][static_cast<std::size_t>(v[static_cast<std::size_t>(k)])];
      }
      CHECK_EQ(cdf_at(g, vertex), som_cdf_at(som, vertex));
    } while (next_multi_index(v, vshape));
  }
}
