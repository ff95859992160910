// Dyadic cover machinery: approximate_interval geometry, ladder indices, the
// materialized cover's invariants, and its validation errors.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "lpk/cover.hpp"

using namespace lpk;

TEST_CASE("approximate_interval picks the documented dyadic surrogate") {
  SUBCASE("[5, 6.5]") {
    DyadicInterval d = approximate_interval(5.0, 6.5);
    CHECK(d.k == 0);  // 1 <= 1.5 < 2
    CHECK(d.j == 3);  // sup{j : j+1 < 5}
    CHECK(d.left() == 3.0);
    CHECK(d.right() == 11.0);
    CHECK(d.shrink34_left() == 4.0);
    CHECK(d.shrink34_right() == 10.0);
  }
  SUBCASE("[1, 2]") {
    DyadicInterval d = approximate_interval(1.0, 2.0);
    CHECK(d.k == 0);
    CHECK(d.j == -1);
    CHECK(d.left() == -1.0);
    CHECK(d.right() == 7.0);
  }
  SUBCASE("general containment in the 3/4 shrink") {
    for (double a : {-20.0, -3.1, 0.7, 2.0, 5.5, 123.4}) {
      for (double len : {0.04, 0.3, 1.0, 7.7, 60.0}) {
        DyadicInterval d = approximate_interval(a, a + len);
        CHECK(std::pow(2.0, d.k) <= len);
        CHECK(len < std::pow(2.0, d.k + 1));
        CHECK(d.shrink34_left() <= a);
        CHECK(a + len <= d.shrink34_right());
      }
    }
  }
}

TEST_CASE("n_index is the largest v with A^{v-1} <= 2l/3") {
  CHECK(n_index(3.0, 2.0) == 2);  // 2^{v-1} <= 2 -> v = 2
  for (double l : {0.5, 1.0, 5.0}) {
    for (double A : {1.03, 1.1, 1.5}) {
      const int v = n_index(l, A);
      CHECK(std::pow(A, v - 1) <= 2.0 * l / 3.0 + 1e-12);
      CHECK(std::pow(A, v) > 2.0 * l / 3.0 - 1e-12);
    }
  }
}

TEST_CASE("build_cover materializes a valid ladder") {
  SampleGrid grid = make_grid(32.0, 2048);
  IntervalFamily fam{{{1.0, 2.0}, {3.0, 8.0}, {-6.0, -4.0}}};
  const double A = 1.03;
  Cover cover = build_cover(fam, grid, A, 100);

  CHECK(cover.A == A);
  CHECK(cover.D == 100);
  CHECK(cover.n_m.size() == 3);
  CHECK(!cover.rows.empty());

  // v_min: the largest integer with A^{v_min} < freq_spacing / 4.
  const double cut = grid.freq_spacing() / 4.0;
  CHECK(std::pow(A, cover.v_min) < cut);
  CHECK(std::pow(A, cover.v_min + 1) >= cut);

  int last_m = -1, last_v = 0;
  for (const CoverRow& row : cover.rows) {
    const Interval& I = cover.interval(row.m);
    const double l = I.len();

    // Ladder order and range.
    if (row.m == last_m) CHECK(row.v == last_v + 1);
    else CHECK(row.v == cover.v_min);
    last_m = row.m;
    last_v = row.v;
    CHECK(row.v <= cover.n_m[std::size_t(row.m)]);

    // a_mv is the dyadic left endpoint and delta its distance to a_m.
    CHECK(row.a_mv == double(row.j) * std::pow(2.0, row.k));
    CHECK(std::abs(row.delta - (row.a_mv - I.a)) <= 1e-12);

    // delta in [0, l] and strictly below A^{v-1}: offsets of one component
    // of the merge land on a common carrier.
    CHECK(row.delta >= 0.0);
    CHECK(row.delta <= l);
    CHECK(row.delta < std::pow(A, row.v - 1));

    // The shifted band sits inside the 3/4 shrink of J.
    DyadicInterval J{row.k, row.j};
    CHECK(J.shrink34_left() <= I.a + std::pow(A, row.v - 1));
    CHECK(I.a + std::pow(A, row.v + 1) <= J.shrink34_right());

    // J avoids the origin.
    CHECK(J.left() * J.right() > 0.0);

    // Class labels stay in [1, D].
    CHECK(row.cls >= 1);
    CHECK(row.cls <= cover.D);
  }

  // Within one residue class the J's are pairwise disjoint.
  for (int d = 1; d <= cover.D; ++d) {
    std::vector<CoverRow> rows = cover.rows_for_class(d);
    for (std::size_t x = 0; x < rows.size(); ++x)
      for (std::size_t y = x + 1; y < rows.size(); ++y) {
        DyadicInterval jx{rows[x].k, rows[x].j}, jy{rows[y].k, rows[y].j};
        const bool disjoint = jx.right() <= jy.left() || jy.right() <= jx.left();
        CHECK(disjoint);
      }
  }

  // largest_class returns a nonempty class of maximal size.
  const int big = cover.largest_class();
  const std::size_t big_n = cover.rows_for_class(big).size();
  CHECK(big_n > 0);
  for (int d = 1; d <= cover.D; ++d) CHECK(cover.rows_for_class(d).size() <= big_n);

  // entry() reproduces materialized rows and extends below v_min.
  for (const CoverRow& row : cover.rows) {
    CoverRow e = cover.entry(row.m, row.v);
    CHECK(e.k == row.k);
    CHECK(e.j == row.j);
    CHECK(e.a_mv == row.a_mv);
  }
  CoverRow below = cover.entry(0, cover.v_min - 5);
  CHECK(below.delta >= 0.0);
  CHECK(below.delta < std::pow(A, cover.v_min - 6));
}

TEST_CASE("coarse scale ratios collide and raise CoverError") {
  SampleGrid grid = make_grid(32.0, 2048);
  IntervalFamily fam{{{1.0, 2.0}, {3.0, 8.0}, {-6.0, -4.0}}};
  CHECK_THROWS_AS((void)build_cover(fam, grid, 4.0, 1), CoverError);
}

TEST_CASE("validate_family rejects malformed families") {
  CHECK_NOTHROW(validate_family(IntervalFamily{{{1.0, 2.0}, {3.0, 8.0}}}));
  // Empty length.
  CHECK_THROWS_AS(validate_family(IntervalFamily{{{2.0, 2.0}}}), std::invalid_argument);
  // Reversed.
  CHECK_THROWS_AS(validate_family(IntervalFamily{{{3.0, 1.0}}}), std::invalid_argument);
  // Overlapping interiors.
  CHECK_THROWS_AS(validate_family(IntervalFamily{{{1.0, 3.0}, {2.0, 4.0}}}),
                  std::invalid_argument);
  // Origin interior to an interval.
  CHECK_THROWS_AS(validate_family(IntervalFamily{{{-1.0, 1.0}}}), std::invalid_argument);
  // Touching endpoints are allowed.
  CHECK_NOTHROW(validate_family(IntervalFamily{{{1.0, 2.0}, {2.0, 3.0}}}));
}

TEST_CASE("mirror_family reflects intervals about the origin") {
  IntervalFamily fam{{{1.0, 2.0}, {-6.0, -4.0}}};
  IntervalFamily mir = mirror_family(fam);
  REQUIRE(mir.intervals.size() == 2);
  CHECK(mir.intervals[0].a == -2.0);
  CHECK(mir.intervals[0].b == -1.0);
  CHECK(mir.intervals[1].a == 4.0);
  CHECK(mir.intervals[1].b == 6.0);
  CHECK_NOTHROW(validate_family(mir));
}
