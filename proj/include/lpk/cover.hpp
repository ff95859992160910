#pragma once
// Frequency-interval families and the dyadic cover machinery: for each
// interval [a_m, b_m] a geometric ladder of relative scales 'v' whose shifted
// copies a_m + [A^{v-1}, A^{v+1}] are enclosed in eight-fold dyadic intervals
// J_{k,j} = [j 2^k, (j+8) 2^k], with left endpoints a_{m,v} = j 2^k acting as
// nearby dyadic surrogates for a_m (delta_{m,v} = a_{m,v} - a_m in [0, l_m]).
// Rows are split into D residue classes within which the J's are pairwise
// disjoint and exclude the origin.

#include <stdexcept>
#include <string>
#include <vector>

#include "lpk/grid.hpp"

namespace lpk {

struct Interval {
  double a = 0.0;
  double b = 0.0;
  double len() const { return b - a; }
};

struct IntervalFamily {
  std::vector<Interval> intervals;
};

// Requires: each length positive and finite, interiors pairwise disjoint,
// 0 in no interior. Throws std::invalid_argument otherwise.
void validate_family(const IntervalFamily& fam);

// Mirror xi -> -xi, preserving order within each interval.
IntervalFamily mirror_family(const IntervalFamily& fam);

struct DyadicInterval {
  int k = 0;
  long long j = 0;
  double left() const;          // j 2^k
  double right() const;         // (j+8) 2^k
  double shrink34_left() const;   // concentric 3/4: (j+1) 2^k
  double shrink34_right() const;  // (j+7) 2^k
};

// The unique (k, j) with 2^k <= b-a < 2^{k+1} and
// j = sup{ j : (j+1) 2^k < a }; then [a,b] is contained in the concentric
// 3/4 shrink of J_{k,j}.
DyadicInterval approximate_interval(double a, double b);

// Largest v with A^{v-1} <= (2/3) l.
int n_index(double l, double A);

struct CoverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CoverRow {
  int m = 0;
  int v = 0;
  int k = 0;
  long long j = 0;
  double a_mv = 0.0;   // j 2^k
  double delta = 0.0;  // a_mv - a_m
  int cls = 0;         // residue class in [1, D]
};

struct Cover {
  IntervalFamily family;
  SampleGrid grid;
  double A = 0.0;
  int D = 0;
  int v_min = 0;
  std::vector<int> n_m;        // N_m per interval
  std::vector<CoverRow> rows;  // materialized v in [v_min, N_m], ascending (m, v)

  const Interval& interval(int m) const { return family.intervals.at(m); }
  std::vector<CoverRow> rows_for_class(int d) const;
  int largest_class() const;  // class with the most rows (smallest label wins ties)
  // Row for any v <= N_m (also below v_min); computed on the fly.
  CoverRow entry(int m, int v) const;
};

// Builds and fully validates the cover. v_min is the largest integer with
// A^{v_min} < grid.freq_spacing() / 4 (relative scales below grid resolution
// are dropped). Violations -- containment failure, delta outside [0, l_m],
// origin inside some J, same-class collision -- throw CoverError naming the
// offending rows.
Cover build_cover(const IntervalFamily& fam, const SampleGrid& grid, double A = 1.03,
                  int D = 100);

}  // namespace lpk
