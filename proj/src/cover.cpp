#include "lpk/cover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lpk {

void validate_family(const IntervalFamily& fam) {
  const auto& iv = fam.intervals;
  if (iv.empty()) throw std::invalid_argument("interval family: empty");
  for (std::size_t m = 0; m < iv.size(); ++m) {
    if (!std::isfinite(iv[m].a) || !std::isfinite(iv[m].b) || !(iv[m].len() > 0.0)) {
      std::ostringstream os;
      os << "interval family: interval " << m << " must have finite endpoints and positive length";
      throw std::invalid_argument(os.str());
    }
    if (iv[m].a < 0.0 && iv[m].b > 0.0) {
      std::ostringstream os;
      os << "interval family: interval " << m << " contains 0 in its interior";
      throw std::invalid_argument(os.str());
    }
  }
  std::vector<std::size_t> order(iv.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return iv[x].a < iv[y].a; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (iv[order[i]].a < iv[order[i - 1]].b) {
      std::ostringstream os;
      os << "interval family: intervals " << order[i - 1] << " and " << order[i]
         << " have overlapping interiors";
      throw std::invalid_argument(os.str());
    }
  }
}

IntervalFamily mirror_family(const IntervalFamily& fam) {
  IntervalFamily out;
  out.intervals.reserve(fam.intervals.size());
  for (const auto& iv : fam.intervals) out.intervals.push_back({-iv.b, -iv.a});
  return out;
}

double DyadicInterval::left() const { return std::ldexp(double(j), k); }
double DyadicInterval::right() const { return std::ldexp(double(j + 8), k); }
double DyadicInterval::shrink34_left() const { return std::ldexp(double(j + 1), k); }
double DyadicInterval::shrink34_right() const { return std::ldexp(double(j + 7), k); }

DyadicInterval approximate_interval(double a, double b) {
  const double len = b - a;
  if (!(len > 0.0) || !std::isfinite(len) || !std::isfinite(a))
    throw std::invalid_argument("approximate_interval: requires finite a < b");
  int k = int(std::floor(std::log2(len)));
  while (std::ldexp(1.0, k) > len) --k;
  while (std::ldexp(1.0, k + 1) <= len) ++k;

  long long j = (long long)std::ceil(std::ldexp(a, -k)) - 2;
  while (std::ldexp(double(j + 1), k) >= a) --j;
  while (std::ldexp(double(j + 2), k) < a) ++j;
  return {k, j};
}

int n_index(double l, double A) {
  if (!(l > 0.0) || !(A > 1.0)) throw std::invalid_argument("n_index: requires l > 0, A > 1");
  const double bound = (2.0 * l) / 3.0;
  int v = int(std::floor(std::log(bound) / std::log(A))) + 1;
  while (std::pow(A, v - 1) > bound) --v;
  while (std::pow(A, v) <= bound) ++v;
  return v;
}

namespace {

int floor_log_base(double x, double A) {
  int v = int(std::floor(std::log(x) / std::log(A)));
  while (std::pow(A, v) > x) --v;
  while (std::pow(A, v + 1) <= x) ++v;
  return v;
}

CoverRow make_row(int m, int v, const Interval& iv, double A, int N_m, int D) {
  const double lo = iv.a + std::pow(A, v - 1);
  const double hi = iv.a + std::pow(A, v + 1);
  DyadicInterval J = approximate_interval(lo, hi);
  CoverRow row;
  row.m = m;
  row.v = v;
  row.k = J.k;
  row.j = J.j;
  row.a_mv = J.left();
  row.delta = row.a_mv - iv.a;
  row.cls = int(((long long)(N_m - v) % D + D) % D) + 1;

  std::ostringstream bad;
  if (!(J.shrink34_left() <= lo && hi <= J.shrink34_right()))
    bad << "shifted scale interval not inside the concentric 3/4 shrink of J";
  else if (!(row.delta >= 0.0 && row.delta <= iv.len()))
    bad << "delta = " << row.delta << " outside [0, l_m]";
  else if (J.left() <= 0.0 && J.right() >= 0.0)
    bad << "J contains the origin";
  if (bad.tellp() > 0) {
    std::ostringstream os;
    os << "cover row (m=" << m << ", v=" << v << ", k=" << row.k << ", j=" << row.j
       << "): " << bad.str();
    throw CoverError(os.str());
  }
  return row;
}

}  // namespace

std::vector<CoverRow> Cover::rows_for_class(int d) const {
  std::vector<CoverRow> out;
  for (const auto& r : rows)
    if (r.cls == d) out.push_back(r);
  return out;
}

int Cover::largest_class() const {
  std::vector<int> count(D + 1, 0);
  for (const auto& r : rows) ++count[r.cls];
  int best = 1;
  for (int d = 2; d <= D; ++d)
    if (count[d] > count[best]) best = d;
  return best;
}

CoverRow Cover::entry(int m, int v) const {
  const Interval& iv = interval(m);
  if (v > n_m.at(m)) throw std::invalid_argument("Cover::entry: v exceeds N_m");
  return make_row(m, v, iv, A, n_m[m], D);
}

Cover build_cover(const IntervalFamily& fam, const SampleGrid& grid, double A, int D) {
  validate_family(fam);
  if (!(A > 1.0)) throw std::invalid_argument("build_cover: requires A > 1");
  if (D < 1) throw std::invalid_argument("build_cover: requires D >= 1");

  Cover cover;
  cover.family = fam;
  cover.grid = grid;
  cover.A = A;
  cover.D = D;
  cover.v_min = floor_log_base(grid.freq_spacing() / 4.0, A);
  if (std::pow(A, cover.v_min) >= grid.freq_spacing() / 4.0) --cover.v_min;

  for (std::size_t m = 0; m < fam.intervals.size(); ++m) {
    const Interval& iv = fam.intervals[m];
    const int N_m = n_index(iv.len(), A);
    cover.n_m.push_back(N_m);
    for (int v = cover.v_min; v <= N_m; ++v)
      cover.rows.push_back(make_row(int(m), v, iv, A, N_m, D));
  }

  // Same-class disjointness of the (open) J's, origin exclusion already done.
  std::vector<std::vector<const CoverRow*>> by_class(D + 1);
  for (const auto& r : cover.rows) by_class[r.cls].push_back(&r);
  for (int d = 1; d <= D; ++d) {
    auto& list = by_class[d];
    std::sort(list.begin(), list.end(), [](const CoverRow* x, const CoverRow* y) {
      return std::ldexp(double(x->j), x->k) < std::ldexp(double(y->j), y->k);
    });
    for (std::size_t i = 1; i < list.size(); ++i) {
      const CoverRow* p = list[i - 1];
      const CoverRow* q = list[i];
      const double p_right = std::ldexp(double(p->j + 8), p->k);
      const double q_left = std::ldexp(double(q->j), q->k);
      if (p_right > q_left) {
        std::ostringstream os;
        os << "cover: collision in class " << d << " between rows (m=" << p->m
           << ", v=" << p->v << ", k=" << p->k << ", j=" << p->j << ") and (m=" << q->m
           << ", v=" << q->v << ", k=" << q->k << ", j=" << q->j << ")";
        throw CoverError(os.str());
      }
    }
  }
  return cover;
}

}  // namespace lpk
