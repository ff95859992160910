#include "lpk/campanato.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>
#include <string>

#include "lpk/kernels.hpp"

namespace lpk {

namespace {

void check_window(const SampleGrid& grid, const PolyWindow& w) {
  if (w.len < 1 || w.start < 0 || w.start + w.len > grid.size)
    throw std::invalid_argument("poly_project: window [" + std::to_string(w.start) + ", " +
                                std::to_string(w.start + w.len) + ") outside grid of size " +
                                std::to_string(grid.size));
}

void check_params(int i, double p, double s) {
  if (i < 0) throw std::invalid_argument("degree bound i must be >= 0");
  if (!(p >= 1.0)) throw std::invalid_argument("exponent p must be >= 1");
  if (!(s <= double(i)) || !(s > -1.0 / p))
    throw std::invalid_argument("scaling exponent s = " + std::to_string(s) +
                                " outside admissible range (-1/p, i] = (" +
                                std::to_string(-1.0 / p) + ", " + std::to_string(i) + "]");
}

// Legendre values P_0(u), ..., P_{m-1}(u).
void legendre_row(double u, int m, double* out) {
  if (m <= 0) return;
  out[0] = 1.0;
  if (m == 1) return;
  out[1] = u;
  for (int n = 1; n + 1 < m; ++n)
    out[n + 1] = ((2 * n + 1) * u * out[n] - n * out[n - 1]) / double(n + 1);
}

// In-place Cholesky of a symmetric positive definite m x m matrix (row-major,
// lower triangle used). Throws on a non-positive pivot.
void chol_factor(std::vector<double>& g, int m) {
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c <= r; ++c) {
      double acc = g[r * m + c];
      for (int k = 0; k < c; ++k) acc -= g[r * m + k] * g[c * m + k];
      if (c == r) {
        if (!(acc > 0.0)) throw std::domain_error("window Gram matrix is rank deficient");
        g[r * m + c] = std::sqrt(acc);
      } else {
        g[r * m + c] = acc / g[c * m + c];
      }
    }
  }
}

// Solve L L^T x = r with L from chol_factor; r is overwritten by x.
void chol_solve(const std::vector<double>& g, int m, cplx* r) {
  for (int k = 0; k < m; ++k) {
    cplx acc = r[k];
    for (int j = 0; j < k; ++j) acc -= g[k * m + j] * r[j];
    r[k] = acc / g[k * m + k];
  }
  for (int k = m - 1; k >= 0; --k) {
    cplx acc = r[k];
    for (int j = k + 1; j < m; ++j) acc -= g[j * m + k] * r[j];
    r[k] = acc / g[k * m + k];
  }
}

std::vector<const cplx*> component_views(const SampledSignal& h) { return {h.values.data()}; }

std::vector<const cplx*> component_views(const VectorSignal& h) {
  std::vector<const cplx*> out;
  out.reserve(h.comps.size());
  for (const auto& [key, comp] : h.comps) out.push_back(comp.values.data());
  return out;
}

// Fast path (p = 2, i <= 2): accumulate the squared projection residual of one
// component into out[pos] for every window [pos, pos+L). Sliding first and
// second moments, re-anchored every L slides to keep roundoff from drifting.
void sliding_resid2(const cplx* h, int n, int len, int i, std::vector<double>& out) {
  const auto& ops = kernels::active();
  const int npos = n - len + 1;
  const double m2 = double(len) * (double(len) * len - 1.0) / 12.0;  // sum (t-c)^2
  const double half = 0.5 * (len - 1);
  int pos = 0;
  while (pos < npos) {
    const int block = std::min(len, npos - pos);
    auto m = ops.window_moments(h + pos, std::size_t(len), half);
    cplx s0 = m.s0, s1 = m.s1;  // s1 anchored at the center of window `pos`
    double q = m.q;
    for (int b = 0; b < block; ++b) {
      const int at = pos + b;
      double r2 = q;
      if (i >= 1) r2 -= std::norm(s0) / double(len);
      if (i >= 2) {
        const cplx s1c = s1 - double(b) * s0;  // recenter at window `at`
        r2 -= std::norm(s1c) / m2;
      }
      out[at] += std::max(0.0, r2);
      if (b + 1 < block) {
        const cplx hin = h[at + len], hout = h[at];
        s0 += hin - hout;
        s1 += hin * (double(at + len - pos) - half) - hout * (double(at - pos) - half);
        q += std::norm(hin) - std::norm(hout);
      }
    }
    pos += block;
  }
}

// General path: per-window least squares of degree < i in the scaled centered
// monomial basis u^a, u = (t - center)/(len/2), shared Gram factor per length.
// Fills meanp[pos] = (1/len) sum_t (sum_c |h_c - P_c|^2)^{p/2}.
void direct_meanp(const std::vector<const cplx*>& comps, int n, int len, int i, double p,
                  std::vector<double>& meanp) {
  const int m = i;
  const int npos = n - len + 1;
  const double half = 0.5 * (len - 1);
  const double scale = 0.5 * len;

  // u powers, u_t identical for every window of this length.
  std::vector<double> upow(std::size_t(len) * std::max(m, 1), 1.0);
  for (int t = 0; t < len; ++t) {
    const double u = (double(t) - half) / scale;
    for (int a = 1; a < m; ++a) upow[std::size_t(t) * m + a] = upow[std::size_t(t) * m + a - 1] * u;
  }
  std::vector<double> gram(std::size_t(m) * m, 0.0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b <= a; ++b) {
      double acc = 0.0;
      for (int t = 0; t < len; ++t) acc += upow[std::size_t(t) * m + a] * upow[std::size_t(t) * m + b];
      gram[std::size_t(a) * m + b] = gram[std::size_t(b) * m + a] = acc;
    }
  if (m > 0) chol_factor(gram, m);

  const bool pointwise = (p != 2.0);
  std::vector<cplx> rhs(std::max(m, 1));
  std::vector<double> acc_sq(pointwise ? len : 0);

  for (int pos = 0; pos < npos; ++pos) {
    if (pointwise) std::fill(acc_sq.begin(), acc_sq.end(), 0.0);
    double resid2_total = 0.0;
    for (const cplx* comp : comps) {
      const cplx* h = comp + pos;
      double q = 0.0;
      std::fill(rhs.begin(), rhs.end(), cplx(0.0));
      for (int t = 0; t < len; ++t) {
        q += std::norm(h[t]);
        for (int a = 0; a < m; ++a) rhs[a] += h[t] * upow[std::size_t(t) * m + a];
      }
      if (m > 0) {
        std::vector<cplx> coef(rhs.begin(), rhs.begin() + m);
        chol_solve(gram, m, coef.data());
        if (pointwise) {
          for (int t = 0; t < len; ++t) {
            cplx pv = 0.0;
            for (int a = 0; a < m; ++a) pv += coef[a] * upow[std::size_t(t) * m + a];
            acc_sq[t] += std::norm(h[t] - pv);
          }
        } else {
          double proj = 0.0;
          for (int a = 0; a < m; ++a) proj += (std::conj(rhs[a]) * coef[a]).real();
          resid2_total += std::max(0.0, q - proj);
        }
      } else {
        if (pointwise)
          for (int t = 0; t < len; ++t) acc_sq[t] += std::norm(h[t]);
        else
          resid2_total += q;
      }
    }
    if (pointwise) {
      double sum = 0.0;
      for (int t = 0; t < len; ++t) sum += std::pow(acc_sq[t], 0.5 * p);
      meanp[pos] = sum / double(len);
    } else {
      meanp[pos] = resid2_total / double(len);
    }
  }
}

// Oscillation values for one window length: val[pos] = |Q|^{-s} mean_p^{1/p}.
void window_values_for_length(const std::vector<const cplx*>& comps, const SampleGrid& grid,
                              int i, double p, double s, int len, std::vector<double>& val) {
  const int n = grid.size;
  const int npos = n - len + 1;
  val.assign(std::size_t(npos), 0.0);
  if (p == 2.0 && i <= 2) {
    std::vector<double> resid2(std::size_t(npos), 0.0);
    for (const cplx* comp : comps) sliding_resid2(comp, n, len, i, resid2);
    for (int pos = 0; pos < npos; ++pos) val[pos] = resid2[pos] / double(len);
  } else {
    direct_meanp(comps, n, len, i, p, val);
  }
  const double weight = std::pow(double(len) * grid.spacing(), -s);
  for (int pos = 0; pos < npos; ++pos)
    val[pos] = weight * std::pow(std::max(0.0, val[pos]), 1.0 / p);
}

double campanato_norm_impl(const std::vector<const cplx*>& comps, const SampleGrid& grid,
                           int i, double p, double s) {
  check_params(i, p, s);
  double best = 0.0;
  std::vector<double> val;
  for (int len = 2; len <= grid.size / 2; len *= 2) {
    if (len <= i) continue;  // <= i samples: interpolation is exact, oscillation 0
    window_values_for_length(comps, grid, i, p, s, len, val);
    for (double v : val) best = std::max(best, v);
  }
  return best;
}

MaximalProfile maximal_impl(const std::vector<const cplx*>& comps, const SampleGrid& grid,
                            int i, double p, double s, MaximalVariant variant) {
  check_params(i, p, s);
  MaximalProfile prof;
  prof.grid = grid;
  prof.i = i;
  prof.p = p;
  prof.s = s;
  prof.variant = variant;
  prof.l2_surrogate = (p != 2.0);
  prof.values.assign(std::size_t(grid.size), 0.0);

  std::vector<double> val;
  for (int len = 2; len <= grid.size / 2; len *= 2) {
    if (len <= i) continue;  // <= i samples: interpolation is exact, oscillation 0
    window_values_for_length(comps, grid, i, p, s, len, val);
    const int npos = grid.size - len + 1;
    if (variant == MaximalVariant::Centered) {
      for (int idx = 0; idx < grid.size; ++idx) {
        const int pos = idx - len / 2;
        if (pos >= 0 && pos < npos) prof.values[idx] = std::max(prof.values[idx], val[pos]);
      }
    } else {
      // Sliding max over the windows containing idx: pos in [idx-len+1, idx].
      std::deque<int> dq;
      for (int idx = 0; idx < grid.size; ++idx) {
        if (idx < npos) {
          while (!dq.empty() && val[dq.back()] <= val[idx]) dq.pop_back();
          dq.push_back(idx);
        }
        while (!dq.empty() && dq.front() < idx - len + 1) dq.pop_front();
        if (!dq.empty()) prof.values[idx] = std::max(prof.values[idx], val[dq.front()]);
      }
    }
  }
  return prof;
}

PolyCoeffs poly_project_impl(const std::vector<const cplx*>& comps, const SampleGrid& grid,
                             const PolyWindow& window, int i) {
  check_window(grid, window);
  if (i < 0) throw std::invalid_argument("poly_project: degree bound i must be >= 0");
  if (i > window.len)
    throw std::domain_error("poly_project: degree bound " + std::to_string(i) +
                            " exceeds window length " + std::to_string(window.len) +
                            " (rank-deficient system)");
  PolyCoeffs out;
  out.degree_bound = i;
  out.window = window;
  const int m = i;
  const int len = window.len;
  const double half = 0.5 * (len - 1);
  const double scale = std::max(0.5 * len, 0.5);

  std::vector<double> basis(std::size_t(len) * std::max(m, 1));
  for (int t = 0; t < len; ++t)
    legendre_row((double(t) - half) / scale, m, basis.data() + std::size_t(t) * m);
  std::vector<double> gram(std::size_t(m) * m, 0.0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b <= a; ++b) {
      double acc = 0.0;
      for (int t = 0; t < len; ++t)
        acc += basis[std::size_t(t) * m + a] * basis[std::size_t(t) * m + b];
      gram[std::size_t(a) * m + b] = gram[std::size_t(b) * m + a] = acc;
    }
  if (m > 0) chol_factor(gram, m);

  for (const cplx* comp : comps) {
    std::vector<cplx> rhs(std::max(m, 1), cplx(0.0));
    for (int t = 0; t < len; ++t)
      for (int a = 0; a < m; ++a) rhs[a] += comp[window.start + t] * basis[std::size_t(t) * m + a];
    rhs.resize(m);
    if (m > 0) chol_solve(gram, m, rhs.data());
    out.comp_coeffs.push_back(std::move(rhs));
  }
  return out;
}

}  // namespace

cplx PolyCoeffs::eval(std::size_t c, int t) const {
  const auto& coef = comp_coeffs.at(c);
  if (coef.empty()) return 0.0;
  const double half = 0.5 * (window.len - 1);
  const double scale = std::max(0.5 * window.len, 0.5);
  const double u = (double(t - window.start) - half) / scale;
  std::vector<double> row(coef.size());
  legendre_row(u, int(coef.size()), row.data());
  cplx acc = 0.0;
  for (std::size_t a = 0; a < coef.size(); ++a) acc += coef[a] * row[a];
  return acc;
}

PolyCoeffs poly_project(const SampledSignal& h, const PolyWindow& window, int i) {
  return poly_project_impl(component_views(h), h.grid, window, i);
}

PolyCoeffs poly_project(const VectorSignal& h, const PolyWindow& window, int i) {
  if (h.comps.empty()) throw std::invalid_argument("poly_project: vector signal has no components");
  return poly_project_impl(component_views(h), h.grid, window, i);
}

MaximalProfile maximal_function(const SampledSignal& h, int i, double p, double s,
                                MaximalVariant variant) {
  return maximal_impl(component_views(h), h.grid, i, p, s, variant);
}

MaximalProfile maximal_function(const VectorSignal& h, int i, double p, double s,
                                MaximalVariant variant) {
  if (h.comps.empty()) throw std::invalid_argument("maximal_function: vector signal has no components");
  return maximal_impl(component_views(h), h.grid, i, p, s, variant);
}

double campanato_norm(const SampledSignal& h, int i, double p, double s) {
  return campanato_norm_impl(component_views(h), h.grid, i, p, s);
}

double campanato_norm(const VectorSignal& h, int i, double p, double s) {
  if (h.comps.empty()) throw std::invalid_argument("campanato_norm: vector signal has no components");
  return campanato_norm_impl(component_views(h), h.grid, i, p, s);
}

double bmo_norm(const SampledSignal& f) { return campanato_norm(f, 1, 2, 0.0); }

double lip_seminorm(const SampledSignal& f, double s) {
  if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("lip_seminorm: s must lie in (0, 1]");
  const auto& ops = kernels::active();
  const int n = f.grid.size;
  const double dx = f.grid.spacing();
  double best = 0.0;
  for (int d = 1; d <= n / 2; ++d) {
    const double diff = ops.max_abs_diff(f.values.data() + d, f.values.data(), std::size_t(n - d));
    best = std::max(best, diff / std::pow(double(d) * dx, s));
  }
  return best;
}

double diff_seminorm(const SampledSignal& f, int alpha, double s) {
  if (alpha < 1) throw std::invalid_argument("diff_seminorm: order alpha must be >= 1");
  if (!(s > 0.0 && s <= double(alpha)))
    throw std::invalid_argument("diff_seminorm: s must lie in (0, alpha]");
  const int n = f.grid.size;
  const double dx = f.grid.spacing();
  std::vector<double> binom(std::size_t(alpha) + 1);
  binom[0] = 1.0;
  for (int q = 1; q <= alpha; ++q) binom[q] = binom[q - 1] * double(alpha - q + 1) / double(q);
  double best = 0.0;
  for (int k = 1; 2 * alpha * k <= n; ++k) {
    double worst = 0.0;
    for (int j = 0; j + alpha * k < n; ++j) {
      cplx acc = 0.0;
      double sign = (alpha % 2 == 0) ? 1.0 : -1.0;
      for (int q = 0; q <= alpha; ++q) {
        acc += sign * binom[q] * f.values[std::size_t(j) + std::size_t(q) * k];
        sign = -sign;
      }
      worst = std::max(worst, std::abs(acc));
    }
    best = std::max(best, worst / std::pow(double(k) * dx, s));
  }
  return best;
}

PolyNormComparison poly_norm_comparison_check(const SampleGrid& grid, int i, int trials,
                                              std::uint64_t seed) {
  if (i < 1) throw std::invalid_argument("poly_norm_comparison_check: i must be >= 1");
  if (grid.size < 8) throw std::invalid_argument("poly_norm_comparison_check: grid too small");
  Rng rng(seed);
  PolyNormComparison out;
  int max_log = 0;
  while ((2 << max_log) <= grid.size / 2) ++max_log;  // lengths 2^{1..max_log}
  int min_log = 1;
  while ((1 << min_log) < i) ++min_log;  // outer window must hold i coefficients
  if (min_log > max_log)
    throw std::invalid_argument("poly_norm_comparison_check: grid too small for degree bound");

  for (int trial = 0; trial < trials; ++trial) {
    // Outer window Q1 and a random polynomial of degree < i on it.
    const int log1 = min_log + int(rng.raw() % std::uint64_t(max_log - min_log + 1));
    const int len1 = 1 << log1;
    const int start1 = int(rng.raw() % std::uint64_t(grid.size - len1 + 1));
    PolyCoeffs poly;
    poly.degree_bound = i;
    poly.window = {start1, len1};
    poly.comp_coeffs.push_back({});
    for (int a = 0; a < i; ++a) poly.comp_coeffs[0].push_back(rng.gauss_cplx());

    double sup1 = 0.0;
    for (int t = start1; t < start1 + len1; ++t)
      sup1 = std::max(sup1, std::abs(poly.eval(0, t)));

    // Inner window Q inside Q1.
    const int log2 = 1 + int(rng.raw() % std::uint64_t(log1));
    const int len2 = 1 << log2;
    const int start2 = start1 + int(rng.raw() % std::uint64_t(len1 - len2 + 1));
    double mean2 = 0.0;
    for (int t = start2; t < start2 + len2; ++t) mean2 += std::norm(poly.eval(0, t));
    mean2 /= double(len2);
    const double denom = std::pow(double(len1) / double(len2), i) * std::sqrt(mean2);
    if (denom > 1e-150)
      out.max_sup_ratio = std::max(out.max_sup_ratio, sup1 / denom);
    else
      ++out.skipped;

    // Nested-window projection difference on random data: window I inside 2I.
    if (2 * len1 <= grid.size) {
      SampledSignal h{grid, std::vector<cplx>(std::size_t(grid.size))};
      for (auto& v : h.values) v = rng.gauss_cplx();
      const int big_start = std::clamp(start1 - len1 / 2, 0, grid.size - 2 * len1);
      const PolyWindow small{start1, len1}, big{big_start, 2 * len1};
      const PolyCoeffs ps = poly_project(h, small, i);
      const PolyCoeffs pb = poly_project(h, big, i);
      double lhs = 0.0;
      for (int t = small.start; t < small.start + small.len; ++t)
        lhs += std::norm(pb.eval(0, t) - ps.eval(0, t));
      lhs = std::sqrt(lhs / double(small.len));
      double rhs = 0.0;
      for (int t = big.start; t < big.start + big.len; ++t)
        rhs += std::norm(h.values[std::size_t(t)] - pb.eval(0, t));
      rhs = std::sqrt(rhs / double(big.len));
      if (rhs > 1e-150)
        out.max_nested_ratio = std::max(out.max_nested_ratio, lhs / rhs);
      else
        ++out.skipped;
    }
  }
  return out;
}

}  // namespace lpk
