#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lpk::oracles {

Spectrum dft_direct(const SampledSignal& f) {
  const int n = f.grid.size;
  Spectrum out{f.grid, std::vector<cplx>(std::size_t(n), cplx{0.0, 0.0})};
  const double w = f.grid.period / n;
  for (int k = f.grid.min_freq_index(); k <= f.grid.max_freq_index(); ++k) {
    cplx acc{0.0, 0.0};
    for (int j = 0; j < n; ++j) {
      const double ang = -2.0 * std::numbers::pi * double(k) * double(j) / double(n);
      acc += f.values[std::size_t(j)] * cplx{std::cos(ang), std::sin(ang)};
    }
    out.coeffs[std::size_t(f.grid.slot(k))] = acc * w;
  }
  return out;
}

SampledSignal idft_direct(const Spectrum& spec) {
  const int n = spec.grid.size;
  SampledSignal out{spec.grid, std::vector<cplx>(std::size_t(n), cplx{0.0, 0.0})};
  for (int j = 0; j < n; ++j) {
    cplx acc{0.0, 0.0};
    for (int k = spec.grid.min_freq_index(); k <= spec.grid.max_freq_index(); ++k) {
      const double ang = 2.0 * std::numbers::pi * double(k) * double(j) / double(n);
      acc += spec.coeffs[std::size_t(spec.grid.slot(k))] * cplx{std::cos(ang), std::sin(ang)};
    }
    out.values[std::size_t(j)] = acc / spec.grid.period;
  }
  return out;
}

SampledSignal multiplier_direct(const SampledSignal& f,
                                const std::function<double(double)>& mult) {
  Spectrum sp = dft_direct(f);
  for (int k = f.grid.min_freq_index(); k <= f.grid.max_freq_index(); ++k)
    sp.coeffs[std::size_t(f.grid.slot(k))] *= mult(f.grid.freq(k));
  return idft_direct(sp);
}

std::vector<cplx> poly_fit_monomial(const SampledSignal& h, const PolyWindow& w, int i) {
  if (w.len < 1 || w.start < 0 || w.start + w.len > h.grid.size)
    throw std::invalid_argument("oracle: window outside grid");
  const int m = i;
  if (m == 0) return {};
  const double half = 0.5 * (w.len - 1);
  const double scale = std::max(0.5 * w.len, 0.5);

  // Normal equations G c = r in the monomial basis.
  std::vector<double> g(std::size_t(m) * m, 0.0);
  std::vector<cplx> r(std::size_t(m), cplx{0.0, 0.0});
  for (int t = 0; t < w.len; ++t) {
    const double u = (double(t) - half) / scale;
    std::vector<double> pw(std::size_t(m), 1.0);
    for (int a = 1; a < m; ++a) pw[std::size_t(a)] = pw[std::size_t(a - 1)] * u;
    for (int a = 0; a < m; ++a) {
      r[std::size_t(a)] += h.values[std::size_t(w.start + t)] * pw[std::size_t(a)];
      for (int b = 0; b < m; ++b) g[std::size_t(a) * m + b] += pw[std::size_t(a)] * pw[std::size_t(b)];
    }
  }

  // Gaussian elimination with partial pivoting on [G | r].
  std::vector<cplx> sol = r;
  for (int col = 0; col < m; ++col) {
    int piv = col;
    for (int row = col + 1; row < m; ++row)
      if (std::abs(g[std::size_t(row) * m + col]) > std::abs(g[std::size_t(piv) * m + col]))
        piv = row;
    if (g[std::size_t(piv) * m + col] == 0.0)
      throw std::domain_error("oracle: singular normal equations");
    if (piv != col) {
      for (int b = 0; b < m; ++b)
        std::swap(g[std::size_t(piv) * m + b], g[std::size_t(col) * m + b]);
      std::swap(sol[std::size_t(piv)], sol[std::size_t(col)]);
    }
    for (int row = col + 1; row < m; ++row) {
      const double fac = g[std::size_t(row) * m + col] / g[std::size_t(col) * m + col];
      for (int b = col; b < m; ++b)
        g[std::size_t(row) * m + b] -= fac * g[std::size_t(col) * m + b];
      sol[std::size_t(row)] -= fac * sol[std::size_t(col)];
    }
  }
  for (int col = m - 1; col >= 0; --col) {
    cplx acc = sol[std::size_t(col)];
    for (int b = col + 1; b < m; ++b) acc -= g[std::size_t(col) * m + b] * sol[std::size_t(b)];
    sol[std::size_t(col)] = acc / g[std::size_t(col) * m + col];
  }
  return sol;
}

cplx poly_eval_monomial(const std::vector<cplx>& coef, const PolyWindow& w, int t) {
  const double half = 0.5 * (w.len - 1);
  const double scale = std::max(0.5 * w.len, 0.5);
  const double u = (double(t - w.start) - half) / scale;
  cplx acc{0.0, 0.0};
  double pw = 1.0;
  for (const cplx& c : coef) {
    acc += c * pw;
    pw *= u;
  }
  return acc;
}

double window_oscillation(const SampledSignal& h, const PolyWindow& w, int i, double p,
                          double s) {
  const std::vector<cplx> coef = poly_fit_monomial(h, w, i);
  double acc = 0.0;
  for (int t = 0; t < w.len; ++t) {
    const cplx diff =
        h.values[std::size_t(w.start + t)] - poly_eval_monomial(coef, w, w.start + t);
    acc += std::pow(std::abs(diff), p);
  }
  const double meanp = acc / double(w.len);
  const double q_size = double(w.len) * h.grid.spacing();
  return std::pow(q_size, -s) * std::pow(meanp, 1.0 / p);
}

std::vector<double> brute_maximal(const SampledSignal& h, int i, double p, double s,
                                  MaximalVariant variant) {
  const int n = h.grid.size;
  std::vector<double> out(std::size_t(n), 0.0);
  for (int len = 2; len <= n / 2; len *= 2) {
    if (len <= i) continue;  // matches the library: such windows oscillate exactly 0
    for (int pos = 0; pos + len <= n; ++pos) {
      const double v = window_oscillation(h, PolyWindow{pos, len}, i, p, s);
      if (variant == MaximalVariant::Centered) {
        const int idx = pos + len / 2;
        out[std::size_t(idx)] = std::max(out[std::size_t(idx)], v);
      } else {
        for (int idx = pos; idx < pos + len; ++idx)
          out[std::size_t(idx)] = std::max(out[std::size_t(idx)], v);
      }
    }
  }
  return out;
}

double brute_campanato_norm(const SampledSignal& h, int i, double p, double s) {
  const int n = h.grid.size;
  double best = 0.0;
  for (int len = 2; len <= n / 2; len *= 2) {
    if (len <= i) continue;
    for (int pos = 0; pos + len <= n; ++pos)
      best = std::max(best, window_oscillation(h, PolyWindow{pos, len}, i, p, s));
  }
  return best;
}

}  // namespace lpk::oracles
