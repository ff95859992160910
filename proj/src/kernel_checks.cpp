#include "lpk/kernel_checks.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "lpk/signal.hpp"
#include "lpk/stats.hpp"

namespace lpk {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double ipow(double x, int n) {
  double acc = 1.0;
  for (int q = 0; q < n; ++q) acc *= x;
  return acc;
}

std::vector<double> interior_points(double half_span, int count) {
  std::vector<double> pts;
  if (count <= 1) {
    pts.push_back(half_span);
    return pts;
  }
  pts.reserve(std::size_t(count));
  for (int q = 0; q < count; ++q)
    pts.push_back(-half_span + 2.0 * half_span * double(q) / double(count - 1));
  return pts;
}

void check_dists(const std::vector<double>& dists) {
  if (dists.empty()) throw std::invalid_argument("remainder check: empty distance list");
  for (double d : dists)
    if (!(d > 1.0))
      throw std::invalid_argument(
          "remainder check: distances are in units of the interval length and must exceed 1 "
          "(outside the doubled interval)");
}

}  // namespace

cplx ScaledKernel::deriv(int order, double t) const {
  // d^q/dt^q [ exp(-2 pi i delta t) * c K(c t) ] by the Leibniz rule.
  const cplx mod_rate{0.0, -kTwoPi * modulation};
  cplx acc{0.0, 0.0};
  double binom = 1.0;
  cplx mod_pow{1.0, 0.0};
  for (int j = 0; j <= order; ++j) {
    const int g = order - j;
    acc += binom * mod_pow * ipow(scale, g + 1) * base->deriv(g, scale * t);
    binom *= double(order - j) / double(j + 1);
    mod_pow *= mod_rate;
  }
  if (modulation != 0.0) {
    const double ang = -kTwoPi * modulation * t;
    acc *= cplx{std::cos(ang), std::sin(ang)};
  }
  return acc;
}

cplx ScaledKernel::taylor(int degree, double u, double t) const {
  cplx acc{0.0, 0.0};
  double fact = 1.0;
  const double dt = t - u;
  double dt_pow = 1.0;
  for (int q = 0; q <= degree; ++q) {
    acc += deriv(q, u) * (dt_pow / fact);
    dt_pow *= dt;
    fact *= double(q + 1);
  }
  return acc;
}

cplx ScaledKernel::remainder(int degree, double u, double t) const {
  return value(t) - taylor(degree, u, t);
}

ScaleRemainderReport scale_family_remainder(const BandlimitedKernel& theta, double A, int r,
                                            double interval_len,
                                            const std::vector<double>& dists, int x_samples,
                                            double t_frac) {
  if (!(A > 1.0)) throw std::invalid_argument("scale_family_remainder: requires A > 1");
  if (r < 1 || r - 1 > BandlimitedKernel::kMaxDeriv)
    throw std::invalid_argument("scale_family_remainder: r outside table-backed range");
  if (!(interval_len > 0.0)) throw std::invalid_argument("scale_family_remainder: bad interval");
  if (!(t_frac > 0.0 && t_frac <= 1.0))
    throw std::invalid_argument("scale_family_remainder: t_frac must lie in (0, 1]");
  check_dists(dists);

  const double L = interval_len;
  const double ln_a = std::log(A);
  const std::vector<double> xs = interior_points(0.5 * t_frac * L, x_samples);

  ScaleRemainderReport rep;
  rep.r = r;
  rep.A = A;
  rep.interval_len = L;

  const int consec_limit = 30;
  const double rel_floor = 1e-15;

  for (double dist : dists) {
    for (int sign : {+1, -1}) {
      const double tau = sign * dist * L;
      const double adist = dist * L;
      const double predicted = -std::log(adist) / ln_a;
      const int v_center = int(std::lround(predicted));
      // Regime margins: a factor of 2 in A^v on each side of the crossover.
      const double regime_margin = std::log(2.0) / ln_a;

      std::vector<double> acc_sq(xs.size(), 0.0);
      double run_max = 0.0;
      int peak_v = v_center;
      int v_lo = v_center, v_hi = v_center;

      auto probe = [&](int v) {
        const double scale_v = std::pow(A, v);
        const ScaledKernel kern{&theta, scale_v, 0.0};
        // Regime constants are only meaningful while (a) the remainder still
        // has significant digits -- past that, dividing roundoff by the
        // vanishing regime envelope inflates them without bound -- and (b)
        // every scaled argument stays inside the trusted part of the kernel
        // table, away from its noise-floor edge zone.  The evaluation is
        // reliable to roughly eleven digits, so seven orders below the sweep
        // peak still leaves real headroom.
        const double noise_gate = 1e-7 * run_max;
        const bool args_tabled =
            scale_v * (adist + 0.5 * t_frac * L) < 0.95 * theta.half_range();
        double term_max = 0.0;
        for (std::size_t ix = 0; ix < xs.size(); ++ix) {
          const double x = xs[ix];
          const double e = std::abs(kern.remainder(r - 1, -tau, x - tau));
          acc_sq[ix] += e * e;
          term_max = std::max(term_max, e);
          if (x != 0.0 && e > noise_gate && args_tabled) {
            const double xr = ipow(std::abs(x), r);
            if (double(v) < predicted - regime_margin)
              rep.max_near_const =
                  std::max(rep.max_near_const, e / (std::pow(A, double(v) * (r + 1)) * xr));
            if (double(v) > predicted + regime_margin)
              rep.max_far_const =
                  std::max(rep.max_far_const, e * std::pow(A, v) * ipow(adist, r + 2) / xr);
          }
        }
        if (term_max > run_max) {
          run_max = term_max;
          peak_v = v;
        }
        return term_max;
      };

      for (int dir : {+1, -1}) {
        int consec = 0;
        for (int v = (dir > 0) ? v_center : v_center - 1;; v += dir) {
          const double t = probe(v);
          if (dir > 0)
            v_hi = v;
          else
            v_lo = v;
          consec = (t < rel_floor * run_max) ? consec + 1 : 0;
          if (consec >= consec_limit) break;
        }
      }

      ScaleRemainderRow row;
      row.dist = adist;
      for (double a2 : acc_sq) row.l2_error = std::max(row.l2_error, std::sqrt(a2));
      row.bound_ratio = row.l2_error * ipow(adist, r + 1) / ipow(L, r);
      row.peak_v = peak_v;
      row.predicted_peak = predicted;
      row.v_lo = v_lo;
      row.v_hi = v_hi;
      rep.rows.push_back(row);
      rep.max_bound_ratio = std::max(rep.max_bound_ratio, row.bound_ratio);
      rep.max_peak_offset =
          std::max(rep.max_peak_offset, std::abs(double(peak_v) - predicted) * ln_a);
    }
  }
  return rep;
}

UniformityReport modulated_family_uniformity(const BandlimitedKernel& psi_tilde, int r,
                                             double interval_len,
                                             const std::vector<double>& lengths,
                                             const std::vector<double>& delta_fracs,
                                             const std::vector<double>& dists, int tau_samples,
                                             double t_frac) {
  if (r < 1 || r - 1 > BandlimitedKernel::kMaxDeriv)
    throw std::invalid_argument("modulated_family_uniformity: r outside table-backed range");
  if (!(interval_len > 0.0) || lengths.empty() || delta_fracs.empty())
    throw std::invalid_argument("modulated_family_uniformity: bad sweep");
  if (!(t_frac > 0.0 && t_frac <= 1.0))
    throw std::invalid_argument("modulated_family_uniformity: t_frac must lie in (0, 1]");
  check_dists(dists);
  for (double f : delta_fracs)
    if (!(f >= 0.0 && f <= 1.0))
      throw std::invalid_argument("modulated_family_uniformity: delta fractions lie in [0, 1]");

  const double L = interval_len;
  const std::vector<double> taus = interior_points(0.5 * t_frac * L, tau_samples);

  UniformityReport rep;
  rep.r = r;
  rep.interval_len = L;
  for (double len : lengths) {
    if (!(len > 0.0)) throw std::invalid_argument("modulated_family_uniformity: lengths must be > 0");
    for (double frac : delta_fracs) {
      const ScaledKernel kern{&psi_tilde, len, frac * len};
      double constant = 0.0;
      for (double dist : dists) {
        for (int sign : {+1, -1}) {
          const double t = sign * dist * L;
          for (double tau : taus) {
            const double e = std::abs(kern.remainder(r - 1, -t, tau - t));
            constant = std::max(constant, e * ipow(dist * L, r + 1) / ipow(L, r));
          }
        }
      }
      rep.cells.push_back(UniformityCell{len, frac, constant});
    }
  }
  rep.min_constant = rep.cells.front().constant;
  rep.max_constant = rep.cells.front().constant;
  for (const auto& c : rep.cells) {
    rep.min_constant = std::min(rep.min_constant, c.constant);
    rep.max_constant = std::max(rep.max_constant, c.constant);
  }
  rep.uniformity = (rep.min_constant > 0.0) ? rep.max_constant / rep.min_constant
                                            : std::numeric_limits<double>::infinity();
  return rep;
}

std::vector<DyadicInterval> dyadic_ladder(int k_lo, int k_hi, double start) {
  if (k_lo > k_hi) throw std::invalid_argument("dyadic_ladder: k_lo must be <= k_hi");
  if (!(start > 0.0)) throw std::invalid_argument("dyadic_ladder: start must be > 0");
  std::vector<DyadicInterval> out;
  double cur = start;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double step = std::ldexp(1.0, k);
    const long long j = (long long)(std::ceil(cur / step));
    DyadicInterval J{k, j};
    out.push_back(J);
    cur = J.right();
  }
  return out;
}

AnnulusDecayReport dyadic_family_decay(const BandlimitedKernel& phi,
                                       const std::vector<DyadicInterval>& a_set, int r,
                                       double interval_len, int sigma_lo, int sigma_hi,
                                       int xi_trials, std::uint64_t seed, double t_frac) {
  if (r < 1 || r - 1 > BandlimitedKernel::kMaxDeriv)
    throw std::invalid_argument("dyadic_family_decay: r outside table-backed range");
  if (sigma_lo < 1 || sigma_hi < sigma_lo)
    throw std::invalid_argument("dyadic_family_decay: need 1 <= sigma_lo <= sigma_hi");
  if (a_set.empty() || xi_trials < 1)
    throw std::invalid_argument("dyadic_family_decay: need components and xi trials");
  if (!(interval_len > 0.0)) throw std::invalid_argument("dyadic_family_decay: bad interval");
  if (!(t_frac > 0.0 && t_frac <= 1.0))
    throw std::invalid_argument("dyadic_family_decay: t_frac must lie in (0, 1]");

  const double L = interval_len;
  const std::vector<double> ts = interior_points(0.5 * t_frac * L, 3);
  const std::vector<double> sup_ts = interior_points(0.5 * t_frac * L, 5);
  const Quadrature gl = gauss_legendre(96);
  Rng rng(seed);

  // Group the modulated components by dyadic scale.
  std::map<int, std::vector<std::pair<double, std::size_t>>> by_k;  // k -> (j 2^k, flat idx)
  for (std::size_t idx = 0; idx < a_set.size(); ++idx)
    by_k[a_set[idx].k].push_back({a_set[idx].left(), idx});

  // Random unit weight vectors, fixed across sigma so the decay is of one
  // functional. Scale-basis vectors are handled separately below.
  std::vector<std::vector<cplx>> xis;
  xis.resize(std::size_t(xi_trials));
  for (auto& xi : xis) {
    xi.resize(a_set.size());
    double nrm = 0.0;
    for (auto& z : xi) {
      z = rng.gauss_cplx();
      nrm += std::norm(z);
    }
    nrm = std::sqrt(nrm);
    for (auto& z : xi) z /= nrm;
  }

  AnnulusDecayReport rep;
  rep.r = r;
  rep.interval_len = L;
  rep.t_frac = t_frac;
  int k_lo_union = 0, k_hi_union = 0;
  bool have_window = false;

  for (int sigma = sigma_lo; sigma <= sigma_hi; ++sigma) {
    // Panels of length L covering the annulus [2^{sigma-1} L, 2^sigma L) on
    // each side.
    const int panels = 1 << (sigma - 1);
    const double inner = std::ldexp(L, sigma - 1);
    std::vector<double> nodes, weights;  // positive side; mirrored below
    nodes.reserve(std::size_t(panels) * gl.nodes.size());
    weights.reserve(nodes.capacity());
    for (int pnl = 0; pnl < panels; ++pnl) {
      const double a = inner + L * pnl, b = a + L;
      const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
      for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
        nodes.push_back(mid + half * gl.nodes[q]);
        weights.push_back(half * gl.weights[q]);
      }
    }
    const double outer = std::ldexp(L, sigma);

    // Sup over the annulus, sampled densely enough to resolve the kernel's
    // carrier oscillation at this dyadic level.
    auto gamma_at = [&](int k) {
      const ScaledKernel kern{&phi, std::ldexp(1.0, k), 0.0};
      const double span = outer - inner;
      const double osc = std::ldexp(1.0, -k - 3);
      const int n = std::clamp(int(std::ceil(span / std::min(osc, span / 64.0))), 64, 4096);
      double worst = 0.0;
      for (int q = 0; q <= n; ++q) {
        const double ay = inner + span * double(q) / double(n);
        for (int sign : {+1, -1}) {
          const double y = sign * ay;
          for (double t : sup_ts)
            worst = std::max(worst, std::abs(kern.remainder(r - 1, -y, t - y)));
        }
      }
      return worst;
    };

    // Adaptive window around the crossover scale 2^k ~ 2^{-sigma}/L. Hard
    // caps bound the walk: far scales die super-polynomially within a few
    // octaves, and past the kernel-table range only roundoff remains, which
    // grows like 2^k and would otherwise keep the expansion alive.
    const int k_center = int(std::lround(-std::log2(L) - sigma));
    double gamma_sum = 0.0, gamma_max = 0.0;
    int klo = k_center, khi = k_center;
    for (int dir : {+1, -1}) {
      const int hard_stop = k_center + dir * ((dir > 0) ? 16 : 48);
      int consec = 0;
      for (int k = (dir > 0) ? k_center : k_center - 1; dir * (k - hard_stop) <= 0; k += dir) {
        const double g = gamma_at(k);
        gamma_sum += g;
        gamma_max = std::max(gamma_max, g);
        if (dir > 0)
          khi = k;
        else
          klo = k;
        consec = (g < 1e-13 * gamma_max) ? consec + 1 : 0;
        if (consec >= 8) break;
      }
    }
    if (!have_window) {
      k_lo_union = klo;
      k_hi_union = khi;
      have_window = true;
    } else {
      k_lo_union = std::min(k_lo_union, klo);
      k_hi_union = std::max(k_hi_union, khi);
    }

    // Vector-valued annulus L^2 remainder, worst over weight vectors and t.
    // Each node evaluates the per-scale remainders once; they feed both the
    // random weight vectors and the per-scale basis vectors (for which the
    // modulation phases drop out, so one norm per distinct scale suffices).
    double lhs_worst = 0.0;
    std::vector<cplx> ek(by_k.size());
    std::vector<double> basis_acc(by_k.size());
    std::vector<double> rand_acc(xis.size());
    for (double t : ts) {
      std::fill(basis_acc.begin(), basis_acc.end(), 0.0);
      std::fill(rand_acc.begin(), rand_acc.end(), 0.0);
      for (std::size_t q = 0; q < nodes.size(); ++q) {
        for (int sign : {+1, -1}) {
          const double y = sign * nodes[q];
          std::size_t kk = 0;
          for (const auto& [k, elems] : by_k) {
            const ScaledKernel kern{&phi, std::ldexp(1.0, k), 0.0};
            ek[kk] = kern.remainder(r - 1, -y, t - y);
            basis_acc[kk] += weights[q] * std::norm(ek[kk]);
            ++kk;
          }
          for (std::size_t xq = 0; xq < xis.size(); ++xq) {
            cplx f{0.0, 0.0};
            kk = 0;
            for (const auto& [k, elems] : by_k) {
              if (ek[kk] != cplx{0.0, 0.0}) {
                cplx s{0.0, 0.0};
                for (const auto& [left, idx] : elems) {
                  const double ang = -kTwoPi * left * y;
                  s += xis[xq][idx] * cplx{std::cos(ang), std::sin(ang)};
                }
                f += ek[kk] * s;
              }
              ++kk;
            }
            rand_acc[xq] += weights[q] * std::norm(f);
          }
        }
      }
      for (double acc : basis_acc) lhs_worst = std::max(lhs_worst, std::sqrt(acc));
      for (double acc : rand_acc) lhs_worst = std::max(lhs_worst, std::sqrt(acc));
    }

    rep.rows.push_back(AnnulusRow{sigma, gamma_sum, lhs_worst, false});
  }

  rep.k_lo = k_lo_union;
  rep.k_hi = k_hi_union;

  // Roundoff-floor flags, then the regression protocol: middle range (drop
  // the first and last sigma) when enough points remain.
  double gmax = 0.0, lmax = 0.0;
  for (const auto& row : rep.rows) {
    gmax = std::max(gmax, row.gamma_sum);
    lmax = std::max(lmax, row.lhs_l2);
  }
  for (auto& row : rep.rows)
    row.at_floor =
        !(row.gamma_sum > 1e-13 * gmax) || !(row.lhs_l2 > 1e-13 * lmax);

  auto fit_range = [&](bool middle) {
    std::vector<double> sx, gy, ly;
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      if (rep.rows[i].at_floor) continue;
      if (middle && rep.rows.size() >= 4 && (i == 0 || i + 1 == rep.rows.size())) continue;
      sx.push_back(double(rep.rows[i].sigma));
      gy.push_back(std::log2(rep.rows[i].gamma_sum));
      ly.push_back(std::log2(rep.rows[i].lhs_l2));
    }
    struct Pair {
      LinearFit g, l;
      int lo, hi;
    };
    if (sx.size() < 2) return Pair{{}, {}, 0, 0};
    return Pair{linear_fit(sx, gy), linear_fit(sx, ly), int(sx.front()), int(sx.back())};
  };
  const auto mid = fit_range(true);
  const auto full = fit_range(false);
  rep.fit_lo = mid.lo;
  rep.fit_hi = mid.hi;
  rep.gamma_slope = mid.g.slope;
  rep.gamma_r2 = mid.g.r2;
  rep.lhs_slope = mid.l.slope;
  rep.lhs_r2 = mid.l.r2;
  rep.gamma_slope_full = full.g.slope;
  rep.lhs_slope_full = full.l.slope;
  return rep;
}

}  // namespace lpk
