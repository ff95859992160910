#include "lpk/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "lpk/kernels.hpp"

namespace lpk {
namespace {

constexpr double kEdgeEps = 1e-9;  // snap tolerance for band-edge grid hits

struct SlotRange {
  int lo = 0, hi = -1;  // inclusive slots; empty when lo > hi
  bool empty() const { return lo > hi; }
};

// Slots whose absolute frequency n/T + carrier lies inside [lo, hi].
SlotRange slots_in_band(const SampleGrid& grid, double carrier, double lo, double hi) {
  const double T = grid.period;
  int n_lo = int(std::ceil((lo - carrier) * T - kEdgeEps));
  int n_hi = int(std::floor((hi - carrier) * T + kEdgeEps));
  n_lo = std::max(n_lo, grid.min_freq_index());
  n_hi = std::min(n_hi, grid.max_freq_index());
  return {grid.slot(n_lo), grid.slot(n_hi)};
}

// dst_n (+)= P(n/T + carrier) * src_n over the profile's active slots.
void apply_profile(const SampleGrid& grid, const MultiplierProfile& prof, double carrier,
                   const std::vector<cplx>& src, std::vector<cplx>& dst, bool accumulate) {
  SlotRange r = slots_in_band(grid, carrier, prof.support_lo, prof.support_hi);
  if (r.empty()) return;
  const int count = r.hi - r.lo + 1;
  std::vector<double> w(count);
  for (int u = r.lo; u <= r.hi; ++u)
    w[u - r.lo] = prof(grid.freq(grid.index_of_slot(u)) + carrier);
  const auto& ops = kernels::active();
  if (accumulate)
    ops.fmadd_real(src.data() + r.lo, w.data(), dst.data() + r.lo, count);
  else
    ops.mul_real(src.data() + r.lo, w.data(), dst.data() + r.lo, count);
}

SampledSignal apply_phase(SampledSignal f, double offset) {
  if (offset == 0.0) return f;
  for (int j = 0; j < f.grid.size; ++j) {
    double ang = 2.0 * std::numbers::pi * offset * f.grid.sample(j);
    f.values[j] *= cplx{std::cos(ang), std::sin(ang)};
  }
  return f;
}

}  // namespace

SampledSignal materialize_component(const SampleGrid& grid, const SpectralComponent& comp) {
  SampledSignal base = inverse(Spectrum{grid, comp.coeffs});
  return apply_phase(std::move(base), comp.offset);
}

VectorSignal materialize(const SpectralBank& bank) {
  VectorSignal out{bank.grid, {}};
  out.comps.reserve(bank.comps.size());
  for (const auto& comp : bank.comps)
    out.comps.emplace_back(comp.key, materialize_component(bank.grid, comp));
  return out;
}

double bank_l2_norm(const SpectralBank& bank) {
  double acc = 0.0;
  for (const auto& comp : bank.comps)
    acc += kernels::active().sumsq(comp.coeffs.data(), comp.coeffs.size());
  return std::sqrt(acc / bank.grid.period);
}

std::optional<std::pair<double, double>> spectral_support(const SampleGrid& grid,
                                                          const SpectralComponent& comp) {
  int lo = -1, hi = -1;
  for (int u = 0; u < grid.size; ++u) {
    if (comp.coeffs[u] != cplx{0.0, 0.0}) {
      if (lo < 0) lo = u;
      hi = u;
    }
  }
  if (lo < 0) return std::nullopt;
  return std::make_pair(grid.freq(grid.index_of_slot(lo)) + comp.offset,
                        grid.freq(grid.index_of_slot(hi)) + comp.offset);
}

SampledSignal reflect_time(const SampledSignal& f) {
  const int n = f.grid.size;
  SampledSignal out{f.grid, std::vector<cplx>(n)};
  for (int j = 0; j < n; ++j) out.values[j] = f.values[(n - j) % n];
  return out;
}

Spectrum reflect_spectrum(const Spectrum& spec) {
  const int n = spec.grid.size;
  Spectrum out{spec.grid, std::vector<cplx>(n)};
  // Centered index n maps to -n; the unpaired index -N/2 stays put
  // (frequencies are mod N/T on the torus).
  out.coeffs[0] = spec.coeffs[0];
  for (int u = 1; u < n; ++u) out.coeffs[u] = spec.coeffs[n - u];
  return out;
}

SampledSignal sharp_projection(const SampledSignal& f, const Interval& band) {
  if (!(band.b >= band.a)) throw std::invalid_argument("sharp_projection: empty band");
  Spectrum spec = transform(f);
  SlotRange r = slots_in_band(f.grid, 0.0, band.a, band.b);
  Spectrum cut{f.grid, std::vector<cplx>(f.grid.size, cplx{0.0, 0.0})};
  for (int u = r.lo; u <= r.hi && !r.empty(); ++u) cut.coeffs[u] = spec.coeffs[u];
  return inverse(cut);
}

const OperatorProfiles& default_profiles() {
  static const OperatorProfiles p = [] {
    BumpPair pair = build_bump_pair();
    return OperatorProfiles{pair.psi1, pair.psi2, build_psi_tilde(), build_phi_hat()};
  }();
  return p;
}

namespace {

// Largest v with A^v <= x (log + integer fixup).
int floor_log_a(double x, double A) {
  int v = int(std::floor(std::log(x) / std::log(A)));
  while (std::pow(A, v) > x) --v;
  while (std::pow(A, v + 1) <= x) ++v;
  return v;
}

// sum_{v in [nu, n_m]} theta_hat(zeta / A^v); at most two scales are active
// at any zeta > 0.
double truncated_scale_sum(const MultiplierProfile& theta, double zeta, double A, int nu,
                           int n_m) {
  if (!(zeta > 0.0)) return 0.0;
  const int v_hi = floor_log_a(zeta, A) + 1;  // A^{v-1} <= zeta requires v <= v_hi
  double acc = 0.0;
  for (int v = v_hi; v >= nu; --v) {
    if (v > n_m) continue;
    double w = theta(zeta / std::pow(A, v));
    if (w == 0.0 && v < v_hi - 1) break;  // below the active scale window
    acc += w;
  }
  return acc;
}

SpectralBank apply_S1(const SampledSignal& f, const IntervalFamily& family,
                      std::optional<int> nu, double A, const OperatorProfiles& profiles) {
  const Spectrum spec = transform(f);
  const SampleGrid& grid = f.grid;
  SpectralBank bank{grid, {}};
  MultiplierProfile theta = build_theta_hat(A);

  for (std::size_t m = 0; m < family.intervals.size(); ++m) {
    const Interval& iv = family.intervals[m];
    SpectralComponent comp{ComponentKey::m(int(m)), -iv.a,
                           std::vector<cplx>(grid.size, cplx{0.0, 0.0})};
    MultiplierProfile psi1m = shift_scale(profiles.psi1, iv.a, iv.len());
    apply_profile(grid, psi1m, 0.0, spec.coeffs, comp.coeffs, false);
    if (nu.has_value()) {
      const int n_m = n_index(iv.len(), A);
      SlotRange r = slots_in_band(grid, 0.0, psi1m.support_lo, psi1m.support_hi);
      for (int u = r.lo; u <= r.hi && !r.empty(); ++u) {
        double zeta = grid.freq(grid.index_of_slot(u)) - iv.a;
        comp.coeffs[u] *= truncated_scale_sum(theta, zeta, A, *nu, n_m);
      }
    }
    bank.comps.push_back(std::move(comp));
  }
  return bank;
}

}  // namespace

SpectralBank apply_S(const SampledSignal& f, const IntervalFamily& family, int sigma,
                     std::optional<int> nu, double A, const OperatorProfiles& profiles) {
  validate_family(family);
  if (sigma == 1) return apply_S1(f, family, nu, A, profiles);
  if (sigma != 2) throw std::invalid_argument("apply_S: sigma must be 1 or 2");

  // sigma = 2: reflect, run the sigma = 1 machinery on the mirrored family,
  // reflect back. Component m becomes exp(-2 pi i b_m x)(f^ psi^2_m)^v.
  SpectralBank mirrored = apply_S1(reflect_time(f), mirror_family(family), nu, A, profiles);
  SpectralBank bank{f.grid, {}};
  for (auto& comp : mirrored.comps) {
    Spectrum refl = reflect_spectrum(Spectrum{f.grid, std::move(comp.coeffs)});
    bank.comps.push_back(
        SpectralComponent{comp.key, -comp.offset, std::move(refl.coeffs)});
  }
  return bank;
}

SpectralBank rf_operator_H(const SampledSignal& f, const std::vector<DyadicInterval>& a_set,
                           const OperatorProfiles& profiles) {
  // Admissibility: pairwise disjoint (open) J's, origin excluded.
  std::vector<DyadicInterval> sorted = a_set;
  std::sort(sorted.begin(), sorted.end(),
            [](const DyadicInterval& x, const DyadicInterval& y) { return x.left() < y.left(); });
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i].left() <= 0.0 && sorted[i].right() >= 0.0)
      throw std::invalid_argument("rf_operator_H: some J contains the origin");
    if (i > 0 && sorted[i - 1].right() > sorted[i].left())
      throw std::invalid_argument("rf_operator_H: the J's are not pairwise disjoint");
  }

  const Spectrum spec = transform(f);
  SpectralBank bank{f.grid, {}};
  for (const auto& J : a_set) {
    SpectralComponent comp{ComponentKey::kj(J.k, int(J.j)), -J.left(),
                           std::vector<cplx>(f.grid.size, cplx{0.0, 0.0})};
    MultiplierProfile phik = dilate_pow2(profiles.phi_hat, J.k);
    apply_profile(f.grid, phik, -J.left(), spec.coeffs, comp.coeffs, false);
    bank.comps.push_back(std::move(comp));
  }
  return bank;
}

SpectralBank g_components(const SampledSignal& f, const Cover& cover,
                          const OperatorProfiles& profiles) {
  if (!(f.grid == cover.grid)) throw std::invalid_argument("g_components: grid mismatch");
  const Spectrum spec = transform(f);
  SpectralBank bank{f.grid, {}};
  bank.comps.reserve(cover.rows.size());
  for (const auto& row : cover.rows) {
    SpectralComponent comp{ComponentKey::mv(row.m, row.v), -row.a_mv,
                           std::vector<cplx>(f.grid.size, cplx{0.0, 0.0})};
    MultiplierProfile phik = dilate_pow2(profiles.phi_hat, row.k);
    apply_profile(f.grid, phik, -row.a_mv, spec.coeffs, comp.coeffs, false);
    bank.comps.push_back(std::move(comp));
  }
  return bank;
}

SpectralBank phi_bank(const SpectralBank& g, const Cover& cover,
                      const OperatorProfiles& profiles) {
  if (!(g.grid == cover.grid)) throw std::invalid_argument("phi_bank: grid mismatch");
  if (g.comps.size() != cover.rows.size())
    throw std::invalid_argument("phi_bank: component count does not match cover rows");
  SpectralBank bank{g.grid, {}};
  bank.comps.reserve(g.comps.size());
  for (std::size_t i = 0; i < g.comps.size(); ++i) {
    const CoverRow& row = cover.rows[i];
    const SpectralComponent& in = g.comps[i];
    if (!(in.key == ComponentKey::mv(row.m, row.v)))
      throw std::invalid_argument("phi_bank: component keys out of step with cover rows");
    const double l = cover.interval(row.m).len();
    MultiplierProfile mult = scale_profile(profiles.psi_tilde, l);
    // Multiplier argument is the absolute frequency shifted by +delta:
    // psi_tilde((xi + delta)/l) at xi = n/T + offset.
    SpectralComponent comp{in.key, in.offset, std::vector<cplx>(g.grid.size, cplx{0.0, 0.0})};
    apply_profile(g.grid, mult, in.offset + row.delta, in.coeffs, comp.coeffs, false);
    bank.comps.push_back(std::move(comp));
  }
  return bank;
}

SpectralBank merge_R(const SpectralBank& h, const Cover& cover, std::optional<int> nu,
                     const OperatorProfiles& profiles) {
  (void)profiles;
  if (!(h.grid == cover.grid)) throw std::invalid_argument("merge_R: grid mismatch");
  if (h.comps.size() != cover.rows.size())
    throw std::invalid_argument("merge_R: component count does not match cover rows");
  const SampleGrid& grid = h.grid;
  MultiplierProfile theta = build_theta_hat(cover.A);

  SpectralBank bank{grid, {}};
  const int m_count = int(cover.family.intervals.size());
  for (int m = 0; m < m_count; ++m)
    bank.comps.push_back(SpectralComponent{ComponentKey::m(m), -cover.interval(m).a,
                                           std::vector<cplx>(grid.size, cplx{0.0, 0.0})});

  std::vector<bool> has_offset(m_count, false);
  std::vector<double> merged_offset(m_count, 0.0);
  std::vector<cplx> term(grid.size);
  for (std::size_t i = 0; i < h.comps.size(); ++i) {
    const CoverRow& row = cover.rows[i];
    const SpectralComponent& in = h.comps[i];
    if (!(in.key == ComponentKey::mv(row.m, row.v)))
      throw std::invalid_argument("merge_R: component keys out of step with cover rows");
    if (nu.has_value() && row.v < *nu) continue;

    // Modulation by delta then theta_v filtering: coefficient n picks up
    // theta_hat((n/T + offset + delta) / A^v).
    const double carrier = in.offset + row.delta;
    MultiplierProfile theta_v = scale_profile(theta, std::pow(cover.A, row.v));
    SlotRange r = slots_in_band(grid, carrier, theta_v.support_lo, theta_v.support_hi);
    if (r.empty()) continue;
    std::fill(term.begin(), term.end(), cplx{0.0, 0.0});
    apply_profile(grid, theta_v, carrier, in.coeffs, term, false);

    bool nonzero = false;
    for (int u = r.lo; u <= r.hi; ++u)
      if (term[u] != cplx{0.0, 0.0}) {
        nonzero = true;
        break;
      }
    if (!nonzero) continue;
    auto& dst = bank.comps[row.m];
    if (!has_offset[row.m]) {
      has_offset[row.m] = true;
      merged_offset[row.m] = carrier;
      dst.offset = carrier;
    } else if (std::abs(carrier - merged_offset[row.m]) > 1e-9) {
      std::ostringstream os;
      os << "merge_R: component (m=" << row.m << ", v=" << row.v
         << ") lands on offset " << carrier << " but earlier terms used "
         << merged_offset[row.m];
      throw std::invalid_argument(os.str());
    }
    for (int u = r.lo; u <= r.hi; ++u) dst.coeffs[u] += term[u];
  }
  return bank;
}

DecompResult decomposition_residual(const SampledSignal& f, const Cover& cover, int nu,
                                    const OperatorProfiles& profiles) {
  SpectralBank lhs = apply_S(f, cover.family, 1, nu, cover.A, profiles);
  SpectralBank rhs = merge_R(phi_bank(g_components(f, cover, profiles), cover, profiles),
                             cover, nu, profiles);
  if (lhs.comps.size() != rhs.comps.size())
    throw std::logic_error("decomposition_residual: component count mismatch");

  const auto& ops = kernels::active();
  double acc = 0.0;
  for (std::size_t m = 0; m < lhs.comps.size(); ++m) {
    const auto& a = lhs.comps[m];
    const auto& b = rhs.comps[m];
    if (std::abs(a.offset - b.offset) > 1e-9) {
      // A merged component that stayed identically zero keeps its default
      // offset; distance is still well-defined through the coefficients.
      bool b_zero = std::all_of(b.coeffs.begin(), b.coeffs.end(),
                                [](cplx z) { return z == cplx{0.0, 0.0}; });
      if (!b_zero) throw std::logic_error("decomposition_residual: offset mismatch");
    }
    acc += ops.sumsq_diff(a.coeffs.data(), b.coeffs.data(), a.coeffs.size());
  }
  DecompResult res;
  res.f_norm = norm_lp(f, 2.0);
  res.lhs_norm = bank_l2_norm(lhs);
  res.rhs_norm = bank_l2_norm(rhs);
  res.residual = std::sqrt(acc / f.grid.period) / (res.f_norm > 0.0 ? res.f_norm : 1.0);
  return res;
}

}  // namespace lpk
