#include "lpk/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "lpk/fft.hpp"
#include "lpk/kernels.hpp"

namespace lpk {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

SampleGrid make_grid(double period, int size) {
  if (!(period > 0.0) || !std::isfinite(period))
    throw std::invalid_argument("make_grid: period must be positive and finite");
  if (!is_pow2(size)) throw std::invalid_argument("make_grid: size must be a positive power of two");
  return SampleGrid{period, size};
}

std::string ComponentKey::str() const {
  switch (kind) {
    case Kind::M:
      return "m=" + std::to_string(first);
    case Kind::MV:
      return "m=" + std::to_string(first) + ",v=" + std::to_string(second);
    case Kind::KJ:
      return "k=" + std::to_string(first) + ",j=" + std::to_string(second);
  }
  return "?";
}

namespace {
// Rotate between centered slot order (n = u - N/2 ascending) and the standard
// DFT index order (k = n mod N). The map u <-> (u + N/2) mod N is an
// involution for even N.
std::vector<cplx> half_rotate(const std::vector<cplx>& in) {
  const int n = int(in.size());
  std::vector<cplx> out(in.size());
  for (int u = 0; u < n; ++u) out[(u + n / 2) % n] = in[u];
  return out;
}
}  // namespace

Spectrum transform(const SampledSignal& f) {
  if (int(f.values.size()) != f.grid.size)
    throw std::invalid_argument("transform: value count does not match grid");
  std::vector<cplx> work = f.values;
  fft_pow2(work, -1);
  work = half_rotate(work);
  const double scale = f.grid.period / f.grid.size;
  for (auto& c : work) c *= scale;
  return Spectrum{f.grid, std::move(work)};
}

SampledSignal inverse(const Spectrum& spec) {
  if (int(spec.coeffs.size()) != spec.grid.size)
    throw std::invalid_argument("inverse: coefficient count does not match grid");
  std::vector<cplx> work = half_rotate(spec.coeffs);
  fft_pow2(work, +1);
  const double scale = 1.0 / spec.grid.period;
  for (auto& c : work) c *= scale;
  return SampledSignal{spec.grid, std::move(work)};
}

double norm_lp(const SampledSignal& f, double p) {
  if (!(p >= 1.0)) throw std::domain_error("norm_lp: requires p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (const auto& z : f.values) m = std::max(m, std::abs(z));
    return m;
  }
  const double w = f.grid.period / f.grid.size;
  if (p == 2.0) return std::sqrt(kernels::active().sumsq(f.values.data(), f.values.size()) * w);
  double acc = 0.0;
  for (const auto& z : f.values) acc += std::pow(std::abs(z), p);
  return std::pow(acc * w, 1.0 / p);
}

double norm_lp(const VectorSignal& f, double p) {
  if (!(p >= 1.0)) throw std::domain_error("norm_lp: requires p >= 1");
  for (const auto& [key, comp] : f.comps)
    if (!(comp.grid == f.grid)) throw std::invalid_argument("norm_lp: component grid mismatch");
  const int n = f.grid.size;
  std::vector<double> sq(n, 0.0);
  for (const auto& [key, comp] : f.comps)
    kernels::active().accum_sqmag(comp.values.data(), sq.data(), comp.values.size());
  const double w = f.grid.period / f.grid.size;
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : sq) m = std::max(m, v);
    return std::sqrt(m);
  }
  double acc = 0.0;
  for (double v : sq) acc += std::pow(v, p / 2.0);
  return std::pow(acc * w, 1.0 / p);
}

double norm_l2(const Spectrum& spec) {
  return std::sqrt(kernels::active().sumsq(spec.coeffs.data(), spec.coeffs.size()) / spec.grid.period);
}

std::uint64_t Rng::next_u64() {
  // splitmix64
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t Rng::raw() { return next_u64(); }

double Rng::uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gauss() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

cplx Rng::gauss_cplx() {
  double re = gauss();
  double im = gauss();
  return {re, im};
}

SampledSignal random_bandlimited(Rng& rng, const SampleGrid& grid, double band_lo,
                                 double band_hi, double decay) {
  if (!(band_lo <= band_hi)) throw std::invalid_argument("random_bandlimited: empty band");
  const int n_lo = std::max(grid.min_freq_index(), int(std::ceil(band_lo * grid.period - 1e-12)));
  const int n_hi = std::min(grid.max_freq_index(), int(std::floor(band_hi * grid.period + 1e-12)));
  if (n_lo > n_hi)
    throw std::domain_error("random_bandlimited: no grid frequency inside the band");

  Spectrum spec{grid, std::vector<cplx>(grid.size, cplx{0.0, 0.0})};
  if (std::isinf(decay)) {
    // Degenerate limit: all the mass at the in-band frequency closest to 0.
    int best = n_lo;
    for (int n = n_lo; n <= n_hi; ++n)
      if (std::abs(n) < std::abs(best)) best = n;
    spec.coeffs[grid.slot(best)] = cplx{grid.period, 0.0};  // exp(2 pi i best/T x)
    return inverse(spec);
  }
  for (int n = n_lo; n <= n_hi; ++n) {
    double mag = std::pow(1.0 + std::abs(double(n)), -decay);
    spec.coeffs[grid.slot(n)] = rng.gauss_cplx() * mag;
  }
  return inverse(spec);
}

SampledSignal pure_tone(const SampleGrid& grid, double freq) {
  SampledSignal f{grid, std::vector<cplx>(grid.size)};
  for (int j = 0; j < grid.size; ++j) {
    double ang = 2.0 * std::numbers::pi * freq * grid.sample(j);
    f.values[j] = cplx{std::cos(ang), std::sin(ang)};
  }
  return f;
}

}  // namespace lpk
