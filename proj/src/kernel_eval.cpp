#include "lpk/kernel_eval.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "lpk/signal.hpp"

namespace lpk {

namespace {

// Barycentric weights for 16 equispaced nodes: (-1)^k C(15, k).
constexpr double kBary16[16] = {1.0,     -15.0,   105.0,   -455.0, 1365.0, -3003.0,
                                5005.0,  -6435.0, 6435.0,  -5005.0, 3003.0, -1365.0,
                                455.0,   -105.0,  15.0,    -1.0};

bool is_pow2_ll(long long x) { return x > 0 && (x & (x - 1)) == 0; }

}  // namespace

BandlimitedKernel::BandlimitedKernel(MultiplierProfile profile, double half_range,
                                     int samples_per_unit)
    : profile_(std::move(profile)), half_range_(half_range), samples_per_unit_(samples_per_unit) {
  if (!(half_range_ > 0.0)) throw std::invalid_argument("BandlimitedKernel: half_range must be > 0");
  if (samples_per_unit_ < 1)
    throw std::invalid_argument("BandlimitedKernel: samples_per_unit must be >= 1");
  const double count_exact = 2.0 * half_range_ * samples_per_unit_;
  const long long count = std::llround(count_exact);
  if (double(count) != count_exact || !is_pow2_ll(count) || count < 64)
    throw std::invalid_argument(
        "BandlimitedKernel: 2 * half_range * samples_per_unit must be a power of two >= 64");
  count_ = int(count);
  const double nyq = 0.5 * samples_per_unit_;
  if (!(profile_.support_lo > -nyq && profile_.support_hi < nyq))
    throw std::invalid_argument(
        "BandlimitedKernel: profile support [" + std::to_string(profile_.support_lo) + ", " +
        std::to_string(profile_.support_hi) + "] must sit inside (-" + std::to_string(nyq) +
        ", " + std::to_string(nyq) + "); raise samples_per_unit");
}

const std::vector<cplx>& BandlimitedKernel::table(int order) const {
  if (order < 0 || order > kMaxDeriv)
    throw std::invalid_argument("BandlimitedKernel: derivative order " + std::to_string(order) +
                                " outside [0, " + std::to_string(kMaxDeriv) + "]");
  auto& tab = tables_[order];
  if (!tab.empty()) return tab;

  const SampleGrid grid = make_grid(2.0 * half_range_, count_);
  Spectrum spec{grid, std::vector<cplx>(std::size_t(count_), cplx{0.0, 0.0})};
  for (int n = grid.min_freq_index(); n <= grid.max_freq_index(); ++n) {
    const double xi = grid.freq(n);
    const double p = profile_(xi);
    if (p == 0.0) continue;
    cplx factor = p;
    for (int d = 0; d < order; ++d) factor *= cplx{0.0, 2.0 * std::numbers::pi * xi};
    spec.coeffs[std::size_t(grid.slot(n))] = factor;
  }
  const SampledSignal synth = inverse(spec);
  // Reorder so tab[i] holds K(t_i), t_i = -half_range + i / samples_per_unit.
  tab.resize(std::size_t(count_));
  for (int i = 0; i < count_; ++i)
    tab[std::size_t(i)] = synth.values[std::size_t((i + count_ / 2) % count_)];
  // The wrap sample of the periodic synthesis (t = -half_range) is where the
  // periodization and transform roundoff from both tails pile up, orders of
  // magnitude above the interior noise floor.  The kernel itself is far below
  // double precision there (the range is sized for that), so 0 is the faithful
  // value.
  tab[0] = cplx{0.0, 0.0};
  return tab;
}

cplx BandlimitedKernel::deriv(int order, double t) const {
  const auto& tab = table(order);
  const double x = (t + half_range_) * samples_per_unit_;
  // Open interval: the endpoint samples of the periodic synthesis are not
  // trustworthy (see table()), and the kernel is below precision there anyway.
  if (!(x > 0.0) || !(x < double(count_))) return cplx{0.0, 0.0};
  int j0 = int(std::floor(x)) - 7;
  j0 = std::max(0, std::min(j0, count_ - 16));
  const double r = x - double(j0);
  cplx num{0.0, 0.0};
  double den = 0.0;
  for (int k = 0; k < 16; ++k) {
    const double d = r - double(k);
    if (std::abs(d) < 1e-12) return tab[std::size_t(j0 + k)];
    const double c = kBary16[k] / d;
    num += c * tab[std::size_t(j0 + k)];
    den += c;
  }
  return num / den;
}

double BandlimitedKernel::edge_level(int order) const {
  const auto& tab = table(order);
  double peak = 0.0;
  const int edge = std::min(32, count_ / 2);
  for (int i = 0; i < edge; ++i) {
    peak = std::max(peak, std::abs(tab[std::size_t(i)]));
    peak = std::max(peak, std::abs(tab[std::size_t(count_ - 1 - i)]));
  }
  return peak;
}

TimeKernels build_time_kernels(double A) {
  // Ranges sized so the true kernel at the table edge sits below the double
  // roundoff floor (stretched-exponential envelopes: e^{-0.75 sqrt(u)},
  // e^{-4.35 sqrt(u)}, e^{-3.55 sqrt(u)} respectively); the balance of the
  // sample budget goes to oversampling, which keeps the per-sample carrier
  // phase small enough that the 16-point interpolation error is at machine
  // level rather than the ~(phase/2)^16 mid-cell floor.
  return TimeKernels{
      BandlimitedKernel(build_theta_hat(A), 2048.0, 128),
      BandlimitedKernel(build_phi_hat(), 128.0, 1024),
      BandlimitedKernel(build_psi_tilde(), 256.0, 128),
  };
}

}  // namespace lpk
