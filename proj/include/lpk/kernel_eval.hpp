#pragma once
// Time-domain kernels of compactly supported frequency multipliers.
//
// K_d(t) = integral P(xi) (2 pi i xi)^d exp(2 pi i xi t) dxi is synthesized
// once per derivative order onto an oversampled uniform table (dense inverse
// DFT, so the table actually holds the periodization of K_d with period
// 2 * half_range; edge_level() reports the leftover magnitude at the table
// boundary, which bounds that aliasing). Point evaluation is 16-point
// equispaced Lagrange interpolation in barycentric form; |t| > half_range
// evaluates to 0 (truncation, bounded by edge_level).

#include <array>
#include <vector>

#include "lpk/grid.hpp"
#include "lpk/profiles.hpp"

namespace lpk {

class BandlimitedKernel {
 public:
  static constexpr int kMaxDeriv = 3;

  // count = 2 * half_range * samples_per_unit must be a power of two >= 64,
  // and the profile support must sit strictly inside the frequency window
  // (-samples_per_unit/2, samples_per_unit/2) so the synthesis is alias-free.
  BandlimitedKernel(MultiplierProfile profile, double half_range, int samples_per_unit);

  cplx value(double t) const { return deriv(0, t); }
  cplx deriv(int order, double t) const;

  double half_range() const { return half_range_; }
  double spacing() const { return 1.0 / samples_per_unit_; }
  const MultiplierProfile& profile() const { return profile_; }

  // Max magnitude over the outermost 32 table entries on each side: an
  // empirical bound for both the periodization error and the values dropped
  // by truncating at |t| = half_range.
  double edge_level(int order) const;

 private:
  const std::vector<cplx>& table(int order) const;  // built lazily per order

  MultiplierProfile profile_;
  double half_range_ = 0.0;
  int samples_per_unit_ = 0;
  int count_ = 0;
  mutable std::array<std::vector<cplx>, kMaxDeriv + 1> tables_;
};

// The three base kernels of the decomposition machinery, at unit scale.
// Dilates are evaluated through the scaling relation: the multiplier
// P(xi / c) has kernel c * K(c t), and d/dt^d gives c^{d+1} K_d(c t).
struct TimeKernels {
  BandlimitedKernel theta;      // build_theta_hat(A)
  BandlimitedKernel phi;        // build_phi_hat()
  BandlimitedKernel psi_tilde;  // build_psi_tilde()
};

TimeKernels build_time_kernels(double A = 1.03);

}  // namespace lpk
