#pragma once
// Smooth compactly supported frequency-domain profiles built from the
// exp(-1/t) step. All values lie in [0,1]; evaluation is exactly 0 outside
// the declared (closed) support interval, and plateau regions return exactly
// 1.0 so telescoping identities cancel to roundoff.

#include <functional>
#include <limits>

namespace lpk {

// s(t) = b(t) / (b(t) + b(1-t)),  b(t) = exp(-1/t) for t > 0, else 0.
// Monotone 0 -> 1 across [0, 1], C^infinity, s(t) + s(1-t) = 1.
double smooth_step(double t);

struct MultiplierProfile {
  double support_lo = 0.0;
  double support_hi = 0.0;  // closed support [lo, hi]
  std::function<double(double)> eval_inside;

  double operator()(double xi) const {
    if (!(xi >= support_lo) || !(xi <= support_hi)) return 0.0;
    return eval_inside(xi);
  }
};

struct BumpPair {
  MultiplierProfile psi1;  // support [0, 2/3], == 1 near 0
  MultiplierProfile psi2;  // support [1/3, 1], == 1 near 1
};

// psi2(xi)^... : psi2(xi) = s(3 xi - 1) on [0,1]; psi1 = 1 - psi2 there.
// psi1 + psi2 == 1 on [0,1]; psi2(xi) = psi1(1 - xi).
BumpPair build_bump_pair();

// Interval-adapted multiplier: sigma = 1 anchors at the left endpoint a
// (support [a, a + 2l/3]); sigma = 2 anchors at the right endpoint b
// (support [a + l/3, b]). psi_sigma_m(xi) = psi_sigma((xi - a) / l).
MultiplierProfile psi_sigma_m(int sigma, double a, double b);

// theta_hat(xi) = s(log_A xi + 1) - s(log_A xi), support [1/A, A],
// theta_hat(1) = 1. The dilates theta_hat(xi / A^v) are supported on
// [A^{v-1}, A^{v+1}] and telescope: sum_v theta_hat(xi/A^v) = 1 on (0, inf).
MultiplierProfile build_theta_hat(double A);

// phi_hat: s(xi) on [0,1], exactly 1 on [1,7], s(8-xi) on [7,8]; support [0,8].
MultiplierProfile build_phi_hat();

// psi_tilde: equals psi1 on [0,1] (0 beyond 1), and s(3 xi + 2) on [-2/3, 0]
// (so == 1 on [-1/3, 0], smooth descent on [-2/3, -1/3]); support [-2/3, 1].
MultiplierProfile build_psi_tilde();

// Affine images: dilate_pow2(k): xi -> base(xi / 2^k); scale(l): xi -> base(xi / l);
// shift_scale(a, l): xi -> base((xi - a) / l); all transform the support
// accordingly (l > 0).
MultiplierProfile dilate_pow2(const MultiplierProfile& base, int k);
MultiplierProfile scale_profile(const MultiplierProfile& base, double l);
MultiplierProfile shift_scale(const MultiplierProfile& base, double a, double l);

}  // namespace lpk
