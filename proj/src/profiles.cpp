#include "lpk/profiles.hpp"

#include <cmath>
#include <stdexcept>

namespace lpk {

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double bt = std::exp(-1.0 / t);
  const double bc = std::exp(-1.0 / (1.0 - t));
  return bt / (bt + bc);
}

BumpPair build_bump_pair() {
  MultiplierProfile psi2{1.0 / 3.0, 1.0, [](double xi) { return smooth_step(3.0 * xi - 1.0); }};
  MultiplierProfile psi1{0.0, 2.0 / 3.0,
                         [](double xi) { return 1.0 - smooth_step(3.0 * xi - 1.0); }};
  return {psi1, psi2};
}

MultiplierProfile psi_sigma_m(int sigma, double a, double b) {
  if (!(b > a)) throw std::invalid_argument("psi_sigma_m: requires b > a");
  if (sigma != 1 && sigma != 2) throw std::invalid_argument("psi_sigma_m: sigma must be 1 or 2");
  BumpPair pair = build_bump_pair();
  return shift_scale(sigma == 1 ? pair.psi1 : pair.psi2, a, b - a);
}

MultiplierProfile build_theta_hat(double A) {
  if (!(A > 1.0)) throw std::invalid_argument("build_theta_hat: requires A > 1");
  const double inv_ln_a = 1.0 / std::log(A);
  MultiplierProfile out;
  out.support_lo = 1.0 / A;
  out.support_hi = A;
  out.eval_inside = [inv_ln_a](double xi) {
    if (xi <= 0.0) return 0.0;
    const double tau = std::log(xi) * inv_ln_a;
    return smooth_step(tau + 1.0) - smooth_step(tau);
  };
  return out;
}

MultiplierProfile build_phi_hat() {
  MultiplierProfile out;
  out.support_lo = 0.0;
  out.support_hi = 8.0;
  out.eval_inside = [](double xi) {
    if (xi < 1.0) return smooth_step(xi);
    if (xi <= 7.0) return 1.0;
    return smooth_step(8.0 - xi);
  };
  return out;
}

MultiplierProfile build_psi_tilde() {
  BumpPair pair = build_bump_pair();
  MultiplierProfile psi1 = pair.psi1;
  MultiplierProfile out;
  out.support_lo = -2.0 / 3.0;
  out.support_hi = 1.0;
  out.eval_inside = [psi1](double xi) {
    if (xi >= 0.0) return psi1(xi);
    return smooth_step(3.0 * xi + 2.0);
  };
  return out;
}

MultiplierProfile dilate_pow2(const MultiplierProfile& base, int k) {
  return scale_profile(base, std::ldexp(1.0, k));
}

MultiplierProfile scale_profile(const MultiplierProfile& base, double l) {
  if (!(l > 0.0)) throw std::invalid_argument("scale_profile: requires l > 0");
  MultiplierProfile out;
  out.support_lo = base.support_lo * l;
  out.support_hi = base.support_hi * l;
  out.eval_inside = [base, l](double xi) { return base(xi / l); };
  return out;
}

MultiplierProfile shift_scale(const MultiplierProfile& base, double a, double l) {
  if (!(l > 0.0)) throw std::invalid_argument("shift_scale: requires l > 0");
  MultiplierProfile out;
  out.support_lo = a + base.support_lo * l;
  out.support_hi = a + base.support_hi * l;
  out.eval_inside = [base, a, l](double xi) { return base((xi - a) / l); };
  return out;
}

}  // namespace lpk
