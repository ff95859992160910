#pragma once
// Smoothed projection operators and the decomposition/merging pipeline.
//
// Every component is carried as a modulated spectrum: a grid spectrum c_n
// together with a real frequency offset w, representing
//   comp(x) = exp(2 pi i w x) * (1/T) sum_n c_n exp(2 pi i (n/T) x).
// Modulation by exp(2 pi i a x) is exact offset arithmetic (w += a), and a
// convolution whose transform is a profile P multiplies c_n by P(n/T + w) --
// so the chain modulate -> convolve -> demodulate never snaps a real shift
// to the grid. Materializing to samples costs one inverse FFT plus a phase.

#include <optional>
#include <utility>
#include <vector>

#include "lpk/cover.hpp"
#include "lpk/grid.hpp"
#include "lpk/profiles.hpp"
#include "lpk/signal.hpp"

namespace lpk {

struct SpectralComponent {
  ComponentKey key;
  double offset = 0.0;
  std::vector<cplx> coeffs;  // centered slots, see Spectrum
};

struct SpectralBank {
  SampleGrid grid;
  std::vector<SpectralComponent> comps;
};

// Time-domain view (inverse FFT + phase per component).
VectorSignal materialize(const SpectralBank& bank);
SampledSignal materialize_component(const SampleGrid& grid, const SpectralComponent& comp);

// L^2(l^2) norm of a bank via Parseval (offsets carry unit modulus).
double bank_l2_norm(const SpectralBank& bank);

// Frequency support [lo, hi] of the nonzero coefficients, offset included.
// Returns nullopt for an identically zero component.
std::optional<std::pair<double, double>> spectral_support(const SampleGrid& grid,
                                                          const SpectralComponent& comp);

// f(-x) by index reversal (exact on the torus grid).
SampledSignal reflect_time(const SampledSignal& f);
Spectrum reflect_spectrum(const Spectrum& spec);

// Sharp frequency cut: multiply the spectrum by the indicator of [a, b],
// endpoints included.
SampledSignal sharp_projection(const SampledSignal& f, const Interval& band);

// Profile bundle used by the operators; tests substitute corrupted variants.
struct OperatorProfiles {
  MultiplierProfile psi1;
  MultiplierProfile psi2;
  MultiplierProfile psi_tilde;
  MultiplierProfile phi_hat;
};
const OperatorProfiles& default_profiles();

// Smoothed projection family S^sigma: component m is
//   sigma=1:  exp(-2 pi i a_m x) (f^ psi^1_m)^v   (spectrum in [0, l_m])
//   sigma=2:  exp(-2 pi i b_m x) (f^ psi^2_m)^v   (spectrum in [-l_m, 0])
// sigma=2 is computed by reflecting f, running the sigma=1 path on the
// mirrored family, and reflecting back; its multiplier is therefore the
// mirror image of profiles.psi1 (identical to psi2 for the default pair,
// which satisfies psi2(xi) = psi1(1 - xi) exactly). profiles.psi2 itself is
// consulted only by direct-multiplier oracles. With nu given, psi^sigma_m is
// multiplied by the truncated telescoping sum over scales v in [nu, N_m].
SpectralBank apply_S(const SampledSignal& f, const IntervalFamily& family, int sigma,
                     std::optional<int> nu = std::nullopt, double A = 1.03,
                     const OperatorProfiles& profiles = default_profiles());

// Auxiliary square family H over admissible dyadic pairs: component (k, j) is
// phi_k * (exp(-2 pi i j 2^k x) f). Requires the J_{k,j} pairwise disjoint
// and origin-free.
SpectralBank rf_operator_H(const SampledSignal& f, const std::vector<DyadicInterval>& a_set,
                           const OperatorProfiles& profiles = default_profiles());

// Localized pieces g_{m,v}: spectrum phi_hat_k(xi - a_{m,v}) f^(xi), keyed
// (m, v), offset -a_{m,v}. One H-component per cover row.
SpectralBank g_components(const SampledSignal& f, const Cover& cover,
                          const OperatorProfiles& profiles = default_profiles());

// Componentwise convolution whose multiplier is psi_tilde((xi + delta)/l_m).
SpectralBank phi_bank(const SpectralBank& g, const Cover& cover,
                      const OperatorProfiles& profiles = default_profiles());

// Merging operator R: component m sums over rows v >= nu (all rows when
// nu is absent) of theta_v-filtered, delta-remodulated inputs. Nonzero terms
// of one component must land on a common offset (checked to 1e-9).
SpectralBank merge_R(const SpectralBank& h, const Cover& cover,
                     std::optional<int> nu = std::nullopt,
                     const OperatorProfiles& profiles = default_profiles());

struct DecompResult {
  double residual = 0.0;       // L^2(l^2) distance / ||f||_2
  double f_norm = 0.0;
  double lhs_norm = 0.0;
  double rhs_norm = 0.0;
};

// Residual of the exact decomposition identity at truncation nu:
// apply_S(f, ., 1, nu) versus merge_R(phi_bank(g_components(f))) with the
// v-sum truncated at nu.
DecompResult decomposition_residual(const SampledSignal& f, const Cover& cover, int nu,
                                    const OperatorProfiles& profiles = default_profiles());

}  // namespace lpk
