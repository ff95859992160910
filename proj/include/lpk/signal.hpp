#pragma once
// Sampled signals on the torus, their discrete spectra, and vector-valued
// (componentwise keyed) signals.
//
// Transform convention, for centered frequency index n in [-N/2, N/2):
//   coeff(n) = (T/N) * sum_j value(j) exp(-2 pi i n j / N)
//   value(j) = (1/T) * sum_n coeff(n) exp(+2 pi i n j / N)
// so that sum_j |value|^2 (T/N) = sum_n |coeff|^2 (1/T)  (Parseval).

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lpk/grid.hpp"

namespace lpk {

struct SampledSignal {
  SampleGrid grid;
  std::vector<cplx> values;  // values[j] = f(x_j)
};

struct Spectrum {
  SampleGrid grid;
  std::vector<cplx> coeffs;  // coeffs[grid.slot(n)] = coeff(n)
};

Spectrum transform(const SampledSignal& f);
SampledSignal inverse(const Spectrum& spec);

// Key for one component of a vector-valued signal: a single interval index m,
// a cover pair (m, v), or a dyadic pair (k, j).
struct ComponentKey {
  enum class Kind { M, MV, KJ } kind = Kind::M;
  int first = 0;
  int second = 0;

  static ComponentKey m(int m) { return {Kind::M, m, 0}; }
  static ComponentKey mv(int m, int v) { return {Kind::MV, m, v}; }
  static ComponentKey kj(int k, int j) { return {Kind::KJ, k, j}; }
  std::string str() const;
  bool operator==(const ComponentKey&) const = default;
};

struct VectorSignal {
  SampleGrid grid;
  std::vector<std::pair<ComponentKey, SampledSignal>> comps;
};

// L^p norms with the Riemann weight T/N; p = inf -> max magnitude.
// For VectorSignal the pointwise magnitude is the l^2 norm across components.
// Requires p >= 1.
double norm_lp(const SampledSignal& f, double p);
double norm_lp(const VectorSignal& f, double p);

// L^2 norm straight from a spectrum (Parseval).
double norm_l2(const Spectrum& spec);

// Deterministic RNG: splitmix64 + hand-rolled Box-Muller so streams are
// identical across platforms and standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  double gauss();                         // standard normal
  cplx gauss_cplx();                      // independent N(0,1) re/im
  std::uint64_t raw();

 private:
  std::uint64_t next_u64();
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Random band-limited signal: spectrum supported on grid frequencies inside
// [band_lo, band_hi], independent complex Gaussian coefficients with
// magnitude envelope (1+|n|)^-decay. decay = inf degenerates to the single
// in-band frequency of smallest |n| with unit amplitude (a pure tone).
// Throws std::domain_error when no grid frequency lies in the band.
SampledSignal random_bandlimited(Rng& rng, const SampleGrid& grid,
                                 double band_lo, double band_hi, double decay);

// f(x_j) = exp(2 pi i freq x_j); freq need not be a grid frequency.
SampledSignal pure_tone(const SampleGrid& grid, double freq);

}  // namespace lpk
