#pragma once
// Uniform sample grid on the period-T torus, with the matching centered
// frequency grid {n/T : n in [-N/2, N/2)}.

#include <complex>
#include <cstdint>

namespace lpk {

using cplx = std::complex<double>;

struct SampleGrid {
  double period = 1.0;  // T
  int size = 0;         // N, a power of two

  double spacing() const { return period / size; }
  double sample(int j) const { return j * period / size; }
  // Frequency for centered index n in [-N/2, N/2).
  double freq(int n) const { return n / period; }
  double freq_spacing() const { return 1.0 / period; }
  int min_freq_index() const { return -size / 2; }
  int max_freq_index() const { return size / 2 - 1; }
  // Storage slot u in [0, N) for centered index n.
  int slot(int n) const { return n + size / 2; }
  int index_of_slot(int u) const { return u - size / 2; }
  double nyquist() const { return (size / 2) / period; }

  bool operator==(const SampleGrid&) const = default;
};

// Validates period > 0 and size a positive power of two.
SampleGrid make_grid(double period, int size);

bool is_pow2(int n);

}  // namespace lpk
