#pragma once
// Iterative radix-2 FFT, unscaled. Sizes are powers of two; twiddle tables
// are cached per size.

#include <complex>
#include <vector>

namespace lpk {

// In-place transform of a power-of-two-length array:
//   sign = -1:  X[k] = sum_j x[j] exp(-2 pi i k j / N)
//   sign = +1:  X[k] = sum_j x[j] exp(+2 pi i k j / N)
// No normalization is applied in either direction.
void fft_pow2(std::vector<std::complex<double>>& data, int sign);

}  // namespace lpk
