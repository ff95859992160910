#pragma once
// Hot inner loops behind a runtime-dispatched table: a scalar reference
// implementation and an AVX2 variant selected once per process. The two are
// equivalence-tested; reductions may differ by summation order only.
//
// Environment override: LPK_KERNELS=scalar|avx2 pins the choice (avx2 throws
// if the CPU lacks support).

#include <complex>
#include <cstddef>

namespace lpk::kernels {

using cplx = std::complex<double>;

struct WindowMoments {
  cplx s0;    // sum h_t
  cplx s1;    // sum h_t * (t - anchor)
  double q;   // sum |h_t|^2
};

struct Ops {
  const char* name;
  // sum |a_i|^2
  double (*sumsq)(const cplx* a, std::size_t n);
  // sum |a_i - b_i|^2
  double (*sumsq_diff)(const cplx* a, const cplx* b, std::size_t n);
  // dst_i = a_i * w_i  (complex by real)
  void (*mul_real)(const cplx* a, const double* w, cplx* dst, std::size_t n);
  // dst_i += a_i * w_i
  void (*fmadd_real)(const cplx* a, const double* w, cplx* dst, std::size_t n);
  // acc_i += |a_i|^2
  void (*accum_sqmag)(const cplx* a, double* acc, std::size_t n);
  // Moments of one window: t runs over [0, n), anchor in the same coordinate.
  WindowMoments (*window_moments)(const cplx* h, std::size_t n, double anchor);
  // max_i |a_i - b_i|
  double (*max_abs_diff)(const cplx* a, const cplx* b, std::size_t n);
};

const Ops& scalar_ops();
bool avx2_available();
const Ops& avx2_ops();  // throws std::runtime_error when unsupported
const Ops& active();    // resolved once, honoring LPK_KERNELS

}  // namespace lpk::kernels
