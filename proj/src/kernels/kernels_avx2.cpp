// AVX2 + FMA variants of the kernel table. This translation unit is the only
// one compiled with -mavx2 -mfma; callers reach it through dispatch.

#include "lpk/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <algorithm>
#include <cmath>

namespace lpk::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

// [w0, w1] -> [w0, w0, w1, w1] so one real weight covers re and im lanes.
inline __m256d dup_weights(const double* w) {
  __m128d lo = _mm_loadu_pd(w);
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(lo), 0x50);
}

double sumsq_avx2(const cplx* a, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(a);
  std::size_t len = 2 * n;
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= len; i += 8) {
    __m256d v0 = _mm256_loadu_pd(p + i);
    __m256d v1 = _mm256_loadu_pd(p + i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < len; ++i) acc += p[i] * p[i];
  return acc;
}

double sumsq_diff_avx2(const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  std::size_t len = 2 * n;
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(pa + i), _mm256_loadu_pd(pb + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double s = hsum(acc);
  for (; i < len; ++i) {
    double d = pa[i] - pb[i];
    s += d * d;
  }
  return s;
}

void mul_real_avx2(const cplx* a, const double* w, cplx* dst, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  double* pd = reinterpret_cast<double*>(dst);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(pa + 2 * i);
    _mm256_storeu_pd(pd + 2 * i, _mm256_mul_pd(v, dup_weights(w + i)));
  }
  for (; i < n; ++i) dst[i] = a[i] * w[i];
}

void fmadd_real_avx2(const cplx* a, const double* w, cplx* dst, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  double* pd = reinterpret_cast<double*>(dst);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(pa + 2 * i);
    __m256d d = _mm256_loadu_pd(pd + 2 * i);
    _mm256_storeu_pd(pd + 2 * i, _mm256_fmadd_pd(v, dup_weights(w + i), d));
  }
  for (; i < n; ++i) dst[i] += a[i] * w[i];
}

void accum_sqmag_avx2(const cplx* a, double* acc, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v0 = _mm256_loadu_pd(pa + 2 * i);      // re0 im0 re1 im1
    __m256d v1 = _mm256_loadu_pd(pa + 2 * i + 4);  // re2 im2 re3 im3
    __m256d h = _mm256_hadd_pd(_mm256_mul_pd(v0, v0), _mm256_mul_pd(v1, v1));
    // hadd lane order is [z0, z2, z1, z3]; restore ascending order.
    h = _mm256_permute4x64_pd(h, 0xD8);
    _mm256_storeu_pd(acc + i, _mm256_add_pd(_mm256_loadu_pd(acc + i), h));
  }
  for (; i < n; ++i)
    acc[i] += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
}

WindowMoments window_moments_avx2(const cplx* h, std::size_t n, double anchor) {
  const double* p = reinterpret_cast<const double*>(h);
  __m256d s0 = _mm256_setzero_pd();
  __m256d s1 = _mm256_setzero_pd();
  __m256d q = _mm256_setzero_pd();
  __m256d t = _mm256_setr_pd(-anchor, -anchor, 1.0 - anchor, 1.0 - anchor);
  const __m256d step = _mm256_set1_pd(2.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(p + 2 * i);
    s0 = _mm256_add_pd(s0, v);
    s1 = _mm256_fmadd_pd(v, t, s1);
    q = _mm256_fmadd_pd(v, v, q);
    t = _mm256_add_pd(t, step);
  }
  alignas(32) double b0[4], b1[4];
  _mm256_store_pd(b0, s0);
  _mm256_store_pd(b1, s1);
  WindowMoments m{{b0[0] + b0[2], b0[1] + b0[3]}, {b1[0] + b1[2], b1[1] + b1[3]}, hsum(q)};
  for (; i < n; ++i) {
    m.s0 += h[i];
    m.s1 += h[i] * (double(i) - anchor);
    m.q += h[i].real() * h[i].real() + h[i].imag() * h[i].imag();
  }
  return m;
}

double max_abs_diff_avx2(const cplx* a, const cplx* b, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  __m256d best = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(pa + 2 * i), _mm256_loadu_pd(pb + 2 * i));
    __m256d sq = _mm256_mul_pd(d, d);
    best = _mm256_max_pd(best, _mm256_add_pd(sq, _mm256_permute_pd(sq, 0x5)));
  }
  alignas(32) double buf[4];
  _mm256_store_pd(buf, best);
  double m = std::max(std::max(buf[0], buf[1]), std::max(buf[2], buf[3]));
  for (; i < n; ++i) {
    double re = a[i].real() - b[i].real();
    double im = a[i].imag() - b[i].imag();
    m = std::max(m, re * re + im * im);
  }
  return std::sqrt(m);
}

}  // namespace

const Ops& avx2_ops() {
  static const Ops table{
      "avx2",          sumsq_avx2,       sumsq_diff_avx2,
      mul_real_avx2,   fmadd_real_avx2,  accum_sqmag_avx2,
      window_moments_avx2, max_abs_diff_avx2,
  };
  return table;
}

}  // namespace lpk::kernels

#endif  // x86_64
