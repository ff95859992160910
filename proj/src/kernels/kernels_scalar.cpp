#include "lpk/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace lpk::kernels {
namespace {

double sumsq_scalar(const cplx* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    acc += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
  return acc;
}

double sumsq_diff_scalar(const cplx* a, const cplx* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double re = a[i].real() - b[i].real();
    double im = a[i].imag() - b[i].imag();
    acc += re * re + im * im;
  }
  return acc;
}

void mul_real_scalar(const cplx* a, const double* w, cplx* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] * w[i];
}

void fmadd_real_scalar(const cplx* a, const double* w, cplx* dst, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += a[i] * w[i];
}

void accum_sqmag_scalar(const cplx* a, double* acc, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i)
    acc[i] += a[i].real() * a[i].real() + a[i].imag() * a[i].imag();
}

WindowMoments window_moments_scalar(const cplx* h, std::size_t n, double anchor) {
  cplx s0{0.0, 0.0}, s1{0.0, 0.0};
  double q = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    s0 += h[t];
    s1 += h[t] * (double(t) - anchor);
    q += h[t].real() * h[t].real() + h[t].imag() * h[t].imag();
  }
  return {s0, s1, q};
}

double max_abs_diff_scalar(const cplx* a, const cplx* b, std::size_t n) {
  double m = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double re = a[i].real() - b[i].real();
    double im = a[i].imag() - b[i].imag();
    m = std::max(m, re * re + im * im);
  }
  return std::sqrt(m);
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops table{
      "scalar",          sumsq_scalar,       sumsq_diff_scalar,
      mul_real_scalar,   fmadd_real_scalar,  accum_sqmag_scalar,
      window_moments_scalar, max_abs_diff_scalar,
  };
  return table;
}

}  // namespace lpk::kernels
