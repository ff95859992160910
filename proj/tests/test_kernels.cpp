// Runtime-dispatched inner loops: the scalar table against naive reference
// loops, and the AVX2 table against the scalar one on awkward lengths.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include "lpk/kernels.hpp"
#include "lpk/signal.hpp"

using namespace lpk;
using kernels::Ops;
using kernels::WindowMoments;

namespace {

const std::vector<std::size_t> kSizes = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 33, 64, 100};

struct Data {
  std::vector<cplx> a, b;
  std::vector<double> w;
};

Data make_data(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Data d;
  d.a.resize(n);
  d.b.resize(n);
  d.w.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.a[i] = rng.gauss_cplx();
    d.b[i] = rng.gauss_cplx();
    d.w[i] = rng.gauss();
  }
  return d;
}

double rel_diff(double x, double y) {
  const double scale = std::max({std::abs(x), std::abs(y), 1e-300});
  return std::abs(x - y) / scale;
}

double rel_diff(cplx x, cplx y) {
  const double scale = std::max({std::abs(x), std::abs(y), 1e-300});
  return std::abs(x - y) / scale;
}

}  // namespace

TEST_CASE("scalar ops match naive loops") {
  const Ops& ops = kernels::scalar_ops();
  CHECK(std::string(ops.name) == "scalar");
  for (std::size_t n : kSizes) {
    Data d = make_data(n, 1000 + n);

    double sumsq = 0.0, sumsq_diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sumsq += std::norm(d.a[i]);
      sumsq_diff += std::norm(d.a[i] - d.b[i]);
    }
    CHECK(rel_diff(ops.sumsq(d.a.data(), n), sumsq) <= 1e-13);
    CHECK(rel_diff(ops.sumsq_diff(d.a.data(), d.b.data(), n), sumsq_diff) <= 1e-13);

    std::vector<cplx> dst(n, cplx{0.0, 0.0});
    ops.mul_real(d.a.data(), d.w.data(), dst.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(dst[i] == d.a[i] * d.w[i]);

    std::vector<cplx> acc(n, cplx{1.0, -1.0});
    ops.fmadd_real(d.a.data(), d.w.data(), acc.data(), n);
    for (std::size_t i = 0; i < n; ++i)
      CHECK(rel_diff(acc[i], cplx{1.0, -1.0} + d.a[i] * d.w[i]) <= 1e-13);

    std::vector<double> mag(n, 0.5);
    ops.accum_sqmag(d.a.data(), mag.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(rel_diff(mag[i], 0.5 + std::norm(d.a[i])) <= 1e-13);

    const double anchor = 0.5 * double(n);
    WindowMoments m = ops.window_moments(d.a.data(), n, anchor);
    cplx s0{0.0, 0.0}, s1{0.0, 0.0};
    double q = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s0 += d.a[i];
      s1 += d.a[i] * (double(i) - anchor);
      q += std::norm(d.a[i]);
    }
    CHECK(std::abs(m.s0 - s0) <= 1e-12 * (1.0 + std::abs(s0)));
    CHECK(std::abs(m.s1 - s1) <= 1e-12 * (1.0 + std::abs(s1)));
    CHECK(rel_diff(m.q, q) <= 1e-13);

    double mad = 0.0;
    for (std::size_t i = 0; i < n; ++i) mad = std::max(mad, std::abs(d.a[i] - d.b[i]));
    CHECK(rel_diff(ops.max_abs_diff(d.a.data(), d.b.data(), n), mad) <= 1e-13);
  }
}

TEST_CASE("anchor shift moves s1 by the documented amount") {
  const Ops& ops = kernels::scalar_ops();
  Data d = make_data(33, 77);
  WindowMoments m0 = ops.window_moments(d.a.data(), 33, 0.0);
  WindowMoments m5 = ops.window_moments(d.a.data(), 33, 5.0);
  // sum h (t - 5) = sum h t - 5 sum h
  CHECK(std::abs(m5.s1 - (m0.s1 - 5.0 * m0.s0)) <= 1e-12 * (1.0 + std::abs(m0.s1)));
}

TEST_CASE("avx2 ops agree with scalar ops") {
  if (!kernels::avx2_available()) {
    MESSAGE("AVX2 not available on this host; skipping");
    return;
  }
  const Ops& sc = kernels::scalar_ops();
  const Ops& vx = kernels::avx2_ops();
  CHECK(std::string(vx.name) == "avx2");

  for (std::size_t n : kSizes) {
    Data d = make_data(n, 9000 + n);

    CHECK(rel_diff(vx.sumsq(d.a.data(), n), sc.sumsq(d.a.data(), n)) <= 1e-13);
    CHECK(rel_diff(vx.sumsq_diff(d.a.data(), d.b.data(), n),
                   sc.sumsq_diff(d.a.data(), d.b.data(), n)) <= 1e-13);

    std::vector<cplx> dst_s(n), dst_v(n);
    sc.mul_real(d.a.data(), d.w.data(), dst_s.data(), n);
    vx.mul_real(d.a.data(), d.w.data(), dst_v.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(rel_diff(dst_s[i], dst_v[i]) <= 1e-13);

    std::vector<cplx> acc_s(n, cplx{0.25, 2.0}), acc_v(n, cplx{0.25, 2.0});
    sc.fmadd_real(d.a.data(), d.w.data(), acc_s.data(), n);
    vx.fmadd_real(d.a.data(), d.w.data(), acc_v.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(rel_diff(acc_s[i], acc_v[i]) <= 1e-12);

    std::vector<double> mag_s(n, 0.0), mag_v(n, 0.0);
    sc.accum_sqmag(d.a.data(), mag_s.data(), n);
    vx.accum_sqmag(d.a.data(), mag_v.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(rel_diff(mag_s[i], mag_v[i]) <= 1e-13);

    WindowMoments ms = sc.window_moments(d.a.data(), n, 1.25);
    WindowMoments mv = vx.window_moments(d.a.data(), n, 1.25);
    CHECK(std::abs(ms.s0 - mv.s0) <= 1e-12 * (1.0 + std::abs(ms.s0)));
    CHECK(std::abs(ms.s1 - mv.s1) <= 1e-12 * (1.0 + std::abs(ms.s1)));
    CHECK(rel_diff(ms.q, mv.q) <= 1e-13);

    CHECK(rel_diff(vx.max_abs_diff(d.a.data(), d.b.data(), n),
                   sc.max_abs_diff(d.a.data(), d.b.data(), n)) <= 1e-13);
  }
}

TEST_CASE("active dispatch resolves to a known table") {
  const std::string name = kernels::active().name;
  const bool known = name == "scalar" || name == "avx2";
  CHECK(known);
  const char* pinned = std::getenv("LPK_KERNELS");
  if (pinned != nullptr) CHECK(name == std::string(pinned));
}
