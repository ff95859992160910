#include "lpk/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace lpk::kernels {

bool avx2_available() {
#if defined(LPK_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

#if !defined(LPK_HAVE_AVX2_TU) || !(defined(__x86_64__) || defined(_M_X64))
const Ops& avx2_ops() { throw std::runtime_error("avx2 kernels not built on this target"); }
#endif

namespace {
const Ops& pick() {
  const char* force = std::getenv("LPK_KERNELS");
  if (force != nullptr) {
    if (std::strcmp(force, "scalar") == 0) return scalar_ops();
    if (std::strcmp(force, "avx2") == 0) {
      if (!avx2_available()) throw std::runtime_error("LPK_KERNELS=avx2 but CPU/build lacks AVX2+FMA");
      return avx2_ops();
    }
    throw std::runtime_error("LPK_KERNELS must be 'scalar' or 'avx2'");
  }
  return avx2_available() ? avx2_ops() : scalar_ops();
}
}  // namespace

const Ops& active() {
  static const Ops& table = pick();
  return table;
}

}  // namespace lpk::kernels
