#include "lpk/fft.hpp"

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace lpk {
namespace {

using cvec = std::vector<std::complex<double>>;

// Twiddles for the decimation-in-time butterflies: for each stage of span s,
// the table holds exp(-2 pi i t / (2 s)) for t in [0, s). One flat table per
// size, immutable once built.
struct TwiddlePlan {
  std::vector<std::complex<double>> w;   // concatenated per-stage tables
  std::vector<std::size_t> stage_off;    // offset of each stage
};

std::shared_ptr<const TwiddlePlan> plan_for(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const TwiddlePlan>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  auto plan = std::make_shared<TwiddlePlan>();
  for (std::size_t s = 1; s < n; s *= 2) {
    plan->stage_off.push_back(plan->w.size());
    for (std::size_t t = 0; t < s; ++t) {
      double ang = -std::numbers::pi * double(t) / double(s);
      plan->w.emplace_back(std::cos(ang), std::sin(ang));
    }
  }
  cache.emplace(n, plan);
  return plan;
}

}  // namespace

void fft_pow2(cvec& data, int sign) {
  const std::size_t n = data.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fft_pow2: length must be a positive power of two");
  if (sign != 1 && sign != -1)
    throw std::invalid_argument("fft_pow2: sign must be +1 or -1");
  if (n == 1) return;

  // Bit-reversal permutation.
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }

  auto plan = plan_for(n);
  std::size_t stage = 0;
  for (std::size_t s = 1; s < n; s *= 2, ++stage) {
    const std::complex<double>* w = plan->w.data() + plan->stage_off[stage];
    for (std::size_t block = 0; block < n; block += 2 * s) {
      for (std::size_t t = 0; t < s; ++t) {
        std::complex<double> tw = (sign < 0) ? w[t] : std::conj(w[t]);
        std::complex<double> u = data[block + t];
        std::complex<double> v = data[block + t + s] * tw;
        data[block + t] = u + v;
        data[block + t + s] = u - v;
      }
    }
  }
}

}  // namespace lpk
