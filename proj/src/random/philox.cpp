#include "corticarc/random/philox.hpp"

#include <cmath>
#include <numbers>

namespace corticarc::random {

double standard_normal(KeyedStream& stream) {
  const double u1 = stream.next_open_unit();
  const double u2 = stream.next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

// Transformed rejection with squeeze (Hormann 1993), valid for mean >= 10.
std::uint32_t poisson_ptrs(KeyedStream& stream, double mean) {
  const double slam = std::sqrt(mean);
  const double loglam = std::log(mean);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = stream.next_unit() - 0.5;
    const double v = stream.next_open_unit();
    const double us = 0.5 - std::abs(u);
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint32_t>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + k * loglam - std::lgamma(k + 1.0)) {
      return static_cast<std::uint32_t>(k);
    }
  }
}

}  // namespace

std::uint32_t poisson(KeyedStream& stream, double mean) {
  if (!(mean > 0.0)) return 0;
  if (mean >= 30.0) return poisson_ptrs(stream, mean);
  const double u = stream.next_unit();
  double p = std::exp(-mean);
  double cdf = p;
  std::uint32_t k = 0;
  while (u >= cdf && p > 0.0) {
    ++k;
    p *= mean / k;
    cdf += p;
  }
  return k;
}

}  // namespace corticarc::random
