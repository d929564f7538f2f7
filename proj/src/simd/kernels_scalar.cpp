#include <cmath>

#include "corticarc/simd/kernels.hpp"

namespace corticarc::simd {

std::uint64_t threshold_for(double probability) {
  constexpr std::uint64_t kAll = std::uint64_t{1} << 32;
  if (!(probability > 0.0)) return 0;
  if (probability >= 1.0) return kAll;
  return static_cast<std::uint64_t>(std::ldexp(probability, 32));
}

bool accepts(const SweepArgs& args, std::uint32_t candidate) {
  if (args.threshold >= (std::uint64_t{1} << 32)) return true;
  const random::Counter out =
      random::philox4x32({candidate >> 2, args.source, args.purpose, 0}, args.key);
  return out[candidate & 3u] < args.threshold;
}

namespace {

void sweep_scalar(const SweepArgs& args, std::vector<std::uint32_t>& accepted) {
  if (args.first >= args.last || args.threshold == 0) return;
  if (args.threshold >= (std::uint64_t{1} << 32)) {
    for (std::uint32_t g = args.first; g < args.last; ++g) accepted.push_back(g);
    return;
  }
  random::Counter out{};
  std::uint32_t block = ~0u;
  for (std::uint32_t g = args.first; g < args.last; ++g) {
    if ((g >> 2) != block) {
      block = g >> 2;
      out = random::philox4x32({block, args.source, args.purpose, 0}, args.key);
    }
    if (out[g & 3u] < args.threshold) accepted.push_back(g);
  }
}

std::uint64_t count_scalar(const SweepArgs& args) {
  if (args.first >= args.last || args.threshold == 0) return 0;
  if (args.threshold >= (std::uint64_t{1} << 32)) return args.last - args.first;
  std::uint64_t n = 0;
  random::Counter out{};
  std::uint32_t block = ~0u;
  for (std::uint32_t g = args.first; g < args.last; ++g) {
    if ((g >> 2) != block) {
      block = g >> 2;
      out = random::philox4x32({block, args.source, args.purpose, 0}, args.key);
    }
    n += out[g & 3u] < args.threshold;
  }
  return n;
}

}  // namespace

namespace detail {
const KernelTable kScalarKernels{Isa::scalar, &sweep_scalar, &count_scalar};
}

}  // namespace corticarc::simd
