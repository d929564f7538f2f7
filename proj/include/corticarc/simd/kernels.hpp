#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "corticarc/random/philox.hpp"

namespace corticarc::simd {

enum class Isa { scalar, avx2, avx512 };

std::string_view to_string(Isa isa);
std::optional<Isa> parse_isa(std::string_view name);

/// One Bernoulli sweep over a contiguous range of candidate targets.
///
/// Candidate `g` in [first, last) is accepted when word (g & 3) of
///   philox4x32({g >> 2, source, purpose, 0}, key)
/// is below `threshold`. A threshold of 2^32 or more accepts everything.
struct SweepArgs {
  random::Key key{};
  std::uint32_t source = 0;
  std::uint32_t purpose = 0;
  std::uint32_t first = 0;
  std::uint32_t last = 0;
  std::uint64_t threshold = 0;
};

/// Maps a probability to the integer acceptance threshold.
std::uint64_t threshold_for(double probability);

/// Scalar evaluation of a single candidate; the reference every kernel must match.
bool accepts(const SweepArgs& args, std::uint32_t candidate);

using SweepFn = void (*)(const SweepArgs&, std::vector<std::uint32_t>& accepted);
using CountFn = std::uint64_t (*)(const SweepArgs&);

struct KernelTable {
  Isa isa;
  /// Appends accepted candidates in ascending order.
  SweepFn bernoulli_sweep;
  /// Number of accepted candidates.
  CountFn bernoulli_count;
};

/// Kernel table for `isa`, or nullptr when the build or the CPU lacks it.
const KernelTable* kernels_for(Isa isa);

/// The active table. Chosen on first use: the widest supported ISA, unless
/// CORTICARC_SIMD=scalar|avx2|avx512 asks for a specific one.
const KernelTable& kernels();

/// Overrides the active table; returns false when `isa` is unavailable.
bool select(Isa isa);

namespace detail {
extern const KernelTable kScalarKernels;
#if defined(CORTICARC_HAVE_X86_KERNELS)
extern const KernelTable kAvx2Kernels;
extern const KernelTable kAvx512Kernels;
#endif
}  // namespace detail

}  // namespace corticarc::simd
