// AVX2 Bernoulli sweep: eight Philox4x32 counters per iteration in SoA
// layout, giving 32 candidates per step. Bit-identical to the scalar kernel.

#include <immintrin.h>

#include <algorithm>

#include "corticarc/simd/kernels.hpp"

namespace corticarc::simd {

namespace {

inline void mulhilo(__m256i a, __m256i m, __m256i& lo, __m256i& hi) {
  const __m256i even = _mm256_mul_epu32(a, m);
  const __m256i odd = _mm256_mul_epu32(_mm256_srli_epi64(a, 32), m);
  lo = _mm256_blend_epi32(even, _mm256_slli_epi64(odd, 32), 0xAA);
  hi = _mm256_blend_epi32(_mm256_srli_epi64(even, 32), odd, 0xAA);
}

// Acceptance mask for candidates 4*block .. 4*block + 31.
inline std::uint32_t group_mask(const SweepArgs& args, std::uint32_t block) {
  __m256i c0 = _mm256_add_epi32(_mm256_set1_epi32(static_cast<int>(block)),
                                _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7));
  __m256i c1 = _mm256_set1_epi32(static_cast<int>(args.source));
  __m256i c2 = _mm256_set1_epi32(static_cast<int>(args.purpose));
  __m256i c3 = _mm256_setzero_si256();
  const __m256i m0 = _mm256_set1_epi32(static_cast<int>(random::kPhiloxM0));
  const __m256i m1 = _mm256_set1_epi32(static_cast<int>(random::kPhiloxM1));
  std::uint32_t k0 = args.key[0];
  std::uint32_t k1 = args.key[1];
  for (int round = 0; round < random::kPhiloxRounds; ++round) {
    __m256i lo0, hi0, lo1, hi1;
    mulhilo(c0, m0, lo0, hi0);
    mulhilo(c2, m1, lo1, hi1);
    const __m256i vk0 = _mm256_set1_epi32(static_cast<int>(k0));
    const __m256i vk1 = _mm256_set1_epi32(static_cast<int>(k1));
    c0 = _mm256_xor_si256(_mm256_xor_si256(hi1, c1), vk0);
    c1 = lo1;
    c2 = _mm256_xor_si256(_mm256_xor_si256(hi0, c3), vk1);
    c3 = lo0;
    k0 += random::kPhiloxW0;
    k1 += random::kPhiloxW1;
  }
  const __m256i sign = _mm256_set1_epi32(static_cast<int>(0x80000000u));
  const __m256i thr = _mm256_xor_si256(
      _mm256_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(args.threshold))), sign);
  auto lane_bits = [&](__m256i w) {
    const __m256i below = _mm256_cmpgt_epi32(thr, _mm256_xor_si256(w, sign));
    return static_cast<std::uint32_t>(_mm256_movemask_ps(_mm256_castsi256_ps(below)));
  };
  return _pdep_u32(lane_bits(c0), 0x11111111u) | _pdep_u32(lane_bits(c1), 0x22222222u) |
         _pdep_u32(lane_bits(c2), 0x44444444u) | _pdep_u32(lane_bits(c3), 0x88888888u);
}

inline std::uint32_t valid_bits(const SweepArgs& args, std::uint32_t base) {
  const std::uint32_t lo = args.first > base ? args.first - base : 0;
  const std::uint32_t hi = std::min<std::uint64_t>(std::uint64_t{args.last} - base, 32);
  const std::uint32_t upper = hi >= 32 ? ~0u : ((1u << hi) - 1u);
  return upper & ~((1u << lo) - 1u);
}

template <class Visit>
void sweep_blocks(const SweepArgs& args, Visit&& visit) {
  const std::uint32_t first_block = args.first >> 2;
  const std::uint64_t end_block = (std::uint64_t{args.last} + 3) >> 2;
  std::uint64_t block = first_block;
  for (; block + 8 <= end_block; block += 8) {
    const auto b = static_cast<std::uint32_t>(block);
    visit(b << 2, group_mask(args, b) & valid_bits(args, b << 2));
  }
  for (; block < end_block; ++block) {
    const auto b = static_cast<std::uint32_t>(block);
    const random::Counter out =
        random::philox4x32({b, args.source, args.purpose, 0}, args.key);
    std::uint32_t bits = 0;
    for (std::uint32_t j = 0; j < 4; ++j) bits |= std::uint32_t{out[j] < args.threshold} << j;
    visit(b << 2, bits & valid_bits(args, b << 2));
  }
}

void sweep_avx2(const SweepArgs& args, std::vector<std::uint32_t>& accepted) {
  if (args.first >= args.last || args.threshold == 0) return;
  if (args.threshold >= (std::uint64_t{1} << 32)) {
    for (std::uint32_t g = args.first; g < args.last; ++g) accepted.push_back(g);
    return;
  }
  sweep_blocks(args, [&](std::uint32_t base, std::uint32_t bits) {
    while (bits != 0) {
      accepted.push_back(base + static_cast<std::uint32_t>(__builtin_ctz(bits)));
      bits &= bits - 1;
    }
  });
}

std::uint64_t count_avx2(const SweepArgs& args) {
  if (args.first >= args.last || args.threshold == 0) return 0;
  if (args.threshold >= (std::uint64_t{1} << 32)) return args.last - args.first;
  std::uint64_t n = 0;
  sweep_blocks(args, [&](std::uint32_t, std::uint32_t bits) { n += __builtin_popcount(bits); });
  return n;
}

}  // namespace

namespace detail {
const KernelTable kAvx2Kernels{Isa::avx2, &sweep_avx2, &count_avx2};
}

}  // namespace corticarc::simd
