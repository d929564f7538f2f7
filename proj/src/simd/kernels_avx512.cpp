// AVX-512 Bernoulli sweep: sixteen counters (64 candidates) per iteration.

#include <immintrin.h>

#include <algorithm>

#include "corticarc/simd/kernels.hpp"

namespace corticarc::simd {

namespace {

inline void mulhilo(__m512i a, __m512i m, __m512i& lo, __m512i& hi) {
  const __m512i even = _mm512_mul_epu32(a, m);
  const __m512i odd = _mm512_mul_epu32(_mm512_srli_epi64(a, 32), m);
  lo = _mm512_mask_blend_epi32(0xAAAA, even, _mm512_slli_epi64(odd, 32));
  hi = _mm512_mask_blend_epi32(0xAAAA, _mm512_srli_epi64(even, 32), odd);
}

inline std::uint64_t group_mask(const SweepArgs& args, std::uint32_t block) {
  __m512i c0 = _mm512_add_epi32(
      _mm512_set1_epi32(static_cast<int>(block)),
      _mm512_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15));
  __m512i c1 = _mm512_set1_epi32(static_cast<int>(args.source));
  __m512i c2 = _mm512_set1_epi32(static_cast<int>(args.purpose));
  __m512i c3 = _mm512_setzero_si512();
  const __m512i m0 = _mm512_set1_epi32(static_cast<int>(random::kPhiloxM0));
  const __m512i m1 = _mm512_set1_epi32(static_cast<int>(random::kPhiloxM1));
  std::uint32_t k0 = args.key[0];
  std::uint32_t k1 = args.key[1];
  for (int round = 0; round < random::kPhiloxRounds; ++round) {
    __m512i lo0, hi0, lo1, hi1;
    mulhilo(c0, m0, lo0, hi0);
    mulhilo(c2, m1, lo1, hi1);
    c0 = _mm512_xor_si512(_mm512_xor_si512(hi1, c1), _mm512_set1_epi32(static_cast<int>(k0)));
    c1 = lo1;
    c2 = _mm512_xor_si512(_mm512_xor_si512(hi0, c3), _mm512_set1_epi32(static_cast<int>(k1)));
    c3 = lo0;
    k0 += random::kPhiloxW0;
    k1 += random::kPhiloxW1;
  }
  const __m512i thr =
      _mm512_set1_epi32(static_cast<int>(static_cast<std::uint32_t>(args.threshold)));
  auto bits = [&](__m512i w) { return std::uint64_t{_mm512_cmplt_epu32_mask(w, thr)}; };
  return _pdep_u64(bits(c0), 0x1111111111111111ull) | _pdep_u64(bits(c1), 0x2222222222222222ull) |
         _pdep_u64(bits(c2), 0x4444444444444444ull) | _pdep_u64(bits(c3), 0x8888888888888888ull);
}

inline std::uint64_t valid_bits(const SweepArgs& args, std::uint32_t base) {
  const std::uint32_t lo = args.first > base ? args.first - base : 0;
  const std::uint64_t hi = std::min<std::uint64_t>(std::uint64_t{args.last} - base, 64);
  const std::uint64_t upper = hi >= 64 ? ~0ull : ((1ull << hi) - 1ull);
  return upper & ~((1ull << lo) - 1ull);
}

template <class Visit>
void sweep_blocks(const SweepArgs& args, Visit&& visit) {
  const std::uint32_t first_block = args.first >> 2;
  const std::uint64_t end_block = (std::uint64_t{args.last} + 3) >> 2;
  std::uint64_t block = first_block;
  for (; block + 16 <= end_block; block += 16) {
    const auto b = static_cast<std::uint32_t>(block);
    visit(b << 2, group_mask(args, b) & valid_bits(args, b << 2));
  }
  for (; block < end_block; ++block) {
    const auto b = static_cast<std::uint32_t>(block);
    const random::Counter out =
        random::philox4x32({b, args.source, args.purpose, 0}, args.key);
    std::uint64_t bits = 0;
    for (std::uint32_t j = 0; j < 4; ++j) bits |= std::uint64_t{out[j] < args.threshold} << j;
    visit(b << 2, bits & valid_bits(args, b << 2));
  }
}

void sweep_avx512(const SweepArgs& args, std::vector<std::uint32_t>& accepted) {
  if (args.first >= args.last || args.threshold == 0) return;
  if (args.threshold >= (std::uint64_t{1} << 32)) {
    for (std::uint32_t g = args.first; g < args.last; ++g) accepted.push_back(g);
    return;
  }
  sweep_blocks(args, [&](std::uint32_t base, std::uint64_t bits) {
    while (bits != 0) {
      accepted.push_back(base + static_cast<std::uint32_t>(__builtin_ctzll(bits)));
      bits &= bits - 1;
    }
  });
}

std::uint64_t count_avx512(const SweepArgs& args) {
  if (args.first >= args.last || args.threshold == 0) return 0;
  if (args.threshold >= (std::uint64_t{1} << 32)) return args.last - args.first;
  std::uint64_t n = 0;
  sweep_blocks(args, [&](std::uint32_t, std::uint64_t bits) { n += __builtin_popcountll(bits); });
  return n;
}

}  // namespace

namespace detail {
const KernelTable kAvx512Kernels{Isa::avx512, &sweep_avx512, &count_avx512};
}

}  // namespace corticarc::simd
