#pragma once

#include <array>
#include <cstdint>

namespace corticarc::random {

using Counter = std::array<std::uint32_t, 4>;
using Key = std::array<std::uint32_t, 2>;

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;
inline constexpr int kPhiloxRounds = 10;

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Every
/// stochastic draw in the simulator is a pure function of (key, counter),
/// so results never depend on iteration order or on the number of workers.
constexpr Counter philox4x32(Counter ctr, Key key) {
  for (int round = 0; round < kPhiloxRounds; ++round) {
    const std::uint64_t p0 = std::uint64_t{kPhiloxM0} * ctr[0];
    const std::uint64_t p1 = std::uint64_t{kPhiloxM1} * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

constexpr Key key_from_seed(std::uint64_t seed) {
  return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
}

/// Stream tags occupying counter word 2. Distinct purposes never share a
/// counter, so their draws are independent.
enum class Purpose : std::uint32_t {
  connect = 0x1,
  synapse_params = 0x2,
  initial_state = 0x3,
  external_input = 0x4,
};

/// Uniform double in [0, 1) from two 32-bit words (53 bits).
constexpr double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (std::uint64_t{hi} << 21) ^ (lo >> 11);
  return static_cast<double>(bits) * 0x1.0p-53;
}

/// Uniform double in (0, 1); safe as a log() argument.
constexpr double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (std::uint64_t{hi} << 20) ^ (lo >> 12);
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-52;
}

/// Walks counter word 3 to supply an unbounded sequence of words for one
/// (a, b, purpose) triple.
class KeyedStream {
 public:
  KeyedStream(Key key, std::uint32_t a, std::uint32_t b, Purpose purpose)
      : key_(key), base_{a, b, static_cast<std::uint32_t>(purpose), 0} {}

  std::uint32_t next_u32() {
    if (used_ == 4) refill();
    return block_[used_++];
  }
  double next_unit() {
    const std::uint32_t hi = next_u32();
    return to_unit(hi, next_u32());
  }
  double next_open_unit() {
    const std::uint32_t hi = next_u32();
    return to_open_unit(hi, next_u32());
  }

 private:
  void refill() {
    Counter ctr = base_;
    ctr[3] = index_++;
    block_ = philox4x32(ctr, key_);
    used_ = 0;
  }

  Key key_;
  Counter base_;
  Counter block_{};
  std::uint32_t index_ = 0;
  int used_ = 4;
};

/// Standard normal deviate (Box-Muller, cosine branch).
double standard_normal(KeyedStream& stream);

/// Poisson deviate with the given mean: inversion below 30, PTRS above.
std::uint32_t poisson(KeyedStream& stream, double mean);

}  // namespace corticarc::random
