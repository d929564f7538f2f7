#include <cmath>
#include <map>

#include "corticarc/random/philox.hpp"
#include "doctest.h"

using namespace corticarc::random;

TEST_CASE("philox4x32-10 known-answer vectors") {
  CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == Counter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        Counter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        Counter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("philox is usable at compile time") {
  constexpr Counter c = philox4x32({0, 0, 0, 0}, {0, 0});
  static_assert(c[0] == 0x6627e8d5u);
}

TEST_CASE("keyed streams depend only on their coordinates") {
  const Key key = key_from_seed(42);
  KeyedStream a(key, 10, 20, Purpose::external_input);
  KeyedStream b(key, 10, 20, Purpose::external_input);
  KeyedStream other(key, 10, 21, Purpose::external_input);
  KeyedStream purpose(key, 10, 20, Purpose::initial_state);
  int same_other = 0, same_purpose = 0;
  for (int k = 0; k < 64; ++k) {
    const auto x = a.next_u32();
    CHECK(x == b.next_u32());
    same_other += x == other.next_u32();
    same_purpose += x == purpose.next_u32();
  }
  CHECK(same_other < 2);
  CHECK(same_purpose < 2);
  CHECK(key_from_seed(1) != key_from_seed(2));
}

TEST_CASE("unit conversions stay inside their intervals") {
  CHECK(to_unit(0, 0) == 0.0);
  CHECK(to_unit(0xffffffffu, 0xffffffffu) < 1.0);
  CHECK(to_open_unit(0, 0) > 0.0);
  CHECK(to_open_unit(0xffffffffu, 0xffffffffu) < 1.0);
}

TEST_CASE("standard normal moments") {
  KeyedStream s(key_from_seed(7), 1, 2, Purpose::synapse_params);
  const int n = 200000;
  double sum = 0, sq = 0;
  for (int k = 0; k < n; ++k) {
    const double x = standard_normal(s);
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(n));
  CHECK(sq / n - mean * mean == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("poisson mean and variance on both sides of the method switch") {
  for (double mean : {0.05, 0.7, 2.0, 9.5, 29.9, 30.0, 45.0, 250.0}) {
    const int n = 200000;
    double sum = 0, sq = 0;
    for (int k = 0; k < n; ++k) {
      KeyedStream s(key_from_seed(99), static_cast<std::uint32_t>(k), 5, Purpose::external_input);
      const double x = poisson(s, mean);
      sum += x;
      sq += x * x;
    }
    const double m = sum / n;
    const double var = sq / n - m * m;
    INFO("mean " << mean);
    CHECK(std::abs(m - mean) < 4.0 * std::sqrt(mean / n));
    CHECK(var == doctest::Approx(mean).epsilon(0.03));
  }
  KeyedStream s(key_from_seed(1), 0, 0, Purpose::external_input);
  CHECK(poisson(s, 0.0) == 0);
}

TEST_CASE("poisson probabilities match the mass function at small means") {
  const double mean = 3.0;
  const int n = 400000;
  std::map<int, int> hist;
  for (int k = 0; k < n; ++k) {
    KeyedStream s(key_from_seed(3), static_cast<std::uint32_t>(k), 0, Purpose::external_input);
    ++hist[static_cast<int>(poisson(s, mean))];
  }
  double pk = std::exp(-mean);
  for (int k = 0; k < 10; ++k) {
    const double expect = pk * n;
    CHECK(std::abs(hist[k] - expect) < 5.0 * std::sqrt(expect) + 1);
    pk *= mean / (k + 1);
  }
}
