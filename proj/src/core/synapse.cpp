#include "corticarc/core/synapse.hpp"

#include <bit>

namespace corticarc {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t synapse_hash(NeuronId source, const SynapseRecord& syn) {
  const std::uint64_t pair = (std::uint64_t{source} << 32) | syn.target_neuron;
  const std::uint64_t payload =
      (std::uint64_t{std::bit_cast<std::uint32_t>(syn.weight)} << 32) | syn.delay;
  return splitmix64(splitmix64(pair) ^ payload);
}

}  // namespace corticarc
