#pragma once

#include <cstdint>

#include "corticarc/core/neuron.hpp"

namespace corticarc {

/// Persistent synapse: target neuron, weight (mV) and delay in timesteps.
/// `flags` pads the record to 12 bytes and is reserved for plasticity state.
struct SynapseRecord {
  NeuronId target_neuron = 0;
  float weight = 0.0f;
  std::uint16_t delay = 1;
  std::uint16_t flags = 0;

  friend bool operator==(const SynapseRecord&, const SynapseRecord&) = default;
};

static_assert(sizeof(SynapseRecord) == 12, "synapse record must stay 12 bytes");

/// Order-independent hash of one (source, synapse) pair. Summing it over a
/// network gives a checksum that does not depend on partitioning.
std::uint64_t synapse_hash(NeuronId source, const SynapseRecord& syn);

}  // namespace corticarc
