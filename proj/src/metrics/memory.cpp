#include "corticarc/metrics/memory.hpp"

#include <algorithm>

namespace corticarc::metrics {

double MemoryReport::steady_per_synapse() const {
  return synapses == 0 ? 0.0 : static_cast<double>(record_bytes) / static_cast<double>(synapses);
}

double MemoryReport::overhead_per_synapse() const {
  return synapses == 0 ? 0.0 : static_cast<double>(index_bytes) / static_cast<double>(synapses);
}

double MemoryReport::peak_per_synapse() const {
  if (synapses == 0) return 0.0;
  return static_cast<double>(record_bytes + source_copy_bytes + index_bytes) / static_cast<double>(synapses);
}

MemoryReport& MemoryReport::operator+=(const MemoryReport& o) {
  synapses += o.synapses;
  record_bytes += o.record_bytes;
  source_copy_bytes += o.source_copy_bytes;
  index_bytes += o.index_bytes;
  ring_bytes += o.ring_bytes;
  buffer_high_water = std::max(buffer_high_water, o.buffer_high_water);
  return *this;
}

MemoryReport memory_accounting(std::uint64_t incoming, std::uint64_t outgoing, std::uint64_t index_bytes) {
  MemoryReport m;
  m.synapses = incoming;
  m.record_bytes = incoming * kSynapseRecordBytes;
  m.source_copy_bytes = outgoing * kSynapseRecordBytes;
  m.index_bytes = index_bytes;
  return m;
}

}  // namespace corticarc::metrics
