#pragma once

#include <cstdint>

namespace corticarc::metrics {

/// Bytes of one persistent synapse record: target id 4, weight 4, delay 2, flags 2.
inline constexpr std::uint64_t kSynapseRecordBytes = 12;

/// Analytic memory of a constructed network, summed from field sizes.
///
/// The persistent cost is the record array. During construction every
/// synapse exists twice (source and target copy), so the peak baseline is
/// twice the record cost. Index structures and exchange buffers are
/// reported separately and never folded into the per-record figure.
struct MemoryReport {
  std::uint64_t synapses = 0;
  std::uint64_t record_bytes = 0;       // target copy, kept for the run
  std::uint64_t source_copy_bytes = 0;  // source copy, released after construction
  std::uint64_t index_bytes = 0;        // source index + per-neuron target-worker lists
  std::uint64_t ring_bytes = 0;         // delay-ring capacity at the end of the run
  std::uint64_t buffer_high_water = 0;  // largest per-round construction buffer

  /// Persistent record bytes per synapse; 12 for any non-empty network.
  double steady_per_synapse() const;
  /// Index overhead per synapse on top of the records.
  double overhead_per_synapse() const;
  /// Construction peak per synapse: both copies plus the index.
  double peak_per_synapse() const;

  MemoryReport& operator+=(const MemoryReport& other);
};

/// Accounting for a worker (or network) holding `incoming` target-side
/// records that generated `outgoing` source-side records.
MemoryReport memory_accounting(std::uint64_t incoming, std::uint64_t outgoing, std::uint64_t index_bytes);

}  // namespace corticarc::metrics
