#pragma once

#include <cstdint>
#include <vector>

#include "corticarc/core/neuron.hpp"
#include "corticarc/partition/construction.hpp"
#include "corticarc/partition/transport.hpp"

namespace corticarc::partition {

/// Spikes of one timestep sent by `source_worker`, ascending by
/// (emission time, source neuron).
struct AxonalSpikeMessage {
  int source_worker = 0;
  std::vector<SpikeEvent> spikes;
};

/// Wire size of one address event: u32 neuron id + f64 emission time.
inline constexpr std::size_t kSpikeWireBytes = 12;

/// Running totals of the two-phase delivery, per peer worker.
struct ExchangeStats {
  std::uint64_t steps = 0;
  std::uint64_t counter_messages = 0;
  std::uint64_t payload_messages = 0;
  std::uint64_t nonzero_counters = 0;
  std::vector<std::uint64_t> spikes_sent;      // indexed by target worker
  std::vector<std::uint64_t> spikes_received;  // indexed by source worker
  std::vector<std::uint64_t> payloads_sent;    // payload messages per target worker

  void resize(int workers);
};

/// Two-phase spike delivery for timestep `step`. Phase 1 sends one counter
/// word to every remote directory target (zero included); phase 2 sends a
/// payload only where the counter is non-zero. `outgoing[w]` holds the
/// spikes for worker w; the entry for this worker is handed back without
/// serialization. Returns non-empty messages ordered by source worker.
std::vector<AxonalSpikeMessage> deliver_spikes(Transport& transport, std::uint64_t step,
                                               std::vector<std::vector<SpikeEvent>>& outgoing,
                                               const ConnectivityDirectory& directory, ExchangeStats& stats);

}  // namespace corticarc::partition
