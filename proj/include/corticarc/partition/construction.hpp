#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "corticarc/connectivity/synapse_gen.hpp"
#include "corticarc/partition/incoming_synapses.hpp"
#include "corticarc/partition/process_map.hpp"
#include "corticarc/partition/transport.hpp"

namespace corticarc::partition {

/// Which workers this worker exchanges synapses (and later spikes) with.
/// Both views may contain the worker itself.
struct ConnectivityDirectory {
  std::vector<int> targets;                     // ascending
  std::vector<int> sources;                     // ascending
  std::vector<std::uint64_t> outgoing_counts;   // synapses to each worker
  std::vector<std::uint64_t> incoming_counts;   // synapses from each worker

  bool is_target(int worker) const { return outgoing_counts[static_cast<std::size_t>(worker)] > 0; }
  bool is_source(int worker) const { return incoming_counts[static_cast<std::size_t>(worker)] > 0; }
};

struct ConstructionOptions {
  /// Upper bound on the synapse-list bytes one worker sends per round.
  std::uint64_t chunk_bytes = std::uint64_t{64} << 20;
  /// Stop after the counter exchange: directory and counts only.
  bool count_only = false;
};

struct ConstructionStats {
  std::uint64_t outgoing_synapses = 0;
  std::uint64_t incoming_synapses = 0;
  std::uint64_t checksum = 0;  // wrapping sum of synapse_hash over incoming synapses
  std::uint64_t rounds = 0;
  std::uint64_t buffer_high_water = 0;  // largest per-round send + receive buffer, bytes
  double seconds = 0.0;
};

/// Everything one worker keeps after construction.
class LocalNetwork {
 public:
  int rank = 0;
  ConnectivityDirectory directory;
  IncomingSynapses incoming;
  ConstructionStats stats;

  /// Workers holding at least one synapse of owned neuron `local`.
  std::span<const std::uint16_t> target_workers(std::uint32_t local) const {
    return std::span<const std::uint16_t>(axon_workers_).subspan(axon_offsets_[local],
                                                                 axon_offsets_[local + 1] - axon_offsets_[local]);
  }
  std::uint64_t axon_bytes() const {
    return axon_offsets_.size() * sizeof(std::uint32_t) + axon_workers_.size() * sizeof(std::uint16_t);
  }

 private:
  friend LocalNetwork construct_network(Transport&, const ProcessMap&, const connectivity::SynapseGenerator&,
                                        const ConstructionOptions&);
  std::vector<std::uint32_t> axon_offsets_;
  std::vector<std::uint16_t> axon_workers_;
};

/// Two-step construction. Step 1 counts the synapses each owned neuron
/// sends to every worker and exchanges one counter word per pair; step 2
/// generates the synapses in rounds and moves the lists to the workers
/// owning their targets, where they are stored by source neuron. Received
/// totals are checked against the announced counters.
LocalNetwork construct_network(Transport& transport, const ProcessMap& pmap,
                               const connectivity::SynapseGenerator& generator,
                               const ConstructionOptions& options = {});

}  // namespace corticarc::partition
