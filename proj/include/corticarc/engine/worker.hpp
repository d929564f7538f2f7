#pragma once

#include <cstdint>
#include <vector>

#include "corticarc/engine/delay_ring.hpp"
#include "corticarc/engine/simulation.hpp"
#include "corticarc/partition/construction.hpp"
#include "corticarc/partition/process_map.hpp"
#include "corticarc/partition/spike_exchange.hpp"

namespace corticarc::engine {

struct WorkerTotals {
  std::uint64_t recurrent_events = 0;
  std::uint64_t external_events = 0;
  std::uint64_t spikes = 0;
  std::uint64_t excitatory_spikes = 0;
  double exchange_seconds = 0.0;
  double arborize_seconds = 0.0;
  double integrate_seconds = 0.0;
};

/// One worker's share of the network and its per-step loop.
class Worker {
 public:
  Worker(partition::Transport& transport, const SimConfig& config);

  /// Two-step construction followed by state initialization.
  void construct();

  /// Step t covers [t * dt, (t + 1) * dt): spikes emitted during step t - 1
  /// are exchanged and arborized, then inputs due in step t are integrated.
  void step(std::uint64_t t);

  const partition::ProcessMap& process_map() const { return pmap_; }
  const partition::LocalNetwork& network() const { return net_; }
  const partition::ExchangeStats& exchange_stats() const { return xstats_; }
  const WorkerTotals& totals() const { return totals_; }
  const DelayRing& ring() const { return ring_; }
  /// Spikes of owned neurons in emission order (when recording).
  const std::vector<SpikeEvent>& raster() const { return raster_; }
  const std::vector<NeuronState>& states() const { return states_; }

 private:
  partition::Transport& transport_;
  SimConfig config_;
  partition::ProcessMap pmap_;
  connectivity::SynapseGenerator generator_;
  partition::LocalNetwork net_;
  partition::ExchangeStats xstats_;
  DelayRing ring_;
  random::Key key_;

  std::vector<NeuronState> states_;
  std::vector<std::uint8_t> excitatory_;
  std::vector<NeuronId> gids_;
  std::vector<SpikeEvent> pending_;  // emitted during the previous step
  std::vector<std::vector<SpikeEvent>> outgoing_;
  std::vector<InputEvent> external_;
  std::vector<std::uint32_t> external_offsets_;
  std::vector<std::uint32_t> offsets_;
  std::vector<InputEvent> inputs_;
  std::vector<SpikeEvent> raster_;
  WorkerTotals totals_;
};

}  // namespace corticarc::engine
