#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "corticarc/core/neuron.hpp"
#include "corticarc/metrics/memory.hpp"
#include "json.hpp"

namespace corticarc::metrics {

/// Wall-clock seconds per phase, taken from rank 0.
struct PhaseTimes {
  double construction = 0.0;
  double exchange = 0.0;     // spike delivery, both phases
  double arborize = 0.0;     // expansion through the incoming database
  double integrate = 0.0;    // ring drain, external input, sort, neuron update
  double simulation = 0.0;   // whole simulation phase between barriers
};

struct ExchangeTotals {
  std::uint64_t counter_messages = 0;
  std::uint64_t payload_messages = 0;
  std::uint64_t spikes_sent = 0;
  std::uint64_t spikes_received = 0;
};

struct SimReport {
  std::string grid;  // "NXxNY"
  std::string kernel;
  std::string transport;
  int workers = 1;
  std::uint64_t seed = 0;
  double timestep_ms = 1.0;
  std::uint64_t steps = 0;
  double sim_seconds = 0.0;
  double wall_seconds = 0.0;  // simulation phase only
  PhaseTimes times;

  std::uint64_t neurons = 0;
  std::uint64_t excitatory_neurons = 0;
  std::uint64_t recurrent_synapses = 0;
  double external_synapses_per_neuron = 0.0;
  std::uint64_t checksum = 0;

  std::uint64_t recurrent_events = 0;
  std::uint64_t external_events = 0;
  std::uint64_t spikes = 0;
  std::uint64_t excitatory_spikes = 0;

  MemoryReport memory;
  std::vector<std::uint64_t> worker_peak_bytes;
  ExchangeTotals exchange;

  bool raster_recorded = false;
  std::vector<SpikeEvent> raster;  // ascending by (time, gid)

  std::uint64_t equivalent_events() const { return recurrent_events + external_events; }
  double total_equivalent_synapses() const {
    return static_cast<double>(recurrent_synapses) + external_synapses_per_neuron * static_cast<double>(neurons);
  }
  double mean_rate_hz() const;
  double excitatory_rate_hz() const;
  double inhibitory_rate_hz() const;
};

/// Wall seconds of the simulation phase per equivalent synaptic event, in
/// ns. Empty when the run delivered no events.
std::optional<double> normalized_cost(const SimReport& report);

/// Exponential over Gaussian normalized cost. Throws std::invalid_argument
/// when the reports differ in grid or worker count or lack events.
double slowdown_comparison(const SimReport& gaussian, const SimReport& exponential);

/// Summary without the raster.
nlohmann::json to_json(const SimReport& report);

/// One line per spike: time_ms<TAB>gid, %.17g times.
void write_raster(std::ostream& out, const std::vector<SpikeEvent>& raster);
std::vector<SpikeEvent> read_raster(std::istream& in);

}  // namespace corticarc::metrics
