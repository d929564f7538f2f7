#include "corticarc/metrics/report.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace corticarc::metrics {

namespace {

double rate(std::uint64_t spikes, std::uint64_t neurons, double seconds) {
  if (neurons == 0 || !(seconds > 0.0)) return 0.0;
  return static_cast<double>(spikes) / (static_cast<double>(neurons) * seconds);
}

}  // namespace

double SimReport::mean_rate_hz() const { return rate(spikes, neurons, sim_seconds); }
double SimReport::excitatory_rate_hz() const { return rate(excitatory_spikes, excitatory_neurons, sim_seconds); }
double SimReport::inhibitory_rate_hz() const {
  return rate(spikes - excitatory_spikes, neurons - excitatory_neurons, sim_seconds);
}

std::optional<double> normalized_cost(const SimReport& report) {
  const std::uint64_t events = report.equivalent_events();
  if (events == 0) return std::nullopt;
  return report.wall_seconds * 1e9 / static_cast<double>(events);
}

double slowdown_comparison(const SimReport& gaussian, const SimReport& exponential) {
  if (gaussian.grid != exponential.grid || gaussian.workers != exponential.workers) {
    throw std::invalid_argument("slowdown comparison needs reports from the same grid and worker count");
  }
  const auto g = normalized_cost(gaussian);
  const auto e = normalized_cost(exponential);
  if (!g || !e || *g <= 0.0) throw std::invalid_argument("slowdown comparison needs runs with events");
  return *e / *g;
}

nlohmann::json to_json(const SimReport& r) {
  nlohmann::json j;
  j["grid"] = r.grid;
  j["kernel"] = r.kernel;
  j["transport"] = r.transport;
  j["workers"] = r.workers;
  j["seed"] = r.seed;
  j["timestep_ms"] = r.timestep_ms;
  j["steps"] = r.steps;
  j["sim_seconds"] = r.sim_seconds;
  j["wall_seconds"] = r.wall_seconds;
  j["times"] = {{"construction", r.times.construction},
                {"exchange", r.times.exchange},
                {"arborize", r.times.arborize},
                {"integrate", r.times.integrate},
                {"simulation", r.times.simulation}};
  j["neurons"] = r.neurons;
  j["excitatory_neurons"] = r.excitatory_neurons;
  j["recurrent_synapses"] = r.recurrent_synapses;
  j["external_synapses_per_neuron"] = r.external_synapses_per_neuron;
  j["total_equivalent_synapses"] = r.total_equivalent_synapses();
  j["checksum"] = r.checksum;
  j["recurrent_events"] = r.recurrent_events;
  j["external_events"] = r.external_events;
  j["equivalent_events"] = r.equivalent_events();
  j["spikes"] = r.spikes;
  j["mean_rate_hz"] = r.mean_rate_hz();
  j["excitatory_rate_hz"] = r.excitatory_rate_hz();
  j["inhibitory_rate_hz"] = r.inhibitory_rate_hz();
  if (const auto cost = normalized_cost(r)) {
    j["ns_per_event"] = *cost;
  } else {
    j["ns_per_event"] = nullptr;
  }
  j["memory"] = {{"synapses", r.memory.synapses},
                 {"record_bytes", r.memory.record_bytes},
                 {"source_copy_bytes", r.memory.source_copy_bytes},
                 {"index_bytes", r.memory.index_bytes},
                 {"ring_bytes", r.memory.ring_bytes},
                 {"buffer_high_water", r.memory.buffer_high_water},
                 {"bytes_per_synapse_steady", r.memory.steady_per_synapse()},
                 {"overhead_per_synapse", r.memory.overhead_per_synapse()},
                 {"bytes_per_synapse_peak", r.memory.peak_per_synapse()},
                 {"worker_peak_bytes", r.worker_peak_bytes}};
  j["exchange"] = {{"counter_messages", r.exchange.counter_messages},
                   {"payload_messages", r.exchange.payload_messages},
                   {"spikes_sent", r.exchange.spikes_sent},
                   {"spikes_received", r.exchange.spikes_received}};
  return j;
}

void write_raster(std::ostream& out, const std::vector<SpikeEvent>& raster) {
  char line[64];
  for (const SpikeEvent& s : raster) {
    const int n = std::snprintf(line, sizeof line, "%.17g\t%u\n", s.emission_time, s.source_neuron);
    out.write(line, n);
  }
}

std::vector<SpikeEvent> read_raster(std::istream& in) {
  std::vector<SpikeEvent> raster;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw std::runtime_error("raster: missing tab in '" + line + "'");
    SpikeEvent s;
    s.emission_time = std::stod(line.substr(0, tab));
    const auto* first = line.data() + tab + 1;
    const auto* last = line.data() + line.size();
    if (std::from_chars(first, last, s.source_neuron).ec != std::errc{}) {
      throw std::runtime_error("raster: bad neuron id in '" + line + "'");
    }
    raster.push_back(s);
  }
  return raster;
}

}  // namespace corticarc::metrics
