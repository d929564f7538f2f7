#include "corticarc/engine/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "corticarc/engine/worker.hpp"
#include "corticarc/partition/inprocess_transport.hpp"
#include "corticarc/partition/wire.hpp"

namespace corticarc::engine {

std::string_view to_string(TransportKind kind) {
  return kind == TransportKind::inprocess ? "inprocess" : "multiprocess";
}

void SimConfig::validate() const {
  grid.validate();
  kernel.validate();
  synapse_spec().validate();
  excitatory.validate();
  inhibitory.validate();
  external.validate();
  if (!excitatory.is_excitatory || inhibitory.is_excitatory) {
    throw std::invalid_argument("config: population parameter sets are swapped");
  }
  if (!(timestep_ms > 0.0)) throw std::invalid_argument("config: timestep must be positive");
  if (!(duration_s >= 0.0) || !std::isfinite(duration_s)) throw std::invalid_argument("config: duration must be >= 0");
  if (workers < 1) throw std::invalid_argument("config: workers must be at least 1");
  if (static_cast<std::uint32_t>(workers) > grid.columns()) {
    throw std::invalid_argument("config: " + std::to_string(workers) + " workers exceed the " +
                                std::to_string(grid.columns()) + " columns of the grid");
  }
  if (chunk_bytes < 1024) throw std::invalid_argument("config: chunk size must be at least 1 KB");
}

std::uint64_t SimConfig::steps() const {
  return static_cast<std::uint64_t>(std::llround(duration_s * 1000.0 / timestep_ms));
}

connectivity::SynapseGenSpec SimConfig::synapse_spec() const {
  connectivity::SynapseGenSpec s = synapses;
  s.timestep_ms = timestep_ms;
  return s;
}

std::uint64_t estimate_memory(const SimConfig& config) {
  const connectivity::NetworkForecast f = connectivity::forecast_network(config.kernel, config.grid);
  const double synapses = f.recurrent_synapses + 3.0 * std::sqrt(std::max(f.recurrent_variance, 0.0));
  const double neurons = static_cast<double>(f.neurons);
  double bytes = synapses * static_cast<double>(metrics::kSynapseRecordBytes);
  bytes += neurons * (sizeof(NeuronState) + sizeof(partition::IncomingSynapses::Entry) + 16.0);
  bytes += 2.0 * static_cast<double>(config.chunk_bytes) * config.workers;
  return static_cast<std::uint64_t>(bytes);
}

namespace {

struct Summary {
  std::uint64_t outgoing = 0, incoming = 0, checksum = 0, recurrent_events = 0, external_events = 0, spikes = 0,
                excitatory_spikes = 0, index_bytes = 0, ring_bytes = 0, buffer_high_water = 0, counter_messages = 0,
                payload_messages = 0, spikes_sent = 0, spikes_received = 0;
  double construction = 0.0, exchange = 0.0, arborize = 0.0, integrate = 0.0;
  std::vector<SpikeEvent> raster;
};

wire::Bytes encode(const Summary& s) {
  wire::Bytes out;
  for (std::uint64_t v : {s.outgoing, s.incoming, s.checksum, s.recurrent_events, s.external_events, s.spikes,
                          s.excitatory_spikes, s.index_bytes, s.ring_bytes, s.buffer_high_water, s.counter_messages,
                          s.payload_messages, s.spikes_sent, s.spikes_received}) {
    wire::put_u64(out, v);
  }
  for (double v : {s.construction, s.exchange, s.arborize, s.integrate}) wire::put_f64(out, v);
  wire::put_u64(out, s.raster.size());
  for (const SpikeEvent& e : s.raster) {
    wire::put_u32(out, e.source_neuron);
    wire::put_f64(out, e.emission_time);
  }
  return out;
}

Summary decode(std::span<const std::byte> bytes) {
  wire::Reader in(bytes);
  Summary s;
  for (std::uint64_t* v : {&s.outgoing, &s.incoming, &s.checksum, &s.recurrent_events, &s.external_events, &s.spikes,
                           &s.excitatory_spikes, &s.index_bytes, &s.ring_bytes, &s.buffer_high_water,
                           &s.counter_messages, &s.payload_messages, &s.spikes_sent, &s.spikes_received}) {
    *v = in.u64();
  }
  for (double* v : {&s.construction, &s.exchange, &s.arborize, &s.integrate}) *v = in.f64();
  const std::uint64_t n = in.u64();
  s.raster.resize(n);
  for (SpikeEvent& e : s.raster) {
    e.source_neuron = in.u32();
    e.emission_time = in.f64();
  }
  if (!in.done()) throw partition::ProtocolError("gather: trailing bytes in worker summary");
  return s;
}

}  // namespace

std::optional<metrics::SimReport> run_worker(partition::Transport& transport, const SimConfig& config) {
  config.validate();
  if (transport.size() != config.workers) {
    throw std::invalid_argument("run: transport has " + std::to_string(transport.size()) + " workers, config asks for " +
                                std::to_string(config.workers));
  }
  const std::uint64_t estimate = estimate_memory(config);
  if (estimate > config.memory_budget_bytes) {
    throw MemoryBudgetExceeded("run: estimated " + std::to_string(estimate >> 20) + " MB exceeds the budget of " +
                               std::to_string(config.memory_budget_bytes >> 20) + " MB");
  }

  Worker worker(transport, config);
  worker.construct();

  const std::uint64_t steps = config.steps();
  transport.barrier();
  const auto started = std::chrono::steady_clock::now();
  for (std::uint64_t t = 0; t < steps; ++t) worker.step(t);
  transport.barrier();
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();

  const partition::LocalNetwork& net = worker.network();
  const WorkerTotals& totals = worker.totals();
  const partition::ExchangeStats& xs = worker.exchange_stats();
  Summary mine;
  mine.outgoing = net.stats.outgoing_synapses;
  mine.incoming = net.stats.incoming_synapses;
  mine.checksum = net.stats.checksum;
  mine.recurrent_events = totals.recurrent_events;
  mine.external_events = totals.external_events;
  mine.spikes = totals.spikes;
  mine.excitatory_spikes = totals.excitatory_spikes;
  mine.index_bytes = net.incoming.index_bytes() + net.axon_bytes();
  mine.ring_bytes = worker.ring().capacity_bytes();
  mine.buffer_high_water = net.stats.buffer_high_water;
  mine.counter_messages = xs.counter_messages;
  mine.payload_messages = xs.payload_messages;
  for (std::uint64_t v : xs.spikes_sent) mine.spikes_sent += v;
  for (std::uint64_t v : xs.spikes_received) mine.spikes_received += v;
  mine.construction = net.stats.seconds;
  mine.exchange = totals.exchange_seconds;
  mine.arborize = totals.arborize_seconds;
  mine.integrate = totals.integrate_seconds;
  if (config.record_raster) mine.raster = worker.raster();

  const int me = transport.rank();
  std::vector<partition::Message> out{{0, encode(mine)}};
  std::vector<int> sources;
  if (me == 0) {
    for (int w = 0; w < transport.size(); ++w) sources.push_back(w);
  }
  std::vector<partition::Message> gathered = transport.exchange(std::move(out), sources);
  if (me != 0) return std::nullopt;

  metrics::SimReport r;
  r.grid = std::to_string(config.grid.nx) + "x" + std::to_string(config.grid.ny);
  r.kernel = std::string(connectivity::to_string(config.kernel.kind));
  r.transport = std::string(to_string(config.transport));
  r.workers = config.workers;
  r.seed = config.seed;
  r.timestep_ms = config.timestep_ms;
  r.steps = steps;
  r.sim_seconds = static_cast<double>(steps) * config.timestep_ms * 1e-3;
  r.wall_seconds = wall;
  r.times.simulation = wall;
  r.neurons = config.grid.neurons();
  r.excitatory_neurons = std::uint64_t{config.grid.excitatory_per_column()} * config.grid.columns();
  r.external_synapses_per_neuron = config.external.synapses_per_neuron;
  r.raster_recorded = config.record_raster;

  std::uint64_t outgoing = 0;
  for (const partition::Message& m : gathered) {
    Summary s = decode(m.bytes);
    outgoing += s.outgoing;
    r.recurrent_synapses += s.incoming;
    r.checksum += s.checksum;
    r.recurrent_events += s.recurrent_events;
    r.external_events += s.external_events;
    r.spikes += s.spikes;
    r.excitatory_spikes += s.excitatory_spikes;
    metrics::MemoryReport mem = metrics::memory_accounting(s.incoming, s.outgoing, s.index_bytes);
    mem.ring_bytes = s.ring_bytes;
    mem.buffer_high_water = s.buffer_high_water;
    r.worker_peak_bytes.push_back(mem.record_bytes + mem.source_copy_bytes + mem.index_bytes);
    r.memory += mem;
    r.exchange.counter_messages += s.counter_messages;
    r.exchange.payload_messages += s.payload_messages;
    r.exchange.spikes_sent += s.spikes_sent;
    r.exchange.spikes_received += s.spikes_received;
    if (m.peer == 0) {
      r.times.construction = s.construction;
      r.times.exchange = s.exchange;
      r.times.arborize = s.arborize;
      r.times.integrate = s.integrate;
    }
    r.raster.insert(r.raster.end(), s.raster.begin(), s.raster.end());
  }
  if (outgoing != r.recurrent_synapses) {
    throw partition::ProtocolError("run: workers generated " + std::to_string(outgoing) + " synapses but stored " +
                                   std::to_string(r.recurrent_synapses));
  }
  std::sort(r.raster.begin(), r.raster.end(), spike_before);
  return r;
}

metrics::SimReport run_inprocess(const SimConfig& config) {
  config.validate();
  auto results = partition::run_inprocess(config.workers, config.timeout,
                                          [&](partition::Transport& t) { return run_worker(t, config); });
  return std::move(*results.front());
}

}  // namespace corticarc::engine
