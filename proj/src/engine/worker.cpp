#include "corticarc/engine/worker.hpp"

#include <algorithm>
#include <chrono>

namespace corticarc::engine {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

}  // namespace

Worker::Worker(partition::Transport& transport, const SimConfig& config)
    : transport_(transport),
      config_(config),
      pmap_(config.grid, transport.size()),
      generator_(config.grid, config.kernel, config.synapse_spec(), config.seed),
      ring_(config.synapses.max_delay_steps, config.timestep_ms),
      key_(random::key_from_seed(config.seed)) {
  outgoing_.resize(static_cast<std::size_t>(transport.size()));
}

void Worker::construct() {
  partition::ConstructionOptions options;
  options.chunk_bytes = config_.chunk_bytes;
  net_ = partition::construct_network(transport_, pmap_, generator_, options);

  const int me = transport_.rank();
  const auto owned = static_cast<std::uint32_t>(pmap_.owned_neurons(me));
  states_.resize(owned);
  excitatory_.resize(owned);
  gids_.resize(owned);
  for (std::uint32_t local = 0; local < owned; ++local) {
    const NeuronId gid = pmap_.global_id(me, local);
    gids_[local] = gid;
    const bool exc = config_.grid.is_excitatory(gid);
    excitatory_[local] = exc;
    const NeuronParams& p = exc ? config_.excitatory : config_.inhibitory;
    if (config_.initial_at_rest) {
      states_[local] = NeuronState{p.E, 0.0, 0.0};
    } else {
      states_[local] = initial_state(key_, gid, p);
    }
  }
  offsets_.resize(owned + 1);
  external_offsets_.resize(owned + 1);
}

void Worker::step(std::uint64_t t) {
  const double dt = config_.timestep_ms;

  // (1)-(2) spikes of the previous step, packed per target worker.
  auto t0 = Clock::now();
  std::sort(pending_.begin(), pending_.end(), spike_before);
  for (const SpikeEvent& s : pending_) {
    for (std::uint16_t w : net_.target_workers(pmap_.local_index(s.source_neuron))) outgoing_[w].push_back(s);
  }
  const std::vector<partition::AxonalSpikeMessage> arrived =
      partition::deliver_spikes(transport_, t, outgoing_, net_.directory, xstats_);
  pending_.clear();
  totals_.exchange_seconds += seconds_since(t0);

  // (3) arrived spikes enter the ring with their local synapse lists;
  // expansion happens slice by slice as the delays fall due.
  t0 = Clock::now();
  if (t > 0) {
    for (const auto& msg : arrived) {
      for (const SpikeEvent& s : msg.spikes) ring_.insert(t - 1, {s, net_.incoming.synapses_of(s.source_neuron)});
    }
  }
  totals_.arborize_seconds += seconds_since(t0);

  // (4)-(5) inputs due in this step, grouped per neuron and sorted. The
  // ring is walked twice (count, then fill) so due events are stored once.
  t0 = Clock::now();
  const auto owned = static_cast<std::uint32_t>(states_.size());
  external_.clear();
  std::fill(offsets_.begin(), offsets_.end(), 0);
  for (std::uint32_t local = 0; local < owned; ++local) {
    external_offsets_[local] = static_cast<std::uint32_t>(external_.size());
    offsets_[local + 1] = generate_external_events(key_, gids_[local], t, config_.external, dt, external_);
  }
  external_offsets_[owned] = static_cast<std::uint32_t>(external_.size());
  totals_.external_events += external_.size();
  const auto arborize_start = Clock::now();
  std::uint64_t due = 0;
  ring_.for_each_due(t, [&](const RingEvent& e) {
    ++offsets_[e.target + 1];
    ++due;
  });
  totals_.recurrent_events += due;
  double arborize = seconds_since(arborize_start);
  for (std::uint32_t local = 0; local < owned; ++local) offsets_[local + 1] += offsets_[local];
  inputs_.resize(offsets_[owned]);
  for (std::uint32_t local = 0; local < owned; ++local) {
    std::copy(external_.begin() + external_offsets_[local], external_.begin() + external_offsets_[local + 1],
              inputs_.begin() + offsets_[local]);
  }
  {
    // Fill recurrent inputs behind the external ones of each neuron.
    const auto fill_start = Clock::now();
    std::vector<std::uint32_t>& cursor = external_offsets_;
    for (std::uint32_t local = 0; local < owned; ++local) {
      cursor[local] = offsets_[local] + (cursor[local + 1] - cursor[local]);
    }
    ring_.for_each_due(t, [&](const RingEvent& e) { inputs_[cursor[e.target]++] = {e.time, e.source, 0, e.weight}; });
    arborize += seconds_since(fill_start);
  }
  totals_.arborize_seconds += arborize;

  // (6) integration.
  for (std::uint32_t local = 0; local < owned; ++local) {
    const auto first = inputs_.begin() + offsets_[local];
    const auto last = inputs_.begin() + offsets_[local + 1];
    if (first == last) continue;
    if (last - first > 1) std::sort(first, last, [](const InputEvent& a, const InputEvent& b) { return input_before(a, b); });
    const NeuronParams& p = excitatory_[local] ? config_.excitatory : config_.inhibitory;
    const std::size_t before = pending_.size();
    integrate_inputs(states_[local], p, std::span<const InputEvent>(&*first, static_cast<std::size_t>(last - first)),
                     gids_[local], pending_);
    const std::size_t fired = pending_.size() - before;
    totals_.spikes += fired;
    if (excitatory_[local]) totals_.excitatory_spikes += fired;
  }
  if (config_.record_raster) raster_.insert(raster_.end(), pending_.begin(), pending_.end());
  totals_.integrate_seconds += seconds_since(t0) - arborize;
}

}  // namespace corticarc::engine
