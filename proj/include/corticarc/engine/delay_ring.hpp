#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "corticarc/core/neuron.hpp"
#include "corticarc/core/synapse.hpp"

namespace corticarc::engine {

/// A synaptic current due in the current step.
struct RingEvent {
  double time = 0.0;  // emission time + delay
  NeuronId source = 0;
  std::uint32_t target = 0;  // worker-local neuron index
  float weight = 0.0f;
};

/// A spike that reached this worker, with its local synapses ordered by
/// (delay, target).
struct ArrivedSpike {
  SpikeEvent spike;
  std::span<const SynapseRecord> synapses;
};

/// Arrived spikes of the last max_delay emission steps. Arborization is
/// deferred to arrival: draining step t expands, for every d in
/// [1, max_delay], the delay-d slice of the spikes emitted at t - d. Memory
/// therefore scales with spikes in flight, not with synaptic events.
class DelayRing {
 public:
  DelayRing(std::uint16_t max_delay, double timestep_ms);

  std::uint16_t max_delay() const { return max_delay_; }

  /// Keeps `spike` until its last delay slice is due. Emission steps must
  /// not decrease between calls.
  void insert(std::uint64_t emission_step, const ArrivedSpike& spike);

  /// Calls `visit(RingEvent)` for every event arriving in `step`, ordered
  /// by delay, then by insertion, then by target. Nothing is removed, so a
  /// caller may walk the same step twice.
  template <class Visit>
  void for_each_due(std::uint64_t step, Visit&& visit) const;

  /// Replaces `out` with the events arriving in `step`.
  void drain(std::uint64_t step, std::vector<RingEvent>& out) const;

  /// Spikes currently held.
  std::uint64_t held() const;
  std::uint64_t capacity_bytes() const;

 private:
  std::uint16_t max_delay_;
  double dt_;
  std::vector<std::vector<ArrivedSpike>> buckets_;
  std::vector<std::uint64_t> bucket_step_;
};

template <class Visit>
void DelayRing::for_each_due(std::uint64_t step, Visit&& visit) const {
  for (std::uint16_t d = 1; d <= max_delay_ && d <= step; ++d) {
    const std::uint64_t emitted = step - d;
    const std::size_t b = emitted % max_delay_;
    if (bucket_step_[b] != emitted) continue;
    for (const ArrivedSpike& a : buckets_[b]) {
      for (const SynapseRecord& r : std::ranges::equal_range(a.synapses, d, {}, &SynapseRecord::delay)) {
        visit(RingEvent{a.spike.emission_time + r.delay * dt_, a.spike.source_neuron, r.target_neuron, r.weight});
      }
    }
  }
}

}  // namespace corticarc::engine
