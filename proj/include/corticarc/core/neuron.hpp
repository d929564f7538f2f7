#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace corticarc {

using NeuronId = std::uint32_t;

/// Constants of the leaky integrate-and-fire neuron with spike-frequency
/// adaptation. Times are in ms, potentials in mV.
///
/// The defaults are placeholder values chosen for this project; they are
/// not measured constants and every field can be overridden per population.
struct NeuronParams {
  double tau_m = 20.0;
  double C_m = 1.0;
  double E = -65.0;
  double tau_c = 150.0;
  double g_c = 0.5;
  double V_theta = -50.0;
  double V_r = -65.0;
  double tau_arp = 2.0;
  double alpha_c = 1.0;
  bool is_excitatory = true;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;

  /// Inhibitory neurons carry no adaptation current.
  double effective_g_c() const { return is_excitatory ? g_c : 0.0; }
  double effective_alpha_c() const { return is_excitatory ? alpha_c : 0.0; }
};

struct NeuronState {
  double V = -65.0;
  double c = 0.0;
  double last_update = 0.0;
  double refractory_until = -std::numeric_limits<double>::infinity();
};

/// Address-event: which neuron fired and when (ms).
struct SpikeEvent {
  NeuronId source_neuron = 0;
  double emission_time = 0.0;

  friend bool operator==(const SpikeEvent&, const SpikeEvent&) = default;
};

/// Orders spikes by (emission time, source id).
inline bool spike_before(const SpikeEvent& a, const SpikeEvent& b) {
  if (a.emission_time != b.emission_time) return a.emission_time < b.emission_time;
  return a.source_neuron < b.source_neuron;
}

/// Source id carried by external (Poisson) inputs; sorts after every
/// recurrent source at equal time.
inline constexpr NeuronId kExternalSource = std::numeric_limits<NeuronId>::max();

/// One synaptic current arriving at a neuron.
struct InputEvent {
  double time = 0.0;
  NeuronId source = 0;
  std::uint32_t sequence = 0;  // disambiguates external inputs
  float weight = 0.0f;
};

/// Deterministic tie-break: (time, source id, sequence).
inline bool input_before(const InputEvent& a, const InputEvent& b) {
  if (a.time != b.time) return a.time < b.time;
  if (a.source != b.source) return a.source < b.source;
  return a.sequence < b.sequence;
}

/// Free evolution over `dt` ms using the closed-form solution. While the
/// neuron is refractory V stays clamped at V_r and only c decays.
NeuronState decay_state(const NeuronState& state, const NeuronParams& params, double dt);

/// Applies one input of `weight` mV at time `t`. The state must already be
/// decayed to `t`. Returns the spike, if any.
std::pair<NeuronState, std::optional<SpikeEvent>> apply_synaptic_input(
    const NeuronState& state, const NeuronParams& params, double weight, double t,
    NeuronId self = 0);

/// Integrates a time-sorted queue of inputs and returns the spikes emitted
/// in order. The state is left at the time of the last input.
std::pair<NeuronState, std::vector<SpikeEvent>> integrate_input_queue(
    NeuronState state, const NeuronParams& params, std::span<const InputEvent> events,
    NeuronId self = 0);

/// In-place variant used by the engine; appends spikes to `spikes`.
void integrate_inputs(NeuronState& state, const NeuronParams& params,
                      std::span<const InputEvent> events, NeuronId self,
                      std::vector<SpikeEvent>& spikes);

}  // namespace corticarc
