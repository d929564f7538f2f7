#pragma once

#include <cstdint>
#include <vector>

#include "corticarc/core/neuron.hpp"
#include "corticarc/random/philox.hpp"

namespace corticarc::engine {

/// Afferent drive from outside the modelled area: `synapses_per_neuron`
/// independent Poisson sources of `rate_hz` each, every one of weight
/// `weight_mv`.
struct ExternalInputSpec {
  double synapses_per_neuron = 0.0;
  double rate_hz = 0.0;
  double weight_mv = 0.0;

  void validate() const;
  /// Expected events per neuron in one step of `timestep_ms`.
  double mean_per_step(double timestep_ms) const { return synapses_per_neuron * rate_hz * timestep_ms * 1e-3; }
};

/// Appends the external inputs of neuron `gid` for step `step`, which
/// covers [step * dt, (step + 1) * dt). The count is Poisson, times are
/// uniform within the step and the draw depends only on (key, gid, step).
/// Returns the number of events appended.
std::uint32_t generate_external_events(random::Key key, NeuronId gid, std::uint64_t step,
                                       const ExternalInputSpec& spec, double timestep_ms,
                                       std::vector<InputEvent>& out);

/// Uniform membrane potential in [V_r, V_theta), c = 0, keyed by gid.
NeuronState initial_state(random::Key key, NeuronId gid, const NeuronParams& params);

}  // namespace corticarc::engine
