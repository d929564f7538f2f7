#include "corticarc/engine/external_input.hpp"

#include <stdexcept>

namespace corticarc::engine {

void ExternalInputSpec::validate() const {
  if (!(synapses_per_neuron >= 0.0)) throw std::invalid_argument("external: synapses_per_neuron must be >= 0");
  if (!(rate_hz >= 0.0)) throw std::invalid_argument("external: rate must be >= 0");
  if (!(weight_mv >= 0.0)) throw std::invalid_argument("external: weight must be >= 0");
}

std::uint32_t generate_external_events(random::Key key, NeuronId gid, std::uint64_t step,
                                       const ExternalInputSpec& spec, double timestep_ms,
                                       std::vector<InputEvent>& out) {
  const double mean = spec.mean_per_step(timestep_ms);
  if (!(mean > 0.0)) return 0;
  random::KeyedStream stream(key, gid, static_cast<std::uint32_t>(step), random::Purpose::external_input);
  const std::uint32_t count = random::poisson(stream, mean);
  const double t0 = static_cast<double>(step) * timestep_ms;
  const float w = static_cast<float>(spec.weight_mv);
  for (std::uint32_t k = 0; k < count; ++k) {
    out.push_back({t0 + stream.next_unit() * timestep_ms, kExternalSource, k, w});
  }
  return count;
}

NeuronState initial_state(random::Key key, NeuronId gid, const NeuronParams& params) {
  random::KeyedStream stream(key, gid, 0, random::Purpose::initial_state);
  NeuronState s;
  s.V = params.V_r + stream.next_unit() * (params.V_theta - params.V_r);
  s.c = 0.0;
  s.last_update = 0.0;
  return s;
}

}  // namespace corticarc::engine
