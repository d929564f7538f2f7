#include "corticarc/core/neuron.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace corticarc {

void NeuronParams::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("neuron parameters: " + what); };
  if (!(tau_m > 0.0)) fail("tau_m must be positive");
  if (!(tau_c > 0.0)) fail("tau_c must be positive");
  if (!(C_m > 0.0)) fail("C_m must be positive");
  if (!(tau_arp >= 0.0)) fail("tau_arp must be non-negative");
  if (!(V_r < V_theta)) fail("V_r must lie below V_theta");
  if (!(E < V_theta)) fail("E must lie below V_theta");
  if (g_c < 0.0 || alpha_c < 0.0) fail("g_c and alpha_c must be non-negative");
}

namespace {

// Free evolution of (V, c) over h ms with no refractory clamp.
//
// With u = V - E and k = g_c c0 / C_m the membrane obeys
//   u' = -u / tau_m - k exp(-t / tau_c)
// whose solution is u(h) = exp(-h/tau_m) (u0 - k phi(h)), where
// phi(h) = expm1(h d) / d and d = 1/tau_m - 1/tau_c. phi -> h as d -> 0,
// which is the confluent case.
inline void free_evolve(double& V, double& c, const NeuronParams& p, double h) {
  const double decay_m = std::exp(-h / p.tau_m);
  if (c == 0.0) {
    V = p.E + decay_m * (V - p.E);
    return;
  }
  const double k = p.effective_g_c() * c / p.C_m;
  double decay_c;
  if (std::abs(p.tau_c - p.tau_m) >= 1e-9 * p.tau_m) {
    // exp(-h/tau_c) = exp(-h/tau_m) * exp(h d) reuses the expm1 below.
    const double d = 1.0 / p.tau_m - 1.0 / p.tau_c;
    const double em1 = std::expm1(h * d);
    decay_c = decay_m * (1.0 + em1);
    V = p.E + decay_m * ((V - p.E) - k * (em1 / d));
  } else {
    decay_c = std::exp(-h / p.tau_c);
    V = p.E + decay_m * ((V - p.E) - k * h);
  }
  c *= decay_c;
}

}  // namespace

NeuronState decay_state(const NeuronState& state, const NeuronParams& params, double dt) {
  NeuronState out = state;
  if (!(dt > 0.0)) return out;
  const double t_end = state.last_update + dt;
  double t0 = state.last_update;
  out.last_update = t_end;
  if (t0 < state.refractory_until) {
    const double t_free = std::min(t_end, state.refractory_until);
    out.c *= std::exp(-(t_free - t0) / params.tau_c);
    out.V = params.V_r;
    if (t_end <= state.refractory_until) return out;
    t0 = t_free;
  }
  free_evolve(out.V, out.c, params, t_end - t0);
  return out;
}

std::pair<NeuronState, std::optional<SpikeEvent>> apply_synaptic_input(
    const NeuronState& state, const NeuronParams& params, double weight, double t, NeuronId self) {
  NeuronState out = state;
  out.last_update = t;
  if (t < state.refractory_until) return {out, std::nullopt};
  out.V += weight;
  if (out.V > params.V_theta) {
    out.V = params.V_r;
    out.refractory_until = t + params.tau_arp;
    out.c += params.effective_alpha_c();
    return {out, SpikeEvent{self, t}};
  }
  return {out, std::nullopt};
}

void integrate_inputs(NeuronState& state, const NeuronParams& params,
                      std::span<const InputEvent> events, NeuronId self,
                      std::vector<SpikeEvent>& spikes) {
  assert(std::is_sorted(events.begin(), events.end(), input_before));
  const double alpha = params.effective_alpha_c();
  for (const InputEvent& ev : events) {
    // Times can sit a rounding error behind last_update; treat as simultaneous.
    const double t = std::max(state.last_update, ev.time);
    if (t > state.last_update) state = decay_state(state, params, t - state.last_update);
    state.last_update = t;
    if (t < state.refractory_until) continue;
    state.V += ev.weight;
    if (state.V > params.V_theta) {
      state.V = params.V_r;
      state.refractory_until = t + params.tau_arp;
      state.c += alpha;
      spikes.push_back({self, t});
    }
  }
}

std::pair<NeuronState, std::vector<SpikeEvent>> integrate_input_queue(
    NeuronState state, const NeuronParams& params, std::span<const InputEvent> events,
    NeuronId self) {
  std::vector<SpikeEvent> spikes;
  integrate_inputs(state, params, events, self, spikes);
  return {state, std::move(spikes)};
}

}  // namespace corticarc
