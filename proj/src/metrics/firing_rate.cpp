#include "corticarc/metrics/firing_rate.hpp"

#include <cmath>
#include <stdexcept>

namespace corticarc::metrics {

RateStats firing_rate_stats(std::span<const SpikeEvent> raster, const connectivity::GridSpec& grid,
                            double duration_ms, double bin_ms) {
  if (!(bin_ms > 0.0)) throw std::invalid_argument("firing rate: bin width must be positive");
  RateStats out;
  out.bin_ms = bin_ms;
  if (!(duration_ms > 0.0)) return out;
  const std::size_t bins = static_cast<std::size_t>(std::ceil(duration_ms / bin_ms));
  std::vector<std::uint64_t> counts(bins, 0);
  std::uint64_t exc = 0;
  for (const SpikeEvent& s : raster) {
    if (grid.is_excitatory(s.source_neuron)) ++exc;
    const auto b = static_cast<std::size_t>(s.emission_time / bin_ms);
    if (s.emission_time >= 0.0 && b < bins) ++counts[b];
  }
  const double neurons = static_cast<double>(grid.neurons());
  const double exc_neurons = static_cast<double>(grid.excitatory_per_column()) * grid.columns();
  const double seconds = duration_ms * 1e-3;
  out.mean_hz = static_cast<double>(raster.size()) / (neurons * seconds);
  out.excitatory_hz = exc_neurons > 0 ? static_cast<double>(exc) / (exc_neurons * seconds) : 0.0;
  out.inhibitory_hz = neurons > exc_neurons
                          ? static_cast<double>(raster.size() - exc) / ((neurons - exc_neurons) * seconds)
                          : 0.0;
  out.series_hz.reserve(bins);
  for (std::uint64_t c : counts) out.series_hz.push_back(static_cast<double>(c) / (neurons * bin_ms * 1e-3));
  return out;
}

}  // namespace corticarc::metrics
