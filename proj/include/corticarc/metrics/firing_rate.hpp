#pragma once

#include <span>
#include <vector>

#include "corticarc/connectivity/geometry.hpp"
#include "corticarc/core/neuron.hpp"

namespace corticarc::metrics {

struct RateStats {
  double mean_hz = 0.0;
  double excitatory_hz = 0.0;
  double inhibitory_hz = 0.0;
  double bin_ms = 0.0;
  std::vector<double> series_hz;  // network rate per bin, for spectral tools
};

/// Population and network rates of a raster covering [0, duration_ms).
RateStats firing_rate_stats(std::span<const SpikeEvent> raster, const connectivity::GridSpec& grid,
                            double duration_ms, double bin_ms = 1.0);

}  // namespace corticarc::metrics
