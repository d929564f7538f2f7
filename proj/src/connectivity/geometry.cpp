#include "corticarc/connectivity/geometry.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace corticarc::connectivity {

void GridSpec::validate() const {
  if (nx < 1 || ny < 1) throw std::invalid_argument("grid: nx and ny must be at least 1");
  if (!(spacing_um > 0.0)) throw std::invalid_argument("grid: spacing must be positive");
  if (neurons_per_column < 2) throw std::invalid_argument("grid: neurons_per_column must be at least 2");
  if (!(excitatory_fraction >= 0.0 && excitatory_fraction <= 1.0))
    throw std::invalid_argument("grid: excitatory_fraction must lie in [0, 1]");
  if (neurons() >= std::numeric_limits<NeuronId>::max())
    throw std::invalid_argument("grid: neuron count exceeds 32-bit ids");
}

std::uint32_t GridSpec::excitatory_per_column() const {
  return static_cast<std::uint32_t>(std::floor(excitatory_fraction * neurons_per_column + 1e-9));
}

std::string_view to_string(KernelKind kind) {
  return kind == KernelKind::gaussian ? "gaussian" : "exponential";
}

void KernelSpec::validate() const {
  if (!(amplitude > 0.0 && amplitude <= 1.0)) throw std::invalid_argument("kernel: amplitude must lie in (0, 1]");
  if (!(scale_um > 0.0)) throw std::invalid_argument("kernel: scale must be positive");
  if (!(cutoff_p > 0.0)) throw std::invalid_argument("kernel: cutoff must be positive");
  if (!(local_p >= 0.0 && local_p <= 1.0)) throw std::invalid_argument("kernel: local_p must lie in [0, 1]");
}

double kernel_value(const KernelSpec& kernel, double r_um) {
  if (kernel.kind == KernelKind::gaussian) {
    return kernel.amplitude * std::exp(-(r_um * r_um) / (2.0 * kernel.scale_um * kernel.scale_um));
  }
  return kernel.amplitude * std::exp(-r_um / kernel.scale_um);
}

double kernel_probability(const KernelSpec& kernel, double r_um) {
  if (!(r_um > 0.0)) {
    throw std::invalid_argument("kernel_probability: distance must be positive, got " + std::to_string(r_um));
  }
  return kernel_value(kernel, r_um);
}

}  // namespace corticarc::connectivity
