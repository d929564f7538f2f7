#pragma once

#include <cstdint>
#include <string_view>
#include <utility>

#include "corticarc/core/neuron.hpp"

namespace corticarc::connectivity {

/// Square grid of cortical columns. Column (i, j) has index j * nx + i and
/// owns the contiguous neuron ids [index * n, (index + 1) * n); the first
/// floor(excitatory_fraction * n) of them are excitatory.
struct GridSpec {
  int nx = 1;
  int ny = 1;
  double spacing_um = 100.0;
  std::uint32_t neurons_per_column = 1240;
  double excitatory_fraction = 0.8;

  void validate() const;

  std::uint32_t columns() const { return static_cast<std::uint32_t>(nx) * static_cast<std::uint32_t>(ny); }
  std::uint64_t neurons() const { return std::uint64_t{columns()} * neurons_per_column; }
  std::uint32_t excitatory_per_column() const;

  std::uint32_t column_index(int i, int j) const { return static_cast<std::uint32_t>(j * nx + i); }
  std::pair<int, int> column_coords(std::uint32_t column) const {
    return {static_cast<int>(column % static_cast<std::uint32_t>(nx)),
            static_cast<int>(column / static_cast<std::uint32_t>(nx))};
  }
  std::uint32_t column_of(NeuronId gid) const { return gid / neurons_per_column; }
  NeuronId first_neuron(std::uint32_t column) const { return column * neurons_per_column; }
  bool is_excitatory(NeuronId gid) const { return gid % neurons_per_column < excitatory_per_column(); }
};

enum class KernelKind { gaussian, exponential };

std::string_view to_string(KernelKind kind);

/// Distance-decay connection law between columns. `scale_um` is sigma for
/// the Gaussian kernel and lambda for the exponential one.
struct KernelSpec {
  KernelKind kind = KernelKind::gaussian;
  double amplitude = 0.05;
  double scale_um = 100.0;
  double cutoff_p = 1e-3;
  double local_p = 0.8;

  void validate() const;
};

/// A * exp(-r^2 / (2 sigma^2)) or A * exp(-r / lambda). Requires r > 0; the
/// same-column probability is `local_p`, not a kernel value.
double kernel_probability(const KernelSpec& kernel, double r_um);

/// Kernel shape evaluated at any r >= 0 (used for the stencil cutoff).
double kernel_value(const KernelSpec& kernel, double r_um);

}  // namespace corticarc::connectivity
