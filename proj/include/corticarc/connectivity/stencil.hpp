#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corticarc/connectivity/geometry.hpp"

namespace corticarc::connectivity {

struct StencilEntry {
  int di = 0;
  int dj = 0;
  /// Connection probability for a neuron pair across this offset; local_p
  /// for (0, 0), the kernel at centre distance otherwise.
  double probability = 0.0;

  bool is_local() const { return di == 0 && dj == 0; }
};

/// Column offsets a source column projects to, sorted by (dj, di) so that
/// target columns come out in ascending index order.
struct Stencil {
  std::vector<StencilEntry> entries;
  int radius = 0;

  int width() const { return 2 * radius + 1; }
  bool contains(int di, int dj) const;
};

/// Offsets whose column footprint comes within kernel range above the
/// cutoff. A column is a square cell of side `spacing_um`; offset (di, dj)
/// is kept when the kernel evaluated at the nearest distance between the
/// two cells, spacing * hypot(max(|di|-1, 0), max(|dj|-1, 0)), exceeds
/// `cutoff_p`. The local offset (0, 0) is always present.
Stencil compute_stencil(const KernelSpec& kernel, const GridSpec& grid);

/// Expected synapses projected by one source neuron.
struct Fanout {
  double local = 0.0;               // same column, autapse excluded
  double remote_excitatory = 0.0;   // remote, per excitatory source
  double remote = 0.0;              // remote, averaged over populations
  double average_total = 0.0;       // local + remote, population average
};

/// Fanout of a column far from any border.
Fanout expected_fanout(const KernelSpec& kernel, const GridSpec& grid);

/// Fanout of a source in `column`, with the stencil clipped at grid borders.
Fanout expected_fanout_at(const Stencil& stencil, const GridSpec& grid, std::uint32_t column);

/// Whole-network expectation of the recurrent synapse count (borders
/// clipped) and its Binomial variance.
struct NetworkForecast {
  std::uint64_t columns = 0;
  std::uint64_t neurons = 0;
  int stencil_width = 0;
  double recurrent_synapses = 0.0;
  double recurrent_variance = 0.0;
  Fanout interior;
};

NetworkForecast forecast_network(const KernelSpec& kernel, const GridSpec& grid);

/// Expected synapses (thousands) projected by the excitatory neurons of one
/// interior column onto each stencil column, as a text matrix.
std::string stencil_matrix(const Stencil& stencil, const GridSpec& grid);

}  // namespace corticarc::connectivity
