#include "corticarc/connectivity/stencil.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace corticarc::connectivity {

bool Stencil::contains(int di, int dj) const {
  return std::any_of(entries.begin(), entries.end(),
                     [&](const StencilEntry& e) { return e.di == di && e.dj == dj; });
}

namespace {

double nearest_cell_distance(int di, int dj, double spacing) {
  const int gx = std::max(std::abs(di) - 1, 0);
  const int gy = std::max(std::abs(dj) - 1, 0);
  return spacing * std::hypot(gx, gy);
}

bool in_grid(const GridSpec& grid, int i, int j) { return i >= 0 && i < grid.nx && j >= 0 && j < grid.ny; }

}  // namespace

Stencil compute_stencil(const KernelSpec& kernel, const GridSpec& grid) {
  kernel.validate();
  Stencil stencil;
  stencil.entries.push_back({0, 0, kernel.local_p});
  // The kernels decay monotonically, so once the closest cell of ring R is
  // below the cutoff every ring beyond it is too.
  for (int ring = 1;; ++ring) {
    if (kernel_value(kernel, grid.spacing_um * (ring - 1)) <= kernel.cutoff_p) break;
    for (int dj = -ring; dj <= ring; ++dj) {
      for (int di = -ring; di <= ring; ++di) {
        if (std::max(std::abs(di), std::abs(dj)) != ring) continue;
        if (kernel_value(kernel, nearest_cell_distance(di, dj, grid.spacing_um)) <= kernel.cutoff_p) continue;
        const double r = grid.spacing_um * std::hypot(di, dj);
        stencil.entries.push_back({di, dj, kernel_probability(kernel, r)});
        stencil.radius = std::max(stencil.radius, ring);
      }
    }
  }
  std::sort(stencil.entries.begin(), stencil.entries.end(), [](const StencilEntry& a, const StencilEntry& b) {
    return a.dj != b.dj ? a.dj < b.dj : a.di < b.di;
  });
  return stencil;
}

Fanout expected_fanout(const KernelSpec& kernel, const GridSpec& grid) {
  const Stencil stencil = compute_stencil(kernel, grid);
  const double n = grid.neurons_per_column;
  Fanout f;
  for (const StencilEntry& e : stencil.entries) {
    if (e.is_local()) {
      f.local = e.probability * (n - 1.0);
    } else {
      f.remote_excitatory += n * e.probability;
    }
  }
  const double exc_share = static_cast<double>(grid.excitatory_per_column()) / n;
  f.remote = exc_share * f.remote_excitatory;
  f.average_total = f.local + f.remote;
  return f;
}

Fanout expected_fanout_at(const Stencil& stencil, const GridSpec& grid, std::uint32_t column) {
  const auto [ci, cj] = grid.column_coords(column);
  const double n = grid.neurons_per_column;
  Fanout f;
  for (const StencilEntry& e : stencil.entries) {
    if (e.is_local()) {
      f.local = e.probability * (n - 1.0);
    } else if (in_grid(grid, ci + e.di, cj + e.dj)) {
      f.remote_excitatory += n * e.probability;
    }
  }
  const double exc_share = static_cast<double>(grid.excitatory_per_column()) / n;
  f.remote = exc_share * f.remote_excitatory;
  f.average_total = f.local + f.remote;
  return f;
}

NetworkForecast forecast_network(const KernelSpec& kernel, const GridSpec& grid) {
  grid.validate();
  const Stencil stencil = compute_stencil(kernel, grid);
  NetworkForecast out;
  out.columns = grid.columns();
  out.neurons = grid.neurons();
  out.stencil_width = stencil.width();
  out.interior = expected_fanout(kernel, grid);

  const double n = grid.neurons_per_column;
  const double n_exc = grid.excitatory_per_column();
  const double local_p = kernel.local_p;
  const double local_mean = n * (n - 1.0) * local_p;
  const double local_var = n * (n - 1.0) * local_p * (1.0 - local_p);
  for (std::uint32_t col = 0; col < grid.columns(); ++col) {
    const auto [ci, cj] = grid.column_coords(col);
    double remote_mean = 0.0;
    double remote_var = 0.0;
    for (const StencilEntry& e : stencil.entries) {
      if (e.is_local() || !in_grid(grid, ci + e.di, cj + e.dj)) continue;
      remote_mean += e.probability;
      remote_var += e.probability * (1.0 - e.probability);
    }
    out.recurrent_synapses += local_mean + n_exc * n * remote_mean;
    out.recurrent_variance += local_var + n_exc * n * remote_var;
  }
  return out;
}

std::string stencil_matrix(const Stencil& stencil, const GridSpec& grid) {
  const double n = grid.neurons_per_column;
  const double n_exc = grid.excitatory_per_column();
  std::string text;
  char cell[32];
  for (int dj = -stencil.radius; dj <= stencil.radius; ++dj) {
    for (int di = -stencil.radius; di <= stencil.radius; ++di) {
      double thousands = 0.0;
      for (const StencilEntry& e : stencil.entries) {
        if (e.di != di || e.dj != dj) continue;
        const double candidates = e.is_local() ? n - 1.0 : n;
        thousands = n_exc * candidates * e.probability / 1000.0;
      }
      std::snprintf(cell, sizeof cell, di == -stencil.radius ? "%.1f" : "\t%.1f", thousands);
      text += cell;
    }
    text += '\n';
  }
  return text;
}

}  // namespace corticarc::connectivity
