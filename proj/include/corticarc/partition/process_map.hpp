#pragma once

#include <cstdint>
#include <vector>

#include "corticarc/connectivity/geometry.hpp"

namespace corticarc::partition {

/// Rectangular tiling of the column grid over workers.
///
/// The worker count is factored as px * py with |px - py| minimal (px >= py
/// where the grid allows); px splits the x axis and py the y axis, each as
/// evenly as integer division permits. Worker w owns block
/// (w % px, w / px).
class ProcessMap {
 public:
  struct Block {
    int x0, x1, y0, y1;  // half-open column ranges
  };

  ProcessMap(const connectivity::GridSpec& grid, int worker_count);

  int worker_count() const { return workers_; }
  int px() const { return px_; }
  int py() const { return py_; }
  const connectivity::GridSpec& grid() const { return grid_; }

  Block block(int worker) const;
  int owner(std::uint32_t column) const { return owner_[column]; }
  int owner_of_neuron(NeuronId gid) const { return owner_[grid_.column_of(gid)]; }

  /// Columns of `worker` in ascending index order.
  const std::vector<std::uint32_t>& owned_columns(int worker) const { return owned_[static_cast<std::size_t>(worker)]; }
  std::uint64_t owned_neurons(int worker) const;

  /// Local numbering: owned columns in ascending order, neurons ascending.
  std::uint32_t local_index(NeuronId gid) const;
  NeuronId global_id(int worker, std::uint32_t local) const;

 private:
  connectivity::GridSpec grid_;
  int workers_;
  int px_ = 1;
  int py_ = 1;
  std::vector<int> x_cuts_;
  std::vector<int> y_cuts_;
  std::vector<int> owner_;
  std::vector<std::uint32_t> slot_;
  std::vector<std::vector<std::uint32_t>> owned_;
};

ProcessMap map_columns_to_workers(const connectivity::GridSpec& grid, int worker_count);

}  // namespace corticarc::partition
