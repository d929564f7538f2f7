#include "corticarc/partition/process_map.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>

namespace corticarc::partition {

namespace {

// Factor pairs (a, b), a * b = n, most square first, a >= b before a < b.
std::vector<std::pair<int, int>> factor_pairs(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int b = 1; b * b <= n; ++b) {
    if (n % b != 0) continue;
    pairs.emplace_back(n / b, b);
    if (n / b != b) pairs.emplace_back(b, n / b);
  }
  std::stable_sort(pairs.begin(), pairs.end(), [](auto l, auto r) {
    const int dl = std::abs(l.first - l.second);
    const int dr = std::abs(r.first - r.second);
    if (dl != dr) return dl < dr;
    return l.first > r.first;
  });
  return pairs;
}

std::vector<int> even_cuts(int length, int parts) {
  std::vector<int> cuts(static_cast<std::size_t>(parts) + 1);
  for (int k = 0; k <= parts; ++k) cuts[static_cast<std::size_t>(k)] = static_cast<int>(std::int64_t{length} * k / parts);
  return cuts;
}

}  // namespace

ProcessMap::ProcessMap(const connectivity::GridSpec& grid, int worker_count) : grid_(grid), workers_(worker_count) {
  grid_.validate();
  if (worker_count < 1) throw std::invalid_argument("process map: worker count must be at least 1");
  if (static_cast<std::uint64_t>(worker_count) > grid_.columns()) {
    throw std::invalid_argument("process map: " + std::to_string(worker_count) + " workers exceed the " +
                                std::to_string(grid_.columns()) + " columns of the grid");
  }
  bool found = false;
  for (auto [a, b] : factor_pairs(worker_count)) {
    if (a <= grid_.nx && b <= grid_.ny) {
      px_ = a;
      py_ = b;
      found = true;
      break;
    }
  }
  if (!found) {
    throw std::invalid_argument("process map: no rectangular tiling of a " + std::to_string(grid_.nx) + "x" +
                                std::to_string(grid_.ny) + " grid into " + std::to_string(worker_count) +
                                " blocks");
  }
  x_cuts_ = even_cuts(grid_.nx, px_);
  y_cuts_ = even_cuts(grid_.ny, py_);

  owner_.assign(grid_.columns(), -1);
  slot_.assign(grid_.columns(), 0);
  owned_.assign(static_cast<std::size_t>(workers_), {});
  for (int by = 0; by < py_; ++by) {
    for (int bx = 0; bx < px_; ++bx) {
      const int w = by * px_ + bx;
      for (int j = y_cuts_[static_cast<std::size_t>(by)]; j < y_cuts_[static_cast<std::size_t>(by) + 1]; ++j) {
        for (int i = x_cuts_[static_cast<std::size_t>(bx)]; i < x_cuts_[static_cast<std::size_t>(bx) + 1]; ++i) {
          owner_[grid_.column_index(i, j)] = w;
        }
      }
    }
  }
  for (std::uint32_t col = 0; col < grid_.columns(); ++col) {
    auto& list = owned_[static_cast<std::size_t>(owner_[col])];
    slot_[col] = static_cast<std::uint32_t>(list.size());
    list.push_back(col);
  }
}

ProcessMap::Block ProcessMap::block(int worker) const {
  const auto bx = static_cast<std::size_t>(worker % px_);
  const auto by = static_cast<std::size_t>(worker / px_);
  return {x_cuts_[bx], x_cuts_[bx + 1], y_cuts_[by], y_cuts_[by + 1]};
}

std::uint64_t ProcessMap::owned_neurons(int worker) const {
  return std::uint64_t{owned_columns(worker).size()} * grid_.neurons_per_column;
}

std::uint32_t ProcessMap::local_index(NeuronId gid) const {
  const std::uint32_t col = grid_.column_of(gid);
  return slot_[col] * grid_.neurons_per_column + (gid - grid_.first_neuron(col));
}

NeuronId ProcessMap::global_id(int worker, std::uint32_t local) const {
  const std::uint32_t n = grid_.neurons_per_column;
  return grid_.first_neuron(owned_columns(worker)[local / n]) + local % n;
}

ProcessMap map_columns_to_workers(const connectivity::GridSpec& grid, int worker_count) {
  return ProcessMap(grid, worker_count);
}

}  // namespace corticarc::partition
