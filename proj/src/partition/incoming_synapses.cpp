#include "corticarc/partition/incoming_synapses.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace corticarc::partition {

void IncomingSynapses::begin_source(NeuronId source) {
  if (finalized_) throw std::logic_error("incoming synapses: database already finalized");
  index_.push_back({source, 0, records_.size()});
}

void IncomingSynapses::finalize() {
  std::sort(index_.begin(), index_.end(), [](const Entry& a, const Entry& b) { return a.source < b.source; });
  for (std::size_t k = 1; k < index_.size(); ++k) {
    if (index_[k].source == index_[k - 1].source) {
      throw std::logic_error("incoming synapses: source " + std::to_string(index_[k].source) + " listed twice");
    }
  }
  // Lists arrive ordered by target, so a stable counting sort on the delay
  // gives (delay, target) order.
  std::vector<SynapseRecord> scratch;
  std::vector<std::uint32_t> bucket;
  for (const Entry& e : index_) {
    auto first = records_.begin() + static_cast<std::ptrdiff_t>(e.offset);
    auto last = first + e.count;
    const bool by_target = std::is_sorted(first, last, [](const SynapseRecord& a, const SynapseRecord& b) {
      return a.target_neuron < b.target_neuron;
    });
    if (!by_target) {
      std::sort(first, last, [](const SynapseRecord& a, const SynapseRecord& b) {
        return a.delay != b.delay ? a.delay < b.delay : a.target_neuron < b.target_neuron;
      });
      continue;
    }
    std::uint16_t max_delay = 0;
    for (auto it = first; it != last; ++it) max_delay = std::max(max_delay, it->delay);
    bucket.assign(std::size_t{max_delay} + 2, 0);
    for (auto it = first; it != last; ++it) ++bucket[it->delay + 1u];
    for (std::size_t d = 1; d < bucket.size(); ++d) bucket[d] += bucket[d - 1];
    scratch.resize(e.count);
    for (auto it = first; it != last; ++it) scratch[bucket[it->delay]++] = *it;
    std::copy(scratch.begin(), scratch.end(), first);
  }
  finalized_ = true;
}

std::span<const SynapseRecord> IncomingSynapses::synapses_of(NeuronId source) const {
  auto it = std::lower_bound(index_.begin(), index_.end(), source,
                             [](const Entry& e, NeuronId s) { return e.source < s; });
  if (it == index_.end() || it->source != source) return {};
  return std::span<const SynapseRecord>(records_).subspan(it->offset, it->count);
}

}  // namespace corticarc::partition
