#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "corticarc/core/synapse.hpp"

namespace corticarc::partition {

/// Incoming-synapse database of one worker, keyed by source neuron.
///
/// Records are appended list by list while construction messages arrive,
/// then `finalize` sorts the source index and orders every list by
/// (delay, target). Stored targets are worker-local indices.
class IncomingSynapses {
 public:
  struct Entry {
    NeuronId source;
    std::uint32_t count;
    std::uint64_t offset;
  };

  void reserve(std::uint64_t synapses) { records_.reserve(synapses); }

  /// Opens the list of `source`; a source may be added only once.
  void begin_source(NeuronId source);
  void append(const SynapseRecord& record) {
    records_.push_back(record);
    ++index_.back().count;
  }

  void finalize();

  /// Synapses of `source` on this worker, empty if none.
  std::span<const SynapseRecord> synapses_of(NeuronId source) const;

  std::uint64_t synapse_count() const { return records_.size(); }
  std::uint64_t source_count() const { return index_.size(); }
  const std::vector<Entry>& index() const { return index_; }
  std::span<const SynapseRecord> records() const { return records_; }

  std::uint64_t record_bytes() const { return records_.size() * sizeof(SynapseRecord); }
  std::uint64_t index_bytes() const { return index_.size() * sizeof(Entry); }

 private:
  std::vector<SynapseRecord> records_;
  std::vector<Entry> index_;
  bool finalized_ = false;
};

}  // namespace corticarc::partition
