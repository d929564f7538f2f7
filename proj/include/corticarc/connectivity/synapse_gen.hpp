#pragma once

#include <cstdint>
#include <vector>

#include "corticarc/connectivity/stencil.hpp"
#include "corticarc/core/synapse.hpp"
#include "corticarc/random/philox.hpp"

namespace corticarc::connectivity {

enum class DelayKind { uniform, exponential };

/// Weight and delay laws. Weights are Gaussian per (source, target)
/// population pair, truncated so they keep the sign of their mean; delays
/// are drawn in ms and quantized to whole timesteps in [1, max_delay_steps].
struct SynapseGenSpec {
  double weight_ee = 0.15;   // excitatory -> excitatory, mV
  double weight_ei = 0.25;   // excitatory -> inhibitory
  double weight_ie = -0.8;   // inhibitory -> excitatory
  double weight_ii = -0.8;   // inhibitory -> inhibitory
  double weight_sd_ratio = 0.25;
  DelayKind delay_kind = DelayKind::uniform;
  double delay_min_ms = 1.0;
  double delay_max_ms = 8.0;
  double delay_mean_ms = 3.0;
  std::uint16_t max_delay_steps = 8;
  double timestep_ms = 1.0;

  void validate() const;
  double mean_weight(bool source_excitatory, bool target_excitatory) const;
};

struct SynapseParams {
  float weight = 0.0f;
  std::uint16_t delay = 1;
};

/// Precomputed weight and delay laws. One draw normally consumes a single
/// Philox block keyed by (target, source): word 0 gives the delay, words
/// 1-2 a Box-Muller normal; rejected weights continue along the stream.
class SynapseSampler {
 public:
  explicit SynapseSampler(const SynapseGenSpec& spec);

  SynapseParams draw(random::Key key, NeuronId source, NeuronId target, bool source_excitatory,
                     bool target_excitatory) const;

 private:
  DelayKind delay_kind_;
  double delay_lo_ = 1.0;
  double delay_span_ = 1.0;
  double delay_mean_steps_ = 1.0;
  std::uint16_t max_delay_;
  double mean_[2][2];  // [source excitatory][target excitatory]
  double sd_[2][2];
};

/// Weight and delay of the synapse source -> target, keyed by the pair.
SynapseParams draw_synapse_params(random::Key key, NeuronId source, NeuronId target,
                                  bool source_excitatory, bool target_excitatory,
                                  const SynapseGenSpec& spec);

/// Deterministic, partition-independent synapse generator.
///
/// Every (source, target) candidate in the stencil columns is an
/// independent Bernoulli trial whose outcome depends only on
/// (seed, source, target); grid borders clip the stencil. Inhibitory
/// sources project only inside their own column and autapses are skipped.
class SynapseGenerator {
 public:
  SynapseGenerator(const GridSpec& grid, const KernelSpec& kernel, const SynapseGenSpec& spec,
                   std::uint64_t seed);

  const GridSpec& grid() const { return grid_; }
  const Stencil& stencil() const { return stencil_; }
  random::Key key() const { return key_; }

  /// Appends the outgoing synapses of `source`, ordered by target id.
  void generate(NeuronId source, std::vector<SynapseRecord>& out) const;

  /// Calls visit(target_column, count) for every reachable column; no
  /// weights or delays are drawn.
  template <class Visit>
  void count(NeuronId source, Visit&& visit) const;

 private:
  struct ColumnTrial {
    std::uint32_t column;
    NeuronId first;
    NeuronId last;
    std::uint64_t threshold;
    bool local;
  };
  void trials(NeuronId source, std::vector<ColumnTrial>& out) const;
  std::uint64_t count_column(NeuronId source, const ColumnTrial& trial) const;

  GridSpec grid_;
  KernelSpec kernel_;
  SynapseGenSpec spec_;
  SynapseSampler sampler_;
  Stencil stencil_;
  std::vector<std::uint64_t> thresholds_;
  random::Key key_;
};

/// Convenience wrapper building a generator for one source.
std::vector<SynapseRecord> generate_outgoing_synapses(NeuronId source, const GridSpec& grid,
                                                      const KernelSpec& kernel,
                                                      const SynapseGenSpec& spec, std::uint64_t seed);

template <class Visit>
void SynapseGenerator::count(NeuronId source, Visit&& visit) const {
  thread_local std::vector<ColumnTrial> columns;
  columns.clear();
  trials(source, columns);
  for (const ColumnTrial& trial : columns) visit(trial.column, count_column(source, trial));
}

}  // namespace corticarc::connectivity
