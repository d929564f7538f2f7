#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

#include "corticarc/connectivity/synapse_gen.hpp"
#include "corticarc/engine/external_input.hpp"
#include "corticarc/metrics/report.hpp"
#include "corticarc/partition/transport.hpp"

namespace corticarc::engine {

enum class TransportKind { inprocess, multiprocess };

std::string_view to_string(TransportKind kind);

/// Complete description of one run. `synapses.max_delay_steps` is the
/// ring depth D_max; `timestep_ms` overrides `synapses.timestep_ms`.
struct SimConfig {
  connectivity::GridSpec grid;
  connectivity::KernelSpec kernel;
  connectivity::SynapseGenSpec synapses;
  NeuronParams excitatory;
  NeuronParams inhibitory = [] {
    NeuronParams p;
    p.is_excitatory = false;
    return p;
  }();
  ExternalInputSpec external;

  double timestep_ms = 1.0;
  double duration_s = 1.0;
  std::uint64_t seed = 1;
  bool initial_at_rest = false;  // V = E instead of uniform in [V_r, V_theta)

  int workers = 1;
  TransportKind transport = TransportKind::inprocess;
  std::chrono::milliseconds timeout = partition::kDefaultTimeout;
  std::uint64_t chunk_bytes = std::uint64_t{64} << 20;
  std::uint64_t memory_budget_bytes = std::uint64_t{16} << 30;
  bool record_raster = true;

  void validate() const;
  std::uint64_t steps() const;
  /// Synapse spec with the run timestep applied.
  connectivity::SynapseGenSpec synapse_spec() const;
};

/// Forecast of the bytes a run allocates, from the expected synapse count.
std::uint64_t estimate_memory(const SimConfig& config);

/// Runs construction and simulation as one worker of `transport`'s group.
/// Collective: every rank calls it with the same config. Rank 0 gathers
/// the per-worker results and returns the report; other ranks return
/// nothing.
std::optional<metrics::SimReport> run_worker(partition::Transport& transport, const SimConfig& config);

/// Runs `config.workers` workers as threads of this process.
metrics::SimReport run_inprocess(const SimConfig& config);

/// Thrown before any allocation when estimate_memory exceeds the budget.
class MemoryBudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace corticarc::engine
