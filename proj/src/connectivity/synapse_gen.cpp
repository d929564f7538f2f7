#include "corticarc/connectivity/synapse_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "corticarc/simd/kernels.hpp"

namespace corticarc::connectivity {

void SynapseGenSpec::validate() const {
  if (!(timestep_ms > 0.0)) throw std::invalid_argument("synapse: timestep must be positive");
  if (max_delay_steps < 1) throw std::invalid_argument("synapse: max_delay must be at least one timestep");
  if (!(weight_sd_ratio >= 0.0)) throw std::invalid_argument("synapse: weight_sd_ratio must be non-negative");
  if (weight_ee < 0.0 || weight_ei < 0.0) throw std::invalid_argument("synapse: excitatory weights must be >= 0");
  if (weight_ie > 0.0 || weight_ii > 0.0) throw std::invalid_argument("synapse: inhibitory weights must be <= 0");
  if (delay_kind == DelayKind::uniform && !(delay_min_ms <= delay_max_ms))
    throw std::invalid_argument("synapse: delay_min must not exceed delay_max");
  if (delay_kind == DelayKind::exponential && !(delay_mean_ms > 0.0))
    throw std::invalid_argument("synapse: delay_mean must be positive");
}

double SynapseGenSpec::mean_weight(bool source_excitatory, bool target_excitatory) const {
  if (source_excitatory) return target_excitatory ? weight_ee : weight_ei;
  return target_excitatory ? weight_ie : weight_ii;
}

namespace {

std::uint16_t clamp_delay(double steps, std::uint16_t max_steps) {
  if (!(steps >= 1.0)) return 1;
  if (steps >= max_steps) return max_steps;
  return static_cast<std::uint16_t>(steps);
}

}  // namespace

SynapseSampler::SynapseSampler(const SynapseGenSpec& spec)
    : delay_kind_(spec.delay_kind), max_delay_(spec.max_delay_steps) {
  delay_lo_ = std::max(1.0, std::round(spec.delay_min_ms / spec.timestep_ms));
  const double hi = std::max(delay_lo_, std::round(spec.delay_max_ms / spec.timestep_ms));
  delay_span_ = hi - delay_lo_ + 1.0;
  delay_mean_steps_ = spec.delay_mean_ms / spec.timestep_ms;
  for (int s = 0; s < 2; ++s) {
    for (int t = 0; t < 2; ++t) {
      mean_[s][t] = spec.mean_weight(s == 1, t == 1);
      sd_[s][t] = spec.weight_sd_ratio * std::abs(mean_[s][t]);
    }
  }
}

SynapseParams SynapseSampler::draw(random::Key key, NeuronId source, NeuronId target, bool source_excitatory,
                                   bool target_excitatory) const {
  random::KeyedStream stream(key, target, source, random::Purpose::synapse_params);
  constexpr double k32 = 0x1.0p-32;
  SynapseParams out;
  const std::uint32_t w0 = stream.next_u32();
  if (delay_kind_ == DelayKind::uniform) {
    out.delay = clamp_delay(delay_lo_ + std::floor(w0 * k32 * delay_span_), max_delay_);
  } else {
    out.delay = clamp_delay(std::ceil(-delay_mean_steps_ * std::log((w0 + 0.5) * k32)), max_delay_);
  }

  const double mean = mean_[source_excitatory][target_excitatory];
  const double sd = sd_[source_excitatory][target_excitatory];
  double w = mean;
  if (sd > 0.0) {
    for (int attempt = 0;; ++attempt) {
      const double u1 = (stream.next_u32() + 0.5) * k32;
      const double u2 = stream.next_u32() * k32;
      w = mean + sd * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
      if ((mean > 0.0 && w >= 0.0) || (mean < 0.0 && w <= 0.0)) break;
      if (attempt == 64) {
        w = 0.0;
        break;
      }
    }
  }
  out.weight = static_cast<float>(w);
  return out;
}

SynapseParams draw_synapse_params(random::Key key, NeuronId source, NeuronId target,
                                  bool source_excitatory, bool target_excitatory,
                                  const SynapseGenSpec& spec) {
  return SynapseSampler(spec).draw(key, source, target, source_excitatory, target_excitatory);
}

SynapseGenerator::SynapseGenerator(const GridSpec& grid, const KernelSpec& kernel,
                                   const SynapseGenSpec& spec, std::uint64_t seed)
    : grid_(grid), kernel_(kernel), spec_(spec), sampler_(spec), stencil_(compute_stencil(kernel, grid)),
      key_(random::key_from_seed(seed)) {
  grid_.validate();
  spec_.validate();
  thresholds_.reserve(stencil_.entries.size());
  for (const StencilEntry& e : stencil_.entries) thresholds_.push_back(simd::threshold_for(e.probability));
}

void SynapseGenerator::trials(NeuronId source, std::vector<ColumnTrial>& out) const {
  const std::uint32_t column = grid_.column_of(source);
  const auto [ci, cj] = grid_.column_coords(column);
  const bool excitatory = grid_.is_excitatory(source);
  for (std::size_t k = 0; k < stencil_.entries.size(); ++k) {
    const StencilEntry& e = stencil_.entries[k];
    if (!excitatory && !e.is_local()) continue;
    const int ti = ci + e.di;
    const int tj = cj + e.dj;
    if (ti < 0 || ti >= grid_.nx || tj < 0 || tj >= grid_.ny) continue;
    const std::uint32_t target = grid_.column_index(ti, tj);
    const NeuronId first = grid_.first_neuron(target);
    out.push_back({target, first, first + grid_.neurons_per_column, thresholds_[k], e.is_local()});
  }
}

std::uint64_t SynapseGenerator::count_column(NeuronId source, const ColumnTrial& trial) const {
  const simd::SweepArgs args{key_, source, static_cast<std::uint32_t>(random::Purpose::connect),
                             trial.first, trial.last, trial.threshold};
  std::uint64_t n = simd::kernels().bernoulli_count(args);
  if (trial.local && simd::accepts(args, source)) --n;
  return n;
}

void SynapseGenerator::generate(NeuronId source, std::vector<SynapseRecord>& out) const {
  thread_local std::vector<ColumnTrial> columns;
  thread_local std::vector<std::uint32_t> accepted;
  columns.clear();
  trials(source, columns);
  const bool source_exc = grid_.is_excitatory(source);
  const std::uint32_t n_exc = grid_.excitatory_per_column();
  const auto& kernels = simd::kernels();
  for (const ColumnTrial& trial : columns) {
    accepted.clear();
    const simd::SweepArgs args{key_, source, static_cast<std::uint32_t>(random::Purpose::connect),
                               trial.first, trial.last, trial.threshold};
    kernels.bernoulli_sweep(args, accepted);
    for (const std::uint32_t target : accepted) {
      if (target == source) continue;
      const SynapseParams p = sampler_.draw(key_, source, target, source_exc, target - trial.first < n_exc);
      out.push_back({target, p.weight, p.delay, 0});
    }
  }
}

std::vector<SynapseRecord> generate_outgoing_synapses(NeuronId source, const GridSpec& grid,
                                                      const KernelSpec& kernel,
                                                      const SynapseGenSpec& spec, std::uint64_t seed) {
  if (source >= grid.neurons()) throw std::out_of_range("generate_outgoing_synapses: invalid source id");
  const SynapseGenerator generator(grid, kernel, spec, seed);
  std::vector<SynapseRecord> out;
  generator.generate(source, out);
  return out;
}

}  // namespace corticarc::connectivity
