#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "corticarc/connectivity/stencil.hpp"
#include "corticarc/connectivity/synapse_gen.hpp"
#include "oracles/fanout_oracle.hpp"

using namespace corticarc;
using namespace corticarc::connectivity;

namespace {

KernelSpec gaussian() { return KernelSpec{KernelKind::gaussian, 0.05, 100.0, 1e-3, 0.8}; }
KernelSpec exponential() { return KernelSpec{KernelKind::exponential, 0.03, 290.0, 1e-3, 0.8}; }

GridSpec grid(int nx, int ny) {
  GridSpec g;
  g.nx = nx;
  g.ny = ny;
  return g;
}

oracle::KernelCase oracle_case(const KernelSpec& k) {
  oracle::KernelCase c;
  c.gaussian = k.kind == KernelKind::gaussian;
  c.A = k.amplitude;
  c.scale = k.scale_um;
  return c;
}

}  // namespace

TEST_CASE("stencil bounding boxes") {
  const Stencil g = compute_stencil(gaussian(), grid(24, 24));
  CHECK(g.width() == 7);
  CHECK(g.entries.size() == 45);
  const Stencil e = compute_stencil(exponential(), grid(24, 24));
  CHECK(e.width() == 21);
  CHECK(e.entries.size() == 381);
}

TEST_CASE("stencil agrees with brute-force offsets") {
  for (const KernelSpec& k : {gaussian(), exponential()}) {
    const Stencil s = compute_stencil(k, grid(24, 24));
    const oracle::KernelCase c = oracle_case(k);
    const oracle::FanoutCase f = oracle::fanout(c);
    CHECK(s.width() == f.width);
    CHECK(static_cast<int>(s.entries.size()) - 1 == f.remote_offsets);
    for (int dj = -15; dj <= 15; ++dj) {
      for (int di = -15; di <= 15; ++di) CHECK(s.contains(di, dj) == oracle::kept(c, di, dj));
    }
  }
}

TEST_CASE("stencil entries are ordered by target column") {
  const Stencil s = compute_stencil(exponential(), grid(24, 24));
  CHECK(std::is_sorted(s.entries.begin(), s.entries.end(), [](const StencilEntry& a, const StencilEntry& b) {
    return a.dj != b.dj ? a.dj < b.dj : a.di < b.di;
  }));
}

TEST_CASE("interior fanout matches the oracle") {
  for (const KernelSpec& k : {gaussian(), exponential()}) {
    const Fanout f = expected_fanout(k, grid(24, 24));
    const oracle::FanoutCase o = oracle::fanout(oracle_case(k));
    CHECK(f.local == doctest::Approx(o.local).epsilon(1e-12));
    CHECK(f.remote_excitatory == doctest::Approx(o.remote_exc).epsilon(1e-12));
    CHECK(f.remote == doctest::Approx(o.remote_avg).epsilon(1e-12));
    CHECK(f.average_total == doctest::Approx(o.total).epsilon(1e-12));
  }
}

TEST_CASE("fanout frozen values") {
  const Fanout g = expected_fanout(gaussian(), grid(24, 24));
  CHECK(g.local == doctest::Approx(991.2).epsilon(1e-9));
  CHECK(g.remote_excitatory == doctest::Approx(327.3).epsilon(5e-4));
  CHECK(g.average_total == doctest::Approx(1253.1).epsilon(5e-4));
  const Fanout e = expected_fanout(exponential(), grid(24, 24));
  CHECK(e.remote == doctest::Approx(1375.6).epsilon(5e-4));
  CHECK(e.average_total == doctest::Approx(2366.8).epsilon(5e-4));
}

TEST_CASE("border columns lose the clipped stencil") {
  const GridSpec g = grid(12, 12);
  const Stencil s = compute_stencil(gaussian(), g);
  const Fanout corner = expected_fanout_at(s, g, g.column_index(0, 0));
  const Fanout centre = expected_fanout_at(s, g, g.column_index(6, 6));
  CHECK(centre.remote == doctest::Approx(expected_fanout(gaussian(), g).remote));
  CHECK(corner.remote < 0.5 * centre.remote);
  CHECK(corner.local == centre.local);
}

TEST_CASE("network forecast sums the clipped column fanouts") {
  const GridSpec g = grid(5, 4);
  const NetworkForecast f = forecast_network(exponential(), g);
  const Stencil s = compute_stencil(exponential(), g);
  double sum = 0.0;
  for (std::uint32_t c = 0; c < g.columns(); ++c) {
    const Fanout at = expected_fanout_at(s, g, c);
    sum += g.neurons_per_column * (at.local + at.remote);
  }
  CHECK(f.recurrent_synapses == doctest::Approx(sum).epsilon(1e-12));
  CHECK(f.neurons == 20u * 1240u);
  CHECK(f.recurrent_variance > 0.0);
  CHECK(f.recurrent_variance < f.recurrent_synapses);
}

TEST_CASE("generator output is well formed") {
  const GridSpec g = grid(6, 6);
  SynapseGenSpec spec;
  const SynapseGenerator gen(g, exponential(), spec, 42);
  std::vector<SynapseRecord> out;
  for (NeuronId source : {NeuronId{0}, NeuronId{17 * 1240 + 5}, NeuronId{17 * 1240 + 1239}, NeuronId{35 * 1240 + 991}}) {
    out.clear();
    gen.generate(source, out);
    REQUIRE(!out.empty());
    CHECK(std::is_sorted(out.begin(), out.end(),
                         [](const SynapseRecord& a, const SynapseRecord& b) { return a.target_neuron < b.target_neuron; }));
    const bool exc = g.is_excitatory(source);
    std::set<NeuronId> seen;
    for (const SynapseRecord& r : out) {
      CHECK(r.target_neuron != source);
      CHECK(r.target_neuron < g.neurons());
      CHECK(seen.insert(r.target_neuron).second);
      CHECK(r.delay >= 1);
      CHECK(r.delay <= spec.max_delay_steps);
      if (exc) {
        CHECK(r.weight >= 0.0f);
      } else {
        CHECK(r.weight <= 0.0f);
        CHECK(g.column_of(r.target_neuron) == g.column_of(source));
      }
    }
  }
}

TEST_CASE("generator is a pure function of seed and source") {
  const GridSpec g = grid(6, 6);
  const SynapseGenSpec spec;
  const SynapseGenerator a(g, gaussian(), spec, 7);
  const SynapseGenerator b(g, gaussian(), spec, 7);
  const SynapseGenerator c(g, gaussian(), spec, 8);
  std::vector<SynapseRecord> x, y, z;
  // Interleave calls in different orders; nothing may carry over.
  a.generate(100, x);
  b.generate(5000, z);
  z.clear();
  b.generate(100, y);
  c.generate(100, z);
  CHECK(x == y);
  CHECK(x != z);
  CHECK(generate_outgoing_synapses(100, g, gaussian(), spec, 7) == x);
}

TEST_CASE("count agrees with generate per target column") {
  const GridSpec g = grid(7, 5);
  const SynapseGenerator gen(g, exponential(), SynapseGenSpec{}, 3);
  std::vector<SynapseRecord> out;
  for (NeuronId source = 0; source < g.neurons(); source += 997) {
    out.clear();
    gen.generate(source, out);
    std::map<std::uint32_t, std::uint64_t> by_column;
    for (const SynapseRecord& r : out) ++by_column[g.column_of(r.target_neuron)];
    std::map<std::uint32_t, std::uint64_t> counted;
    gen.count(source, [&](std::uint32_t column, std::uint64_t n) {
      if (n > 0) counted[column] += n;
    });
    CHECK(counted == by_column);
  }
}

TEST_CASE("synapse parameters are keyed by the pair") {
  SynapseGenSpec spec;
  const random::Key key = random::key_from_seed(11);
  const SynapseParams p = draw_synapse_params(key, 5, 9, true, true, spec);
  const SynapseParams q = draw_synapse_params(key, 5, 9, true, true, spec);
  const SynapseParams r = draw_synapse_params(key, 9, 5, true, true, spec);
  CHECK(p.weight == q.weight);
  CHECK(p.delay == q.delay);
  CHECK((p.weight != r.weight || p.delay != r.delay));
}

TEST_CASE("weight and delay laws") {
  SynapseGenSpec spec;
  spec.delay_kind = DelayKind::uniform;
  spec.delay_min_ms = 1.0;
  spec.delay_max_ms = 8.0;
  const SynapseSampler sampler(spec);
  const random::Key key = random::key_from_seed(2);
  std::map<int, int> delays;
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    const SynapseParams p = sampler.draw(key, static_cast<NeuronId>(k), static_cast<NeuronId>(k * 7 + 1), true, true);
    ++delays[p.delay];
    sum += p.weight;
    sum2 += double(p.weight) * p.weight;
  }
  // Truncation at zero is four sigma away for the default sd ratio.
  const double mean = sum / n;
  const double sd = std::sqrt(sum2 / n - mean * mean);
  CHECK(mean == doctest::Approx(spec.weight_ee).epsilon(0.005));
  CHECK(sd == doctest::Approx(spec.weight_ee * spec.weight_sd_ratio).epsilon(0.01));
  CHECK(delays.size() == 8);
  for (const auto& [d, count] : delays) {
    CHECK(d >= 1);
    CHECK(d <= 8);
    CHECK(std::abs(count - n / 8.0) < 5.0 * std::sqrt(n / 8.0));
  }

  spec.delay_kind = DelayKind::exponential;
  spec.delay_mean_ms = 2.0;
  spec.max_delay_steps = 30;
  const SynapseSampler expo(spec);
  double dsum = 0.0;
  for (int k = 0; k < n; ++k) dsum += expo.draw(key, k, 3, true, false).delay;
  // ceil of an exponential with mean m has mean 1 / (1 - exp(-1/m)).
  CHECK(dsum / n == doctest::Approx(1.0 / (1.0 - std::exp(-0.5))).epsilon(0.01));
}

TEST_CASE("Monte-Carlo fanout on central columns") {
  const GridSpec g = grid(12, 12);
  for (const KernelSpec& k : {gaussian(), exponential()}) {
    const SynapseGenerator gen(g, k, SynapseGenSpec{}, 99);
    const std::uint32_t column = g.column_index(6, 6);
    const Fanout expect = expected_fanout_at(gen.stencil(), g, column);
    double local = 0.0, remote = 0.0;
    int exc_sources = 0;
    std::vector<SynapseRecord> out;
    for (std::uint32_t k2 = 0; k2 < 992; k2 += 8) {
      const NeuronId source = g.first_neuron(column) + k2;
      out.clear();
      gen.generate(source, out);
      for (const SynapseRecord& r : out) (g.column_of(r.target_neuron) == column ? local : remote) += 1.0;
      ++exc_sources;
    }
    local /= exc_sources;
    remote /= exc_sources;
    CHECK(local == doctest::Approx(expect.local).epsilon(0.01));
    CHECK(remote == doctest::Approx(expect.remote_excitatory).epsilon(0.02));
  }
}
