// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run everything
//   acceptance --only 4   run criterion 4 (repeatable)
//   acceptance --list     print the criteria

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "corticarc/connectivity/stencil.hpp"
#include "corticarc/connectivity/synapse_gen.hpp"
#include "corticarc/engine/external_input.hpp"
#include "corticarc/engine/simulation.hpp"
#include "corticarc/engine/worker.hpp"
#include "corticarc/metrics/csv.hpp"
#include "corticarc/metrics/scaling.hpp"
#include "corticarc/partition/construction.hpp"
#include "corticarc/partition/inprocess_transport.hpp"
#include "oracles/random_neurons.hpp"
#include "support/group.hpp"

using namespace corticarc;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back((ok ? "ok   " : "FAIL ") + what);
  }
  void note(const std::string& what) { notes.push_back("     " + what); }
};

bool within(double value, double target, double rel) { return std::abs(value - target) <= rel * std::abs(target); }

connectivity::GridSpec square(int n) {
  connectivity::GridSpec g;
  g.nx = n;
  g.ny = n;
  return g;
}

connectivity::KernelSpec gaussian() { return {connectivity::KernelKind::gaussian, 0.05, 100.0, 1e-3, 0.8}; }
connectivity::KernelSpec exponential() { return {connectivity::KernelKind::exponential, 0.03, 290.0, 1e-3, 0.8}; }

// Moderate drive for the long desk-scale runs; the calibrated reference
// drive (5.5 Hz) roughly doubles their event count.
engine::SimConfig desk_config(int grid, const connectivity::KernelSpec& kernel, double duration_s) {
  engine::SimConfig c;
  c.grid = square(grid);
  c.kernel = kernel;
  c.external = {1000.0, 3.0, 0.5};
  c.duration_s = duration_s;
  c.seed = 2024;
  c.chunk_bytes = std::uint64_t{16} << 20;
  c.timeout = std::chrono::minutes(10);
  return c;
}

// ---------------------------------------------------------------------------

Outcome c1_stencils() {
  Outcome o;
  const auto t0 = Clock::now();
  const connectivity::GridSpec g = square(24);
  const auto gs = connectivity::compute_stencil(gaussian(), g);
  const auto es = connectivity::compute_stencil(exponential(), g);
  const double elapsed = seconds_since(t0);
  o.check(gs.width() == 7, fmt("Gaussian A=0.05 sigma=100um alpha=100um cutoff 1/1000: %dx%d stencil (want 7x7)",
                               gs.width(), gs.width()));
  o.check(es.width() == 21,
          fmt("exponential A=0.03 lambda=290um: %dx%d stencil (want 21x21)", es.width(), es.width()));
  o.check(elapsed < 1.0, fmt("runtime %.4f s (< 1 s)", elapsed));
  return o;
}

struct McFanout {
  double local = 0.0;
  double remote_exc = 0.0;
  double remote_avg = 0.0;
  double total = 0.0;
  int sources = 0;
};

// Samples every fourth neuron of the four central columns of a 12x12 grid.
McFanout monte_carlo_fanout(const connectivity::KernelSpec& kernel, connectivity::Fanout* expect) {
  const connectivity::GridSpec g = square(12);
  const connectivity::SynapseGenerator gen(g, kernel, connectivity::SynapseGenSpec{}, 31337);
  McFanout mc;
  double local = 0.0, remote_exc = 0.0, remote_all = 0.0;
  int exc = 0, all = 0;
  connectivity::Fanout sum{};
  std::vector<SynapseRecord> out;
  for (auto [i, j] : {std::pair{5, 5}, {6, 5}, {5, 6}, {6, 6}}) {
    const std::uint32_t column = g.column_index(i, j);
    const connectivity::Fanout f = connectivity::expected_fanout_at(gen.stencil(), g, column);
    sum.local += f.local / 4;
    sum.remote_excitatory += f.remote_excitatory / 4;
    sum.remote += f.remote / 4;
    sum.average_total += f.average_total / 4;
    for (std::uint32_t k = 0; k < g.neurons_per_column; k += 4) {
      const NeuronId source = g.first_neuron(column) + k;
      out.clear();
      gen.generate(source, out);
      double l = 0.0, r = 0.0;
      for (const SynapseRecord& s : out) (g.column_of(s.target_neuron) == column ? l : r) += 1.0;
      local += l;
      remote_all += r;
      if (g.is_excitatory(source)) {
        remote_exc += r;
        ++exc;
      }
      ++all;
    }
  }
  *expect = sum;
  mc.local = local / all;
  mc.remote_exc = remote_exc / exc;
  mc.remote_avg = remote_all / all;
  mc.total = mc.local + mc.remote_avg;
  mc.sources = all;
  return mc;
}

Outcome c2_fanout() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto g = connectivity::expected_fanout(gaussian(), square(24));
  const auto e = connectivity::expected_fanout(exponential(), square(24));
  o.check(within(g.local, 990.0, 0.01), fmt("local fanout %.1f (990 +-1%%)", g.local));
  o.check(within(g.average_total, 1240.0, 0.05), fmt("Gaussian average total %.1f (1240 +-5%%)", g.average_total));
  o.check(within(e.average_total, 2390.0, 0.05), fmt("exponential average total %.1f (2390 +-5%%)", e.average_total));
  o.check(within(g.remote, 250.0, 0.10),
          fmt("Gaussian remote average %.1f (250 +-10%%, %.1f per excitatory source)", g.remote, g.remote_excitatory));
  o.check(within(e.remote, 1400.0, 0.10), fmt("exponential remote average %.1f (1400 +-10%%, %.1f per excitatory source)",
                                              e.remote, e.remote_excitatory));

  // Monte-Carlo over central columns of a 12x12 grid against the same
  // expectation with the stencil clipped at the grid border.
  for (const auto& [name, kernel] : {std::pair{"Gaussian", gaussian()}, {"exponential", exponential()}}) {
    connectivity::Fanout expect;
    const McFanout mc = monte_carlo_fanout(kernel, &expect);
    o.check(within(mc.local, expect.local, 0.01) && within(mc.remote_exc, expect.remote_excitatory, 0.02) &&
                within(mc.total, expect.average_total, 0.01),
            fmt("%s Monte-Carlo, %d sources on 12x12 centre: local %.1f / %.1f, remote per exc %.1f / %.1f, "
                "total %.1f / %.1f (sampled / expected)",
                name, mc.sources, mc.local, expect.local, mc.remote_exc, expect.remote_excitatory, mc.total,
                expect.average_total));
  }
  const double elapsed = seconds_since(t0);
  o.check(elapsed < 60.0, fmt("runtime %.1f s (< 1 min)", elapsed));
  return o;
}

Outcome c3_table_forecasts() {
  Outcome o;
  const auto t0 = Clock::now();
  struct Row {
    int grid;
    double neurons_m;
    double synapses_g;
  };
  for (const Row& row : {Row{24, 0.7, 0.9}, Row{48, 2.9, 3.5}, Row{96, 11.4, 14.2}}) {
    const auto f = connectivity::forecast_network(gaussian(), square(row.grid));
    const double n = static_cast<double>(f.neurons) / 1e6;
    const double s = f.recurrent_synapses / 1e9;
    o.check(within(n, row.neurons_m, 0.02), fmt("%dx%d neurons %.3f M (%.1f M +-2%%, off by %.2f%%)", row.grid,
                                                  row.grid, n, row.neurons_m, 100.0 * std::abs(n / row.neurons_m - 1)));
    o.check(within(s, row.synapses_g, 0.05),
            fmt("%dx%d Gaussian recurrent synapses %.3f G (%.1f G +-5%%, off by %.2f%%)", row.grid, row.grid, s,
                row.synapses_g, 100.0 * std::abs(s / row.synapses_g - 1)));
  }
  o.note("1240 neurons per column give 714240 neurons on 24x24, which rounds to the tabulated 0.7 M but lies 2.03% "
         "above it");
  const double elapsed = seconds_since(t0);
  o.check(elapsed < 1.0, fmt("runtime %.3f s (< 1 s)", elapsed));
  return o;
}

Outcome c4_partition_invariance() {
  Outcome o;
  const engine::SimConfig base = desk_config(12, gaussian(), 1.0);
  std::vector<metrics::SimReport> reports;
  for (int workers : {1, 2, 4, 8}) {
    engine::SimConfig c = base;
    c.workers = workers;
    const auto t0 = Clock::now();
    reports.push_back(engine::run_inprocess(c));
    const auto& r = reports.back();
    o.note(fmt("%d worker(s): %llu spikes, checksum %016llx, %.1f Hz, construction %.1f s, simulation %.1f s, total %.1f s",
               workers, static_cast<unsigned long long>(r.spikes), static_cast<unsigned long long>(r.checksum),
               r.mean_rate_hz(), r.times.construction, r.wall_seconds, seconds_since(t0)));
  }
  const auto& ref = reports.front();
  o.check(ref.spikes > 0 && ref.exchange.spikes_sent > 0, "reference run is active");
  for (std::size_t k = 1; k < reports.size(); ++k) {
    const auto& r = reports[k];
    o.check(r.checksum == ref.checksum && r.recurrent_synapses == ref.recurrent_synapses,
            fmt("%d workers: construction checksum identical", r.workers));
    o.check(r.raster == ref.raster, fmt("%d workers: raster bit-identical (%zu spikes)", r.workers, r.raster.size()));
  }
  return o;
}

Outcome c5_ode_oracle() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(1000);
  double worst = 0.0;
  int confluent = 0, spikes = 0, bad = 0, events = 0;
  // Absolute below 1 mV (or 1 unit of c), relative above.
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); };
  for (int k = 0; k < 1000; ++k) {
    oracle::Case c = oracle::random_case(rng, k);
    for (auto& e : c.events) e.weight = static_cast<float>(e.weight);
    confluent += c.params.tau_c == c.params.tau_m;
    const oracle::Trace ref = oracle::simulate(c.initial, c.params, c.events);
    NeuronState s = c.initial;
    std::vector<SpikeEvent> got;
    for (std::size_t e = 0; e < c.events.size(); ++e) {
      const InputEvent in{c.events[e].time, kExternalSource, static_cast<std::uint32_t>(e),
                          static_cast<float>(c.events[e].weight)};
      integrate_inputs(s, c.params, std::span(&in, 1), 0, got);
      const double err = std::max(rel(s.V, ref.after_event[e].V), rel(s.c, ref.after_event[e].c));
      worst = std::max(worst, err);
      bad += err > 1e-8;
      ++events;
    }
    bad += got.size() != ref.spikes.size();
    spikes += static_cast<int>(got.size());
  }
  const double elapsed = seconds_since(t0);
  o.check(bad == 0, fmt("1000 random sequences, %d events, %d spikes: worst relative error %.2e (< 1e-8)", events,
                        spikes, worst));
  o.check(confluent >= 100, fmt("%d cases with tau_c == tau_m", confluent));
  o.check(elapsed < 60.0, fmt("runtime %.1f s (< 1 min)", elapsed));
  return o;
}

struct StepLog {
  std::vector<std::vector<std::uint64_t>> sent;      // [step][target]
  std::vector<std::vector<std::uint64_t>> received;  // [step][source]
  std::vector<int> payloads_outside;
  std::uint64_t counter_bytes_mismatch = 0;
};

Outcome c6_protocol_conservation() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(66);
  std::uint64_t total_sent = 0, total_received = 0, steps_checked = 0;
  bool per_step = true, outside = false, lengths = true;
  for (int trial = 0; trial < 6; ++trial) {
    engine::SimConfig c;
    const int nx = 2 + static_cast<int>(rng() % 4);
    const int ny = 1 + static_cast<int>(rng() % 3);
    c.grid.nx = nx;
    c.grid.ny = ny;
    c.grid.neurons_per_column = 60 + static_cast<std::uint32_t>(rng() % 200);
    c.kernel = trial % 2 == 0 ? gaussian() : exponential();
    c.external = {1000.0, 4.0 + static_cast<double>(rng() % 800) / 100.0, 0.5};
    c.seed = rng();
    c.duration_s = 0.1;
    std::vector<int> options;
    for (int w = 2; w <= nx * ny && w <= 6; ++w) {
      try {
        partition::ProcessMap(c.grid, w);
        options.push_back(w);
      } catch (const std::invalid_argument&) {
      }
    }
    c.workers = options[rng() % options.size()];
    c.validate();
    const int n = c.workers;

    // The last run goes over loopback sockets.
    const support::Backend backend = trial == 5 ? support::Backend::socket : support::Backend::inprocess;
    const std::function<StepLog(partition::Transport&)> body = [&](partition::Transport& t) {
      engine::Worker worker(t, c);
      worker.construct();
      StepLog log;
      partition::ExchangeStats before = worker.exchange_stats();
      before.resize(n);
      for (std::uint64_t s = 0; s < c.steps(); ++s) {
        const std::uint64_t bytes0 = t.stats().bytes_sent;
        worker.step(s);
        const partition::ExchangeStats& now = worker.exchange_stats();
        std::vector<std::uint64_t> sent(static_cast<std::size_t>(n)), received(static_cast<std::size_t>(n));
        std::uint64_t remote_spikes = 0;
        for (int w = 0; w < n; ++w) {
          sent[w] = now.spikes_sent[w] - before.spikes_sent[w];
          received[w] = now.spikes_received[w] - before.spikes_received[w];
          if (w != t.rank()) remote_spikes += sent[w];
          if (!worker.network().directory.is_target(w) && now.payloads_sent[w] != 0) log.payloads_outside.push_back(w);
        }
        const std::uint64_t counters = now.counter_messages - before.counter_messages;
        // Every byte on the wire is a counter word or a 12-byte address event.
        if (t.stats().bytes_sent - bytes0 != 4 * counters + partition::kSpikeWireBytes * remote_spikes) {
          ++log.counter_bytes_mismatch;
        }
        log.sent.push_back(sent);
        log.received.push_back(received);
        before = now;
      }
      return log;
    };
    const std::vector<StepLog> logs = support::run_group(backend, n, body, std::chrono::minutes(2));
    for (std::uint64_t s = 0; s < c.steps(); ++s) {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          per_step = per_step && logs[a].sent[s][b] == logs[b].received[s][a];
          total_sent += logs[a].sent[s][b];
          total_received += logs[b].received[s][a];
        }
      }
      ++steps_checked;
    }
    for (const auto& log : logs) {
      outside = outside || !log.payloads_outside.empty();
      lengths = lengths && log.counter_bytes_mismatch == 0;
    }
    o.note(fmt("run %d: %dx%d grid, %u neurons/column, %s, %d workers, %.2f Hz drive, %s", trial, nx, ny,
               c.grid.neurons_per_column, std::string(connectivity::to_string(c.kernel.kind)).c_str(), n,
               c.external.rate_hz, support::name(backend)));
  }
  o.check(per_step, fmt("per-step spikes sent = received for every worker pair over %llu steps",
                        static_cast<unsigned long long>(steps_checked)));
  o.check(total_sent == total_received && total_sent > 0,
          fmt("global: %llu spikes sent, %llu received", static_cast<unsigned long long>(total_sent),
              static_cast<unsigned long long>(total_received)));
  o.check(!outside, "no payloads on pairs outside the directory");
  o.check(lengths, "bytes on the wire = 4 per counter + 12 per announced spike, every step");
  const double elapsed = seconds_since(t0);
  o.check(elapsed < 60.0, fmt("runtime %.1f s (< 1 min)", elapsed));
  return o;
}

Outcome c7_memory() {
  Outcome o;
  const auto t0 = Clock::now();
  engine::SimConfig c = desk_config(6, gaussian(), 0.05);
  c.workers = 4;
  const metrics::SimReport r = engine::run_inprocess(c);
  const auto& m = r.memory;
  o.check(m.steady_per_synapse() == 12.0,
          fmt("steady state %.17g B/synapse over %llu synapses (exactly 12)", m.steady_per_synapse(),
              static_cast<unsigned long long>(m.synapses)));
  o.check(m.peak_per_synapse() >= 24.0, fmt("construction peak %.3f B/synapse (>= 24): records %llu B, source copies "
                                            "%llu B, index %llu B",
                                            m.peak_per_synapse(), static_cast<unsigned long long>(m.record_bytes),
                                            static_cast<unsigned long long>(m.source_copy_bytes),
                                            static_cast<unsigned long long>(m.index_bytes)));
  std::string peaks;
  for (std::uint64_t b : r.worker_peak_bytes) peaks += fmt(" %.1f", static_cast<double>(b) / (1 << 20));
  o.check(r.worker_peak_bytes.size() == 4, "per-worker peak reported (MB):" + peaks);
  o.note(fmt("exchange buffer high-water %.1f MB, delay ring %.1f MB (reported separately)",
             static_cast<double>(m.buffer_high_water) / (1 << 20), static_cast<double>(m.ring_bytes) / (1 << 20)));
  const double elapsed = seconds_since(t0);
  o.check(elapsed < 60.0, fmt("runtime %.1f s (< 1 min)", elapsed));
  return o;
}

Outcome c8_strong_scaling() {
  Outcome o;
  const auto t0 = Clock::now();
  const engine::SimConfig base = desk_config(12, gaussian(), 0.25);
  const std::vector<int> workers{1, 2, 4, 8};
  const metrics::ScalingResult result = metrics::scaling_harness(base, workers, metrics::ScalingMode::strong);
  for (const std::string& line : [&] {
         std::vector<std::string> lines;
         std::string csv = metrics::emit_csv(result.rows);
         std::size_t pos = 0;
         while (pos < csv.size()) {
           const std::size_t end = csv.find('\n', pos);
           lines.push_back(csv.substr(pos, end - pos));
           pos = end + 1;
         }
         return lines;
       }()) {
    o.note(line);
  }
  for (const std::string& e : result.errors) o.note("error: " + e);
  o.note(fmt("hardware threads available: %u", std::thread::hardware_concurrency()));
  bool ok = result.errors.empty();
  bool monotone = ok;
  for (std::size_t k = 1; ok && k < result.rows.size(); ++k) {
    monotone = monotone && result.rows[k].wall_seconds <= result.rows[k - 1].wall_seconds;
  }
  o.check(ok, "all runs completed");
  o.check(monotone, "wall time non-increasing from 1 to 8 workers");
  const double s8 = ok ? result.rows.back().speedup : 0.0;
  o.check(s8 >= 3.0, fmt("speedup at 8 workers %.2f (>= 3)", s8));
  o.note(fmt("runtime %.1f s", seconds_since(t0)));
  return o;
}

Outcome c9_connectivity_cost() {
  Outcome o;
  const auto t0 = Clock::now();

  // Synapse-count factor from construction counts on a 24x24 grid, away from 12x12 border effects.
  std::uint64_t counted[2] = {0, 0};
  int idx = 0;
  for (const auto& kernel : {gaussian(), exponential()}) {
    const connectivity::GridSpec g = square(24);
    const auto forecast = connectivity::forecast_network(kernel, g);
    const auto totals = partition::run_inprocess(1, std::chrono::minutes(30), [&](partition::Transport& t) {
      const partition::ProcessMap pmap(g, t.size());
      const connectivity::SynapseGenerator gen(g, kernel, connectivity::SynapseGenSpec{}, 2024);
      partition::ConstructionOptions options;
      options.count_only = true;
      return partition::construct_network(t, pmap, gen, options).stats.outgoing_synapses;
    });
    counted[idx] = totals[0];
    const double z = (static_cast<double>(counted[idx]) - forecast.recurrent_synapses) /
                     std::sqrt(forecast.recurrent_variance);
    o.check(std::abs(z) < 3.0, fmt("24x24 %s: %llu synapses constructed, forecast %.0f (z = %.2f, within 3 sd)",
                                   std::string(connectivity::to_string(kernel.kind)).c_str(),
                                   static_cast<unsigned long long>(counted[idx]), forecast.recurrent_synapses, z));
    ++idx;
  }
  const double factor = static_cast<double>(counted[1]) / static_cast<double>(counted[0]);
  o.check(std::abs(factor - 1.65) < 0.005, fmt("synapse-count factor %.4f (1.65 at two decimals)", factor));

  // Normalized cost on identical 12x12 grids and worker counts.
  const engine::SimConfig gc = desk_config(12, gaussian(), 0.25);
  engine::SimConfig ec = desk_config(12, exponential(), 0.25);
  const metrics::SimReport g = engine::run_inprocess(gc);
  const metrics::SimReport e = engine::run_inprocess(ec);
  for (const auto* r : {&g, &e}) {
    o.note(fmt("12x12 %s: %llu synapses, %.2f Hz, %llu events, %.1f s wall, %.2f ns/event", r->kernel.c_str(),
               static_cast<unsigned long long>(r->recurrent_synapses), r->mean_rate_hz(),
               static_cast<unsigned long long>(r->equivalent_events()), r->wall_seconds,
               metrics::normalized_cost(*r).value_or(0.0)));
  }
  const double ratio = metrics::slowdown_comparison(g, e);
  o.check(ratio > 1.0, fmt("exponential / Gaussian ns per event = %.3f (> 1; 1.9-2.3 at 24x24 and beyond)", ratio));
  o.note(fmt("runtime %.1f s", seconds_since(t0)));
  return o;
}

Outcome c10_poisson_drive() {
  Outcome o;
  const auto t0 = Clock::now();
  const engine::ExternalInputSpec spec{1000.0, 3.0, 0.5};
  const random::Key key = random::key_from_seed(10);
  const double mean = spec.mean_per_step(1.0);
  const std::uint64_t neurons = 1000, steps = 1000;
  std::uint64_t total = 0;
  std::vector<InputEvent> out;
  for (NeuronId gid = 0; gid < neurons; ++gid) {
    for (std::uint64_t t = 0; t < steps; ++t) total += engine::generate_external_events(key, gid, t, spec, 1.0, out);
    out.clear();
  }
  const double expected = mean * neurons * steps;
  const double z = (static_cast<double>(total) - expected) / std::sqrt(expected);
  o.check(std::abs(z) < 3.0, fmt("1e6 neuron-steps: %llu events, expected %.0f (z = %.2f, within 3 sd)",
                                 static_cast<unsigned long long>(total), expected, z));

  // Same through the engine, on different worker counts.
  engine::SimConfig c;
  c.grid.nx = 2;
  c.grid.ny = 1;
  c.grid.neurons_per_column = 500;
  c.kernel.local_p = 0.0;
  c.kernel.amplitude = 1e-4;
  c.external = spec;
  c.duration_s = 1.0;
  c.seed = 10;
  const metrics::SimReport one = engine::run_inprocess(c);
  c.workers = 2;
  const metrics::SimReport two = engine::run_inprocess(c);
  const double zeng = (static_cast<double>(one.external_events) - expected) / std::sqrt(expected);
  o.check(std::abs(zeng) < 3.0, fmt("engine, %llu neuron-steps: %llu events (z = %.2f)",
                                    static_cast<unsigned long long>(one.neurons * one.steps),
                                    static_cast<unsigned long long>(one.external_events), zeng));

  bool same = one.external_events == two.external_events && one.raster == two.raster;
  std::vector<InputEvent> a, b;
  for (NeuronId gid = 0; gid < 200 && same; ++gid) {
    a.clear();
    b.clear();
    engine::generate_external_events(key, gid, gid * 7, spec, 1.0, a);
    engine::generate_external_events(key, gid, gid * 7, spec, 1.0, b);
    same = a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](const InputEvent& x, const InputEvent& y) {
             return x.time == y.time && x.sequence == y.sequence;
           });
  }
  o.check(same, "deterministic per (seed, gid, t), independent of the worker count");
  const double elapsed = seconds_since(t0);
  o.check(elapsed < 60.0, fmt("runtime %.1f s (< 1 min)", elapsed));
  return o;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {1, "stencil reproduction", c1_stencils},
      {2, "fanout budgets", c2_fanout},
      {3, "problem-size forecasts", c3_table_forecasts},
      {4, "partition invariance", c4_partition_invariance},
      {5, "ODE oracle equivalence", c5_ode_oracle},
      {6, "protocol conservation", c6_protocol_conservation},
      {7, "memory accounting", c7_memory},
      {8, "desk-scale strong scaling", c8_strong_scaling},
      {9, "connectivity-cost ordering", c9_connectivity_cost},
      {10, "Poisson drive statistics", c10_poisson_drive},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> only;
  bool list = false;
  app.add_option("--only", only, "Run only these criteria (1-10)")->check(CLI::Range(1, 10));
  app.add_flag("--list", list, "List the criteria");
  CLI11_PARSE(app, argc, argv);

  if (list) {
    for (const Criterion& c : criteria()) std::printf("C%d %s\n", c.id, c.title);
    return 0;
  }
  int failed = 0;
  for (const Criterion& c : criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.notes.push_back(std::string("FAIL exception: ") + e.what());
    }
    for (const std::string& n : outcome.notes) std::printf("    %s\n", n.c_str());
    std::printf("C%d %s %s\n", c.id, outcome.pass ? "PASS" : "FAIL", c.title);
    std::fflush(stdout);
    failed += !outcome.pass;
  }
  return failed == 0 ? 0 : 1;
}
