#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "corticarc/engine/simulation.hpp"
#include "corticarc/metrics/csv.hpp"
#include "corticarc/metrics/firing_rate.hpp"
#include "corticarc/metrics/memory.hpp"
#include "corticarc/metrics/report.hpp"
#include "corticarc/metrics/scaling.hpp"

using namespace corticarc;
using namespace corticarc::metrics;

namespace {

ScalingRow sample_row() {
  ScalingRow r;
  r.grid = "12x12";
  r.workers = 4;
  r.kernel = "gaussian";
  r.sim_seconds = 1.0;
  r.wall_seconds = 0.1 + 1e-13;
  r.recurrent_events = 123456789012ull;
  r.external_events = 42;
  r.ns_per_event = 1.0 / 3.0;
  r.speedup = 3.7;
  r.efficiency = 0.925;
  r.bytes_per_synapse_steady = 12.0;
  r.bytes_per_synapse_peak = 24.0190123;
  r.mean_rate_hz = 7.25;
  return r;
}

SimReport fake_report(double wall, std::uint64_t events) {
  SimReport r;
  r.grid = "2x2";
  r.kernel = "gaussian";
  r.workers = 1;
  r.sim_seconds = 2.0;
  r.wall_seconds = wall;
  r.recurrent_events = events;
  r.external_events = events;
  r.neurons = 100;
  return r;
}

// Leaky integrate-and-fire with fixed-weight Poisson input and no
// adaptation, integrated event by event with exact exponential decay.
double lif_poisson_rate(const NeuronParams& p, double events_per_ms, double weight, double duration_ms,
                        std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> gap(events_per_ms);
  double t = 0.0, v = p.E, last = 0.0, refractory_until = -1.0;
  std::uint64_t spikes = 0;
  for (;;) {
    t += gap(rng);
    if (t >= duration_ms) break;
    if (t < refractory_until) continue;
    const double from = std::max(last, refractory_until);
    v = p.E + (v - p.E) * std::exp(-(t - from) / p.tau_m);
    last = t;
    v += weight;
    if (v > p.V_theta) {
      ++spikes;
      v = p.V_r;
      refractory_until = t + p.tau_arp;
      last = refractory_until;
    }
  }
  return spikes / (duration_ms * 1e-3);
}

}  // namespace

TEST_CASE("CSV round trip is exact") {
  ScalingRow failed;
  failed.grid = "24x24";
  failed.workers = 8;
  failed.kernel = "exponential";
  failed.failed = true;
  ScalingRow quiet = sample_row();
  quiet.ns_per_event.reset();
  const std::vector<ScalingRow> rows{sample_row(), failed, quiet};
  const std::string text = emit_csv(rows);
  CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  CHECK(text.find("24x24,8,exponential,NA,NA,NA,NA,NA,NA,NA,NA,NA,NA\n") != std::string::npos);
  CHECK(parse_csv(text) == rows);
  CHECK(emit_csv(parse_csv(text)) == text);
  CHECK_THROWS(parse_csv("grid,workers\n"));
  CHECK_THROWS(parse_csv(std::string(kCsvHeader) + "\n1x1,1,gaussian,1\n"));
}

TEST_CASE("normalized cost") {
  const SimReport r = fake_report(2.0, 500'000'000);
  // 2 s wall per 2 s simulated over 1e9 events: 1 ns each.
  REQUIRE(normalized_cost(r).has_value());
  CHECK(*normalized_cost(r) == doctest::Approx(2.0));
  CHECK(!normalized_cost(fake_report(1.0, 0)).has_value());

  SimReport g = fake_report(1.0, 1000);
  SimReport e = fake_report(3.0, 1000);
  e.kernel = "exponential";
  CHECK(slowdown_comparison(g, e) == doctest::Approx(3.0));
  e.workers = 2;
  CHECK_THROWS_AS(slowdown_comparison(g, e), std::invalid_argument);
  e.workers = 1;
  e.grid = "3x3";
  CHECK_THROWS_AS(slowdown_comparison(g, e), std::invalid_argument);
}

TEST_CASE("memory accounting") {
  const MemoryReport empty = memory_accounting(0, 0, 0);
  CHECK(empty.record_bytes == 0);
  CHECK(empty.steady_per_synapse() == 0.0);
  CHECK(empty.peak_per_synapse() == 0.0);

  MemoryReport a = memory_accounting(1000, 900, 160);
  const MemoryReport b = memory_accounting(500, 600, 40);
  CHECK(a.steady_per_synapse() == 12.0);
  a += b;
  CHECK(a.synapses == 1500);
  CHECK(a.steady_per_synapse() == 12.0);
  CHECK(a.peak_per_synapse() == doctest::Approx((18000.0 + 18000.0 + 200.0) / 1500.0));
  CHECK(a.peak_per_synapse() >= 24.0);

  engine::SimConfig c;
  c.grid.nx = 2;
  c.grid.ny = 1;
  c.grid.neurons_per_column = 50;
  c.duration_s = 0.0;
  c.workers = 2;
  const SimReport r = engine::run_inprocess(c);
  CHECK(r.memory.synapses == r.recurrent_synapses);
  CHECK(r.memory.steady_per_synapse() == 12.0);
  CHECK(r.memory.peak_per_synapse() >= 24.0);
  CHECK(r.worker_peak_bytes.size() == 2);
}

TEST_CASE("firing rate statistics") {
  connectivity::GridSpec grid;
  grid.nx = 1;
  grid.ny = 1;
  grid.neurons_per_column = 10;  // 8 excitatory, 2 inhibitory

  const RateStats silent = firing_rate_stats({}, grid, 1000.0);
  CHECK(silent.mean_hz == 0.0);
  CHECK(silent.series_hz.size() == 1000);

  std::vector<SpikeEvent> raster;
  for (int k = 0; k < 40; ++k) raster.push_back({0, 10.0 * k + 0.5});  // excitatory, 40 Hz over 1 s
  for (int k = 0; k < 20; ++k) raster.push_back({9, 50.0 * k + 1.5});  // inhibitory, 20 Hz
  std::sort(raster.begin(), raster.end(), spike_before);
  const RateStats s = firing_rate_stats(raster, grid, 1000.0, 10.0);
  CHECK(s.mean_hz == doctest::Approx(6.0));
  CHECK(s.excitatory_hz == doctest::Approx(5.0));
  CHECK(s.inhibitory_hz == doctest::Approx(10.0));
  REQUIRE(s.series_hz.size() == 100);
  double integral = 0.0;
  for (double v : s.series_hz) integral += v * 10.0 * 1e-3;
  CHECK(integral * 10 == doctest::Approx(60.0));
  // Bin 0 holds two spikes: 2 / (10 neurons * 10 ms).
  CHECK(s.series_hz[0] == doctest::Approx(20.0));
}

TEST_CASE("raster text round trip") {
  const std::vector<SpikeEvent> raster{{3, 0.1}, {1, 1.0 / 3.0}, {4000000000u, 999.999}};
  std::stringstream ss;
  write_raster(ss, raster);
  CHECK(read_raster(ss) == raster);
}

TEST_CASE("report JSON carries the derived quantities") {
  SimReport r = fake_report(2.0, 1000);
  r.spikes = 300;
  const auto j = to_json(r);
  CHECK(j.at("equivalent_events").get<std::uint64_t>() == 2000);
  CHECK(j.at("mean_rate_hz").get<double>() == doctest::Approx(1.5));
  CHECK(j.contains("memory"));
  CHECK(!j.contains("raster"));
}

TEST_CASE("weak scaling grids") {
  connectivity::GridSpec base;
  base.nx = 6;
  base.ny = 6;
  CHECK(weak_scaling_grid(base, 1).nx == 6);
  const auto g2 = weak_scaling_grid(base, 2);
  CHECK(g2.nx == 9);
  CHECK(g2.ny == 8);
  const auto g4 = weak_scaling_grid(base, 4);
  CHECK(g4.nx == 12);
  CHECK(g4.ny == 12);
  CHECK(weak_scaling_grid(base, 8).columns() == 288);
  CHECK_THROWS(weak_scaling_grid(base, 0));
  CHECK(parse_scaling_mode("weak") == ScalingMode::weak);
  CHECK_THROWS_AS(parse_scaling_mode("medium"), std::invalid_argument);
}

TEST_CASE("scaling harness arithmetic and failure rows") {
  engine::SimConfig base;
  base.grid.nx = 4;
  base.grid.ny = 4;
  const std::vector<int> workers{1, 2, 4, 8};
  std::vector<int> seen_columns;
  const Runner fake = [&](const engine::SimConfig& c) {
    if (c.workers == 4) throw std::runtime_error("boom");
    seen_columns.push_back(static_cast<int>(c.grid.columns()));
    SimReport r = fake_report(8.0 / c.workers * (c.workers == 8 ? 2.0 : 1.0), 1000);
    r.workers = c.workers;
    r.grid = std::to_string(c.grid.nx) + "x" + std::to_string(c.grid.ny);
    return r;
  };
  const ScalingResult strong = scaling_harness(base, workers, ScalingMode::strong, fake);
  REQUIRE(strong.rows.size() == 4);
  CHECK(strong.rows[1].speedup == doctest::Approx(2.0));
  CHECK(strong.rows[1].efficiency == doctest::Approx(1.0));
  CHECK(strong.rows[2].failed);
  CHECK(strong.errors.size() == 1);
  CHECK(strong.rows[3].speedup == doctest::Approx(4.0));
  CHECK(strong.rows[3].efficiency == doctest::Approx(0.5));
  CHECK(strong.reports.size() == 3);

  seen_columns.clear();
  const ScalingResult weak = scaling_harness(base, workers, ScalingMode::weak, fake);
  CHECK(seen_columns == std::vector<int>{16, 32, 128});
  CHECK(weak.rows[3].grid == "16x8");
  CHECK(weak.rows[1].efficiency == doctest::Approx(2.0));
  CHECK(weak.rows[1].speedup == doctest::Approx(4.0));
}

TEST_CASE("uncoupled Poisson-driven network matches the single-neuron response") {
  engine::SimConfig c;
  c.grid.nx = 2;
  c.grid.ny = 2;
  c.kernel.amplitude = 1e-4;  // below the cutoff: no remote columns
  c.kernel.local_p = 0.0;
  c.excitatory.g_c = 0.0;
  c.excitatory.alpha_c = 0.0;
  c.external = {1000.0, 1.5, 0.5};
  c.duration_s = 2.0;
  c.seed = 8;
  const SimReport r = engine::run_inprocess(c);
  REQUIRE(r.recurrent_synapses == 0);

  // Skip the first 200 ms, where the uniform initial state still shows.
  std::uint64_t late = 0;
  for (const SpikeEvent& s : r.raster) late += s.emission_time >= 200.0;
  const double engine_rate = late / (static_cast<double>(r.neurons) * 1.8);
  const double oracle_rate = lif_poisson_rate(c.excitatory, 1.5, 0.5, 2.0e6, 99);
  REQUIRE(oracle_rate > 5.0);
  CHECK(engine_rate == doctest::Approx(oracle_rate).epsilon(0.05));
}
