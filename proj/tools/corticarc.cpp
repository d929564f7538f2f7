// corticarc: analyze, build, run, bench and sweep cortical column grids.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "corticarc/cli/launcher.hpp"
#include "corticarc/cli/run_config.hpp"
#include "corticarc/connectivity/stencil.hpp"
#include "corticarc/engine/simulation.hpp"
#include "corticarc/metrics/csv.hpp"
#include "corticarc/metrics/firing_rate.hpp"
#include "corticarc/metrics/scaling.hpp"
#include "corticarc/partition/construction.hpp"
#include "corticarc/partition/inprocess_transport.hpp"
#include "corticarc/simd/kernels.hpp"

namespace fs = std::filesystem;
using namespace corticarc;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitFault = 3;

struct Overrides {
  std::string config;
  std::string grid;
  std::string kernel;
  std::string duration;
  std::string transport;
  std::string output;
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config, "Config file (INI sections)");
  cmd->add_option("--grid", o.grid, "Grid size NXxNY, overrides [grid]");
  cmd->add_option("--kernel", o.kernel, "gaussian or exponential, overrides [kernel] kind");
  cmd->add_option("--output", o.output, "Output directory");
  cmd->add_option_function<std::uint64_t>("--seed", [&o](std::uint64_t s) {
    o.seed = s;
    o.seed_set = true;
  }, "Random seed");
}

cli::RunConfig resolve(const Overrides& o, const std::string& workers = "") {
  cli::IniFile ini = o.config.empty() ? cli::IniFile::parse("", "<defaults>") : cli::IniFile::load(o.config);
  if (!o.grid.empty()) {
    const auto [nx, ny] = cli::parse_grid_size(o.grid);
    ini.set("grid", "nx", std::to_string(nx));
    ini.set("grid", "ny", std::to_string(ny));
  }
  if (!o.kernel.empty()) ini.set("kernel", "kind", o.kernel);
  if (!o.duration.empty()) ini.set("run", "duration", o.duration);
  if (!o.transport.empty()) ini.set("transport", "kind", o.transport);
  if (!o.output.empty()) ini.set("output", "dir", o.output);
  if (o.seed_set) ini.set("run", "seed", std::to_string(o.seed));
  if (!workers.empty()) ini.set("run", "workers", workers);
  return cli::run_config_from_ini(ini);
}

std::vector<int> parse_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw cli::ConfigError("'" + item + "' in '" + text + "' is not a positive integer");
    }
  }
  if (out.empty()) throw cli::ConfigError("empty list");
  return out;
}

std::vector<double> parse_rates(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(cli::parse_quantity(item, cli::Unit::frequency_hz, "--rates"));
  if (out.empty()) throw cli::ConfigError("--rates: empty list");
  return out;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_outputs(const cli::RunConfig& rc, const metrics::SimReport& report) {
  const fs::path dir(rc.output_dir);
  fs::create_directories(dir);
  write_file(dir / "config.ini", cli::echo_config(rc));
  write_file(dir / "report.json", metrics::to_json(report).dump(2) + "\n");
  write_file(dir / "report.csv", metrics::emit_csv({metrics::row_from_report(report)}));
  if (rc.write_raster && report.raster_recorded) {
    std::ofstream raster(dir / "raster.txt", std::ios::binary);
    metrics::write_raster(raster, report.raster);
    const auto rates = metrics::firing_rate_stats(report.raster, rc.sim.grid, report.sim_seconds * 1e3,
                                                  rc.sim.timestep_ms);
    std::ostringstream series;
    series << "time_ms,rate_hz\n";
    char line[64];
    for (std::size_t k = 0; k < rates.series_hz.size(); ++k) {
      std::snprintf(line, sizeof line, "%.17g,%.17g\n", static_cast<double>(k) * rates.bin_ms, rates.series_hz[k]);
      series << line;
    }
    write_file(dir / "rate_series.csv", series.str());
  }
}

void print_summary(const metrics::SimReport& r) {
  const auto cost = metrics::normalized_cost(r);
  std::printf("grid %s  kernel %s  workers %d  transport %s\n", r.grid.c_str(), r.kernel.c_str(), r.workers,
              r.transport.c_str());
  std::printf("neurons %llu  recurrent synapses %llu  checksum %016llx\n", static_cast<unsigned long long>(r.neurons),
              static_cast<unsigned long long>(r.recurrent_synapses), static_cast<unsigned long long>(r.checksum));
  std::printf("construction %.3f s  simulation %.3f s for %.3f simulated s\n", r.times.construction, r.wall_seconds,
              r.sim_seconds);
  std::printf("spikes %llu  mean rate %.3f Hz (exc %.3f, inh %.3f)\n", static_cast<unsigned long long>(r.spikes),
              r.mean_rate_hz(), r.excitatory_rate_hz(), r.inhibitory_rate_hz());
  std::printf("events recurrent %llu external %llu  cost %s ns/event\n",
              static_cast<unsigned long long>(r.recurrent_events), static_cast<unsigned long long>(r.external_events),
              cost ? std::to_string(*cost).c_str() : "NA");
  std::printf("memory %.3f B/syn steady + %.3f B/syn index, peak %.3f B/syn\n", r.memory.steady_per_synapse(),
              r.memory.overhead_per_synapse(), r.memory.peak_per_synapse());
}

int cmd_analyze(const Overrides& o, bool matrix) {
  const cli::RunConfig rc = resolve(o);
  const auto& grid = rc.sim.grid;
  const auto stencil = connectivity::compute_stencil(rc.sim.kernel, grid);
  const auto f = connectivity::forecast_network(rc.sim.kernel, grid);
  std::printf("kernel              %s (A = %g, scale = %g um, cutoff = %g)\n",
              std::string(connectivity::to_string(rc.sim.kernel.kind)).c_str(), rc.sim.kernel.amplitude,
              rc.sim.kernel.scale_um, rc.sim.kernel.cutoff_p);
  std::printf("stencil             %dx%d (%zu remote offsets)\n", stencil.width(), stencil.width(),
              stencil.entries.size() - 1);
  std::printf("fanout local        %.1f\n", f.interior.local);
  std::printf("fanout remote       %.1f per excitatory source, %.1f averaged\n", f.interior.remote_excitatory,
              f.interior.remote);
  std::printf("fanout total        %.1f (interior column)\n", f.interior.average_total);
  std::printf("grid                %dx%d = %llu columns\n", grid.nx, grid.ny, static_cast<unsigned long long>(f.columns));
  std::printf("neurons             %llu (%.3f M)\n", static_cast<unsigned long long>(f.neurons), f.neurons / 1e6);
  std::printf("recurrent synapses  %.0f (%.3f G, sd %.0f)\n", f.recurrent_synapses, f.recurrent_synapses / 1e9,
              std::sqrt(f.recurrent_variance));
  std::printf("memory steady       %.3f GB at %llu B/synapse\n",
              f.recurrent_synapses * metrics::kSynapseRecordBytes / 1e9,
              static_cast<unsigned long long>(metrics::kSynapseRecordBytes));
  std::printf("memory peak         %.3f GB at %llu B/synapse\n",
              f.recurrent_synapses * 2 * metrics::kSynapseRecordBytes / 1e9,
              static_cast<unsigned long long>(2 * metrics::kSynapseRecordBytes));
  if (matrix) std::printf("\nexpected synapses per stencil column (thousands)\n%s",
                          connectivity::stencil_matrix(stencil, grid).c_str());
  return 0;
}

int cmd_build(const Overrides& o, const std::string& workers, bool count_only) {
  cli::RunConfig rc = resolve(o, workers);
  if (!count_only) {
    rc.sim.duration_s = 0.0;
    const metrics::SimReport report = engine::run_inprocess(rc.sim);
    print_summary(report);
    write_outputs(rc, report);
    return 0;
  }
  const auto& sim = rc.sim;
  const connectivity::SynapseGenerator generator(sim.grid, sim.kernel, sim.synapse_spec(), sim.seed);
  const partition::ProcessMap pmap(sim.grid, sim.workers);
  partition::ConstructionOptions options;
  options.count_only = true;
  const auto counts = partition::run_inprocess(sim.workers, sim.timeout, [&](partition::Transport& t) {
    return partition::construct_network(t, pmap, generator, options).stats.outgoing_synapses;
  });
  std::uint64_t total = 0;
  for (std::uint64_t c : counts) total += c;
  const auto f = connectivity::forecast_network(sim.kernel, sim.grid);
  std::printf("recurrent synapses  %llu\nforecast            %.1f (sd %.1f, z = %.2f)\n",
              static_cast<unsigned long long>(total), f.recurrent_synapses, std::sqrt(f.recurrent_variance),
              (static_cast<double>(total) - f.recurrent_synapses) / std::sqrt(std::max(f.recurrent_variance, 1.0)));
  return 0;
}

int cmd_run(const Overrides& o, const std::string& workers, const std::vector<std::string>& raw_args) {
  const cli::RunConfig rc = resolve(o, workers);
  if (rc.sim.transport == engine::TransportKind::inprocess) {
    const metrics::SimReport report = engine::run_inprocess(rc.sim);
    print_summary(report);
    write_outputs(rc, report);
    return 0;
  }
  auto transport = partition::SocketTransport::from_environment(rc.sim.timeout);
  if (!transport) return cli::launch_local(cli::self_executable(), raw_args, rc.sim.workers);
  const auto report = engine::run_worker(*transport, rc.sim);
  if (report) {
    print_summary(*report);
    write_outputs(rc, *report);
  }
  return 0;
}

int cmd_bench(const Overrides& o, const std::string& workers, const std::string& mode_text,
              const std::string& base_grid) {
  Overrides base = o;
  const metrics::ScalingMode mode = metrics::parse_scaling_mode(mode_text);
  if (mode == metrics::ScalingMode::weak && !base_grid.empty()) base.grid = base_grid;
  const std::vector<int> counts = parse_list(workers);
  cli::RunConfig rc = resolve(base, std::to_string(counts.front()));
  if (rc.sim.transport != engine::TransportKind::inprocess) {
    throw cli::ConfigError("bench runs the in-process transport only");
  }
  rc.sim.record_raster = false;
  const metrics::ScalingResult result = metrics::scaling_harness(rc.sim, counts, mode);
  const std::string csv = metrics::emit_csv(result.rows);
  std::fputs(csv.c_str(), stdout);
  for (const std::string& e : result.errors) std::fprintf(stderr, "failed: %s\n", e.c_str());
  fs::create_directories(rc.output_dir);
  write_file(fs::path(rc.output_dir) / "bench.csv", csv);
  write_file(fs::path(rc.output_dir) / "config.ini", cli::echo_config(rc));
  return result.errors.empty() ? 0 : kExitFault;
}

int cmd_sweep(const Overrides& o, const std::string& workers, const std::string& rates_text) {
  cli::RunConfig rc = resolve(o, workers);
  rc.sim.record_raster = false;
  std::printf("external_rate_hz,mean_rate_hz,excitatory_rate_hz,inhibitory_rate_hz\n");
  for (double rate : parse_rates(rates_text)) {
    engine::SimConfig sim = rc.sim;
    sim.external.rate_hz = rate;
    const metrics::SimReport r = engine::run_inprocess(sim);
    std::printf("%.17g,%.17g,%.17g,%.17g\n", rate, r.mean_rate_hz(), r.excitatory_rate_hz(), r.inhibitory_rate_hz());
    std::fflush(stdout);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corticarc: distributed simulator of cortical column grids"};
  app.require_subcommand(1);
  std::string simd = "auto";
  app.add_option("--simd", simd, "Kernel set: auto, scalar, avx2, avx512");

  Overrides o;
  std::string workers;
  std::string mode = "strong";
  std::string base_grid;
  std::string rates;
  bool matrix = false;
  bool count_only = false;

  auto* analyze = app.add_subcommand("analyze", "Stencil, fanout and size forecast; no simulation");
  add_common(analyze, o);
  analyze->add_flag("--matrix", matrix, "Print the stencil matrix");

  auto* build = app.add_subcommand("build", "Construct the network and report its statistics");
  add_common(build, o);
  build->add_option("--workers", workers, "Worker count");
  build->add_flag("--count-only", count_only, "Only count synapses (step 1 of construction)");
  build->add_option("--transport", o.transport, "inprocess or multiprocess");

  auto* run = app.add_subcommand("run", "Construct and simulate, write report and raster");
  add_common(run, o);
  run->add_option("--workers", workers, "Worker count");
  run->add_option("--duration", o.duration, "Simulated time, e.g. 1s or 500ms");
  run->add_option("--transport", o.transport, "inprocess or multiprocess");

  auto* bench = app.add_subcommand("bench", "Strong or weak scaling table (CSV)");
  add_common(bench, o);
  bench->add_option("--workers", workers, "Comma-separated worker counts")->required();
  bench->add_option("--mode", mode, "strong or weak");
  bench->add_option("--base-grid", base_grid, "Grid of the first row in weak mode, NXxNY");
  bench->add_option("--duration", o.duration, "Simulated time per run");

  auto* sweep = app.add_subcommand("sweep", "Network rate as a function of the external rate");
  add_common(sweep, o);
  sweep->add_option("--workers", workers, "Worker count");
  sweep->add_option("--rates", rates, "Comma-separated external rates, e.g. 2Hz,4Hz")->required();
  sweep->add_option("--duration", o.duration, "Simulated time per point");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (simd != "auto") {
      const auto isa = simd::parse_isa(simd);
      if (!isa) throw cli::ConfigError("--simd: unknown kernel set '" + simd + "'");
      if (!simd::select(*isa)) throw cli::ConfigError("--simd: " + simd + " is not supported on this CPU");
    }
    if (*analyze) return cmd_analyze(o, matrix);
    if (*build) return cmd_build(o, workers, count_only);
    if (*run) return cmd_run(o, workers, std::vector<std::string>(argv + 1, argv + argc));
    if (*bench) return cmd_bench(o, workers, mode, base_grid);
    if (*sweep) return cmd_sweep(o, workers, rates);
  } catch (const cli::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFault;
  }
  return 0;
}
