#include "corticarc/metrics/scaling.hpp"

#include <cmath>
#include <stdexcept>

namespace corticarc::metrics {

ScalingMode parse_scaling_mode(std::string_view text) {
  if (text == "strong") return ScalingMode::strong;
  if (text == "weak") return ScalingMode::weak;
  throw std::invalid_argument("unknown scaling mode '" + std::string(text) + "' (expected strong or weak)");
}

connectivity::GridSpec weak_scaling_grid(const connectivity::GridSpec& base, int factor) {
  if (factor < 1) throw std::invalid_argument("weak scaling: factor must be at least 1");
  const std::uint64_t columns = std::uint64_t{base.columns()} * static_cast<std::uint64_t>(factor);
  auto ny = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(columns)));
  while (ny * ny > columns) --ny;
  while (columns % ny != 0) --ny;
  connectivity::GridSpec g = base;
  g.nx = static_cast<int>(columns / ny);
  g.ny = static_cast<int>(ny);
  return g;
}

ScalingRow row_from_report(const SimReport& r) {
  ScalingRow row;
  row.grid = r.grid;
  row.workers = r.workers;
  row.kernel = r.kernel;
  row.sim_seconds = r.sim_seconds;
  row.wall_seconds = r.wall_seconds;
  row.recurrent_events = r.recurrent_events;
  row.external_events = r.external_events;
  row.ns_per_event = normalized_cost(r);
  row.speedup = 1.0;
  row.efficiency = 1.0;
  row.bytes_per_synapse_steady = r.memory.steady_per_synapse();
  row.bytes_per_synapse_peak = r.memory.peak_per_synapse();
  row.mean_rate_hz = r.mean_rate_hz();
  return row;
}

ScalingResult scaling_harness(const engine::SimConfig& base, std::span<const int> workers, ScalingMode mode,
                              const Runner& runner) {
  if (workers.empty()) throw std::invalid_argument("scaling: need at least one worker count");
  ScalingResult out;
  const int unit = workers.front();
  double ref_wall = 0.0;
  int ref_workers = 0;
  for (int w : workers) {
    engine::SimConfig config = base;
    config.workers = w;
    if (mode == ScalingMode::weak) {
      if (w % unit != 0) throw std::invalid_argument("weak scaling: worker counts must be multiples of the first");
      config.grid = weak_scaling_grid(base.grid, w / unit);
    }
    try {
      SimReport report = runner(config);
      ScalingRow row = row_from_report(report);
      if (ref_workers == 0 && report.wall_seconds > 0.0) {
        ref_wall = report.wall_seconds;
        ref_workers = w;
      }
      if (ref_workers > 0 && report.wall_seconds > 0.0) {
        const double ratio = ref_wall / report.wall_seconds;
        if (mode == ScalingMode::strong) {
          row.speedup = ratio * ref_workers;
          row.efficiency = row.speedup / w;
        } else {
          row.efficiency = ratio;
          row.speedup = ratio * w / ref_workers;
        }
      }
      out.rows.push_back(row);
      out.reports.push_back(std::move(report));
    } catch (const std::exception& e) {
      ScalingRow row;
      row.grid = std::to_string(config.grid.nx) + "x" + std::to_string(config.grid.ny);
      row.workers = w;
      row.kernel = std::string(connectivity::to_string(config.kernel.kind));
      row.failed = true;
      out.rows.push_back(row);
      out.errors.push_back(row.grid + " on " + std::to_string(w) + " workers: " + e.what());
    }
  }
  return out;
}

}  // namespace corticarc::metrics
