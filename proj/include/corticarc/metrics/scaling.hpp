#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "corticarc/engine/simulation.hpp"
#include "corticarc/metrics/csv.hpp"

namespace corticarc::metrics {

enum class ScalingMode { strong, weak };

ScalingMode parse_scaling_mode(std::string_view text);

/// Most-square nx x ny rectangle (nx >= ny) with exactly `columns` columns.
connectivity::GridSpec weak_scaling_grid(const connectivity::GridSpec& base, int factor);

using Runner = std::function<SimReport(const engine::SimConfig&)>;

struct ScalingResult {
  std::vector<ScalingRow> rows;
  std::vector<SimReport> reports;   // successful runs, in row order
  std::vector<std::string> errors;  // one per failed row
};

/// Runs `base` once per worker count. Strong mode keeps the grid; weak mode
/// grows it to workers / workers[0] times the base column count. Speedup
/// and efficiency are relative to the first successful row; weak-scaling
/// efficiency is T(first) / T(k). A failing run becomes an NA row.
ScalingResult scaling_harness(const engine::SimConfig& base, std::span<const int> workers, ScalingMode mode,
                              const Runner& runner = engine::run_inprocess);

/// Row for a single report without reference timing (speedup 1).
ScalingRow row_from_report(const SimReport& report);

}  // namespace corticarc::metrics
