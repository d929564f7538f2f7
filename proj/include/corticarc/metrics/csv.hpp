#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace corticarc::metrics {

inline constexpr std::string_view kCsvHeader =
    "grid,workers,kernel,sim_seconds,wall_seconds,recurrent_events,external_events,ns_per_event,"
    "speedup,efficiency,bytes_per_synapse_steady,bytes_per_synapse_peak,mean_rate_hz";

/// One row of a scaling table. A failed run keeps grid, workers and kernel
/// and writes NA everywhere else; so does ns_per_event for an event-free run.
struct ScalingRow {
  std::string grid;
  int workers = 1;
  std::string kernel;
  bool failed = false;
  double sim_seconds = 0.0;
  double wall_seconds = 0.0;
  std::uint64_t recurrent_events = 0;
  std::uint64_t external_events = 0;
  std::optional<double> ns_per_event;
  double speedup = 0.0;
  double efficiency = 0.0;
  double bytes_per_synapse_steady = 0.0;
  double bytes_per_synapse_peak = 0.0;
  double mean_rate_hz = 0.0;

  friend bool operator==(const ScalingRow&, const ScalingRow&) = default;
};

/// Header line plus one line per row; doubles use %.17g so they parse back exactly.
std::string emit_csv(const std::vector<ScalingRow>& rows);
std::vector<ScalingRow> parse_csv(std::string_view text);

}  // namespace corticarc::metrics
