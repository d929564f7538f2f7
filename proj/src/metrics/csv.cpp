#include "corticarc/metrics/csv.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace corticarc::metrics {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s) {
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("csv: bad number '" + s + "'");
  return v;
}

std::uint64_t to_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw std::invalid_argument("csv: bad count '" + s + "'");
  return v;
}

}  // namespace

std::string emit_csv(const std::vector<ScalingRow>& rows) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const ScalingRow& r : rows) {
    out += r.grid + ',' + std::to_string(r.workers) + ',' + r.kernel;
    if (r.failed) {
      for (int k = 0; k < 10; ++k) out += ",NA";
    } else {
      out += ',' + num(r.sim_seconds) + ',' + num(r.wall_seconds) + ',' + std::to_string(r.recurrent_events) + ',' +
             std::to_string(r.external_events) + ',' + (r.ns_per_event ? num(*r.ns_per_event) : "NA") + ',' +
             num(r.speedup) + ',' + num(r.efficiency) + ',' + num(r.bytes_per_synapse_steady) + ',' +
             num(r.bytes_per_synapse_peak) + ',' + num(r.mean_rate_hz);
    }
    out += '\n';
  }
  return out;
}

std::vector<ScalingRow> parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::invalid_argument("csv: unexpected header");
  std::vector<ScalingRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 13) throw std::invalid_argument("csv: expected 13 fields in '" + line + "'");
    ScalingRow r;
    r.grid = f[0];
    r.workers = static_cast<int>(to_u64(f[1]));
    r.kernel = f[2];
    if (f[3] == "NA") {
      r.failed = true;
    } else {
      r.sim_seconds = to_double(f[3]);
      r.wall_seconds = to_double(f[4]);
      r.recurrent_events = to_u64(f[5]);
      r.external_events = to_u64(f[6]);
      if (f[7] != "NA") r.ns_per_event = to_double(f[7]);
      r.speedup = to_double(f[8]);
      r.efficiency = to_double(f[9]);
      r.bytes_per_synapse_steady = to_double(f[10]);
      r.bytes_per_synapse_peak = to_double(f[11]);
      r.mean_rate_hz = to_double(f[12]);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace corticarc::metrics
