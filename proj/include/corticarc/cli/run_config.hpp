#pragma once

#include <string>

#include "corticarc/cli/config_file.hpp"
#include "corticarc/engine/simulation.hpp"

namespace corticarc::cli {

/// A run as described by a config file plus command-line overrides.
struct RunConfig {
  engine::SimConfig sim;
  std::string output_dir = "corticarc-out";
  bool write_raster = true;
};

/// Builds a RunConfig from a parsed file. Unknown sections or keys and
/// physical values without a valid unit are ConfigErrors; so is a config
/// that fails validation.
RunConfig run_config_from_ini(const IniFile& ini);
RunConfig load_run_config(const std::string& path);

/// Config text that reproduces `config` exactly when parsed back.
std::string echo_config(const RunConfig& config);

/// "24x24" -> (24, 24).
std::pair<int, int> parse_grid_size(std::string_view text);

}  // namespace corticarc::cli
