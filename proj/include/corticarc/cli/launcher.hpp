#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "corticarc/partition/socket_transport.hpp"

namespace corticarc::cli {

/// `count` loopback endpoints on ports that were free when probed.
std::vector<partition::Endpoint> free_local_endpoints(int count);

std::string format_endpoints(const std::vector<partition::Endpoint>& endpoints);

/// Starts `workers` copies of `executable` with `args`, each with
/// CORTICARC_RANK, CORTICARC_SIZE and CORTICARC_HOSTS set, and waits for
/// them. When one exits abnormally the others are terminated. Returns the
/// first non-zero exit status, or 0.
int launch_local(const std::string& executable, const std::vector<std::string>& args, int workers);

/// Path of the running executable.
std::string self_executable();

}  // namespace corticarc::cli
