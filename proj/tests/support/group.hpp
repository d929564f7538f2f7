#pragma once

// Runs one function per worker on either transport backend and collects the
// per-rank results. The socket backend uses loopback ports and one thread
// per worker, so both backends share the same test bodies.

#include <exception>
#include <functional>
#include <memory>
#include <thread>
#include <vector>

#include "corticarc/cli/launcher.hpp"
#include "corticarc/partition/inprocess_transport.hpp"
#include "corticarc/partition/socket_transport.hpp"

namespace support {

enum class Backend { inprocess, socket };

inline const char* name(Backend b) { return b == Backend::inprocess ? "inprocess" : "socket"; }

template <class R>
std::vector<R> run_group(Backend backend, int workers, const std::function<R(corticarc::partition::Transport&)>& fn,
                         std::chrono::milliseconds timeout = std::chrono::milliseconds(20'000)) {
  using namespace corticarc::partition;
  if (backend == Backend::inprocess) return run_inprocess(workers, timeout, fn);

  const auto endpoints = corticarc::cli::free_local_endpoints(workers);
  std::vector<R> results(static_cast<std::size_t>(workers));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  {
    std::vector<std::jthread> threads;
    for (int r = 0; r < workers; ++r) {
      threads.emplace_back([&, r] {
        try {
          SocketTransport t(r, endpoints, timeout);
          results[static_cast<std::size_t>(r)] = fn(t);
        } catch (...) {
          errors[static_cast<std::size_t>(r)] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace support
