#pragma once

#include <atomic>
#include <condition_variable>
#include <deque>
#include <exception>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "corticarc/partition/transport.hpp"

namespace corticarc::partition {

/// Shared mailboxes for workers running as threads of one process.
class InProcessGroup {
 public:
  explicit InProcessGroup(int size, std::chrono::milliseconds timeout = kDefaultTimeout);

  int size() const { return size_; }
  std::chrono::milliseconds timeout() const { return timeout_; }

  std::unique_ptr<Transport> endpoint(int rank);

  /// Wakes every blocked worker with TransportAborted.
  void abort(const std::string& reason);

 private:
  friend class InProcessTransport;

  struct Envelope {
    std::uint64_t tag;
    std::vector<std::byte> bytes;
  };
  struct Mailbox {
    std::mutex mutex;
    std::condition_variable ready;
    std::vector<std::deque<Envelope>> from;
  };

  int size_;
  std::chrono::milliseconds timeout_;
  std::vector<std::unique_ptr<Mailbox>> boxes_;
  std::atomic<bool> aborted_{false};
  std::mutex reason_mutex_;
  std::string reason_;
};

/// Runs fn(Transport&) on `workers` threads and returns the per-rank
/// results. If any worker throws, the group is aborted and the first
/// error that is not a consequence of the abort is rethrown.
template <class Fn>
auto run_inprocess(int workers, std::chrono::milliseconds timeout, Fn&& fn)
    -> std::vector<decltype(fn(std::declval<Transport&>()))> {
  using Result = decltype(fn(std::declval<Transport&>()));
  InProcessGroup group(workers, timeout);
  std::vector<Result> results(static_cast<std::size_t>(workers));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::unique_ptr<Transport>> endpoints;
  for (int r = 0; r < workers; ++r) endpoints.push_back(group.endpoint(r));
  {
    std::vector<std::jthread> threads;
    for (int r = 0; r < workers; ++r) {
      threads.emplace_back([&, r] {
        try {
          results[static_cast<std::size_t>(r)] = fn(*endpoints[static_cast<std::size_t>(r)]);
        } catch (const std::exception& e) {
          errors[static_cast<std::size_t>(r)] = std::current_exception();
          group.abort("worker " + std::to_string(r) + " failed: " + e.what());
        } catch (...) {
          errors[static_cast<std::size_t>(r)] = std::current_exception();
          group.abort("worker " + std::to_string(r) + " failed");
        }
      });
    }
  }
  std::exception_ptr first;
  for (const auto& e : errors) {
    if (!e) continue;
    try {
      std::rethrow_exception(e);
    } catch (const TransportAborted&) {
      if (!first) first = e;
    } catch (...) {
      std::rethrow_exception(e);
    }
  }
  if (first) std::rethrow_exception(first);
  return results;
}

}  // namespace corticarc::partition
