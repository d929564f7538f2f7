#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace corticarc::partition {

/// Fault on the link from worker `from` to worker `to`.
class TransportError : public std::runtime_error {
 public:
  TransportError(const std::string& what, int from, int to) : std::runtime_error(what), from_(from), to_(to) {}
  int from() const { return from_; }
  int to() const { return to_; }

 private:
  int from_;
  int to_;
};

class TransportTimeout : public TransportError {
 public:
  using TransportError::TransportError;
};

/// Another worker failed and the group was torn down.
class TransportAborted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Peers disagree about what was announced and what was sent.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Message {
  int peer = 0;
  std::vector<std::byte> bytes;
};

struct TransportStats {
  std::uint64_t collectives = 0;
  std::uint64_t messages_sent = 0;
  std::uint64_t bytes_sent = 0;
};

inline constexpr std::chrono::milliseconds kDefaultTimeout{60'000};

/// Reliable, per-pair ordered message exchange among a fixed worker group.
///
/// Every primitive is collective: all workers call it the same number of
/// times in the same order. Messages are tagged with the collective's
/// sequence number, so a message that lands in the wrong round is reported
/// as a ProtocolError instead of being silently consumed.
class Transport {
 public:
  virtual ~Transport() = default;

  virtual int rank() const = 0;
  virtual int size() const = 0;

  /// Sends each outgoing message to its peer and receives exactly one
  /// message from every rank in `sources`. Returns received messages
  /// ordered by source rank. A rank may message itself.
  virtual std::vector<Message> exchange(std::vector<Message> outgoing, std::span<const int> sources) = 0;

  /// All-to-all of one 32-bit word per pair; result indexed by source.
  std::vector<std::uint32_t> alltoall(std::span<const std::uint32_t> words);

  /// All-to-all of byte payloads where only non-empty pairs exchange a
  /// message. `recv_lengths[u]` is the length announced by worker u; a
  /// mismatch raises ProtocolError.
  std::vector<std::vector<std::byte>> alltoallv(std::vector<std::vector<std::byte>> payloads,
                                                std::span<const std::uint64_t> recv_lengths);

  void barrier();

  const TransportStats& stats() const { return stats_; }

 protected:
  TransportStats stats_;
};

}  // namespace corticarc::partition
