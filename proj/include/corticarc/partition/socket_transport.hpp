#pragma once

#include <cstdint>
#include <deque>
#include <memory>
#include <string>
#include <vector>

#include "corticarc/partition/transport.hpp"

namespace corticarc::partition {

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;
};

/// Parses "host:port,host:port,..." (one entry per rank).
std::vector<Endpoint> parse_endpoints(const std::string& text);

/// Multi-process backend: a full mesh of TCP connections, one per worker
/// pair. Frames carry a 16-byte little-endian header (collective tag,
/// payload length). Sends and receives progress together under poll(), so
/// large symmetric exchanges cannot deadlock on full socket buffers.
class SocketTransport final : public Transport {
 public:
  SocketTransport(int rank, std::vector<Endpoint> endpoints,
                  std::chrono::milliseconds timeout = kDefaultTimeout);
  ~SocketTransport() override;

  SocketTransport(const SocketTransport&) = delete;
  SocketTransport& operator=(const SocketTransport&) = delete;

  /// Reads CORTICARC_RANK, CORTICARC_SIZE and CORTICARC_HOSTS. Returns
  /// nullptr when CORTICARC_RANK is unset.
  static std::unique_ptr<SocketTransport> from_environment(std::chrono::milliseconds timeout);

  int rank() const override { return rank_; }
  int size() const override { return static_cast<int>(endpoints_.size()); }

  std::vector<Message> exchange(std::vector<Message> outgoing, std::span<const int> sources) override;

 private:
  struct Frame {
    std::uint64_t tag;
    std::vector<std::byte> bytes;
  };
  struct Peer {
    int fd = -1;
    std::vector<std::byte> inbox;   // raw bytes not yet framed
    std::deque<Frame> frames;       // complete frames, oldest first
    std::vector<std::byte> outbox;  // pending bytes to write
    std::size_t out_pos = 0;
    bool closed = false;            // peer sent EOF
  };

  void connect_mesh();
  void read_available(int peer);
  void write_available(int peer);

  int rank_;
  std::vector<Endpoint> endpoints_;
  std::chrono::milliseconds timeout_;
  int listen_fd_ = -1;
  std::vector<Peer> peers_;
  std::uint64_t sequence_ = 0;
};

}  // namespace corticarc::partition
