#include "corticarc/partition/socket_transport.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <sstream>
#include <thread>

#include "corticarc/partition/wire.hpp"

namespace corticarc::partition {

namespace {

constexpr std::size_t kHeaderBytes = 16;

std::string errno_text() { return std::strerror(errno); }

sockaddr_in resolve(const Endpoint& ep) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* found = nullptr;
  if (getaddrinfo(ep.host.c_str(), nullptr, &hints, &found) != 0 || found == nullptr) {
    throw std::runtime_error("socket transport: cannot resolve host '" + ep.host + "'");
  }
  sockaddr_in addr = *reinterpret_cast<sockaddr_in*>(found->ai_addr);
  freeaddrinfo(found);
  addr.sin_port = htons(ep.port);
  return addr;
}

void write_all(int fd, const void* data, std::size_t n) {
  const auto* p = static_cast<const char*>(data);
  while (n > 0) {
    const ssize_t k = ::send(fd, p, n, MSG_NOSIGNAL);
    if (k < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error("socket transport: handshake write failed: " + errno_text());
    }
    p += k;
    n -= static_cast<std::size_t>(k);
  }
}

void read_all(int fd, void* data, std::size_t n) {
  auto* p = static_cast<char*>(data);
  while (n > 0) {
    const ssize_t k = ::recv(fd, p, n, 0);
    if (k == 0) throw std::runtime_error("socket transport: peer closed during handshake");
    if (k < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error("socket transport: handshake read failed: " + errno_text());
    }
    p += k;
    n -= static_cast<std::size_t>(k);
  }
}

void tune(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  const int flags = ::fcntl(fd, F_GETFL, 0);
  ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

}  // namespace

std::vector<Endpoint> parse_endpoints(const std::string& text) {
  std::vector<Endpoint> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.rfind(':');
    if (colon == std::string::npos) throw std::invalid_argument("endpoint '" + item + "' lacks a port");
    const int port = std::stoi(item.substr(colon + 1));
    if (port <= 0 || port > 65535) throw std::invalid_argument("endpoint '" + item + "' has an invalid port");
    out.push_back({item.substr(0, colon), static_cast<std::uint16_t>(port)});
  }
  return out;
}

SocketTransport::SocketTransport(int rank, std::vector<Endpoint> endpoints, std::chrono::milliseconds timeout)
    : rank_(rank), endpoints_(std::move(endpoints)), timeout_(timeout) {
  if (endpoints_.empty()) throw std::invalid_argument("socket transport: empty endpoint list");
  if (rank_ < 0 || rank_ >= size()) throw std::invalid_argument("socket transport: rank outside endpoint list");
  peers_.resize(endpoints_.size());
  connect_mesh();
}

SocketTransport::~SocketTransport() {
  for (Peer& p : peers_) {
    if (p.fd >= 0) ::close(p.fd);
  }
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

std::unique_ptr<SocketTransport> SocketTransport::from_environment(std::chrono::milliseconds timeout) {
  const char* rank = std::getenv("CORTICARC_RANK");
  if (rank == nullptr) return nullptr;
  const char* size = std::getenv("CORTICARC_SIZE");
  const char* hosts = std::getenv("CORTICARC_HOSTS");
  if (size == nullptr || hosts == nullptr) {
    throw std::invalid_argument("CORTICARC_RANK is set but CORTICARC_SIZE or CORTICARC_HOSTS is missing");
  }
  auto endpoints = parse_endpoints(hosts);
  if (static_cast<int>(endpoints.size()) != std::atoi(size)) {
    throw std::invalid_argument("CORTICARC_HOSTS lists " + std::to_string(endpoints.size()) +
                                " endpoints but CORTICARC_SIZE is " + size);
  }
  return std::make_unique<SocketTransport>(std::atoi(rank), std::move(endpoints), timeout);
}

void SocketTransport::connect_mesh() {
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  if (size() == 1) return;

  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw std::runtime_error("socket transport: socket() failed: " + errno_text());
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in self = resolve(endpoints_[static_cast<std::size_t>(rank_)]);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&self), sizeof self) != 0) {
    throw std::runtime_error("socket transport: rank " + std::to_string(rank_) + " cannot bind port " +
                             std::to_string(endpoints_[static_cast<std::size_t>(rank_)].port) + ": " + errno_text());
  }
  if (::listen(listen_fd_, size()) != 0) throw std::runtime_error("socket transport: listen() failed: " + errno_text());

  // Lower ranks accept, higher ranks connect.
  for (int peer = 0; peer < rank_; ++peer) {
    const sockaddr_in addr = resolve(endpoints_[static_cast<std::size_t>(peer)]);
    for (;;) {
      const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
      if (::connect(fd, reinterpret_cast<const sockaddr*>(&addr), sizeof addr) == 0) {
        const std::uint32_t hello = static_cast<std::uint32_t>(rank_);
        write_all(fd, &hello, sizeof hello);
        peers_[static_cast<std::size_t>(peer)].fd = fd;
        break;
      }
      ::close(fd);
      if (std::chrono::steady_clock::now() > deadline) {
        throw TransportTimeout("socket transport: worker " + std::to_string(rank_) + " could not reach worker " +
                                   std::to_string(peer),
                               rank_, peer);
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(20));
    }
  }
  for (int pending = size() - 1 - rank_; pending > 0; --pending) {
    pollfd pfd{listen_fd_, POLLIN, 0};
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0 || ::poll(&pfd, 1, static_cast<int>(left.count())) <= 0) {
      throw TransportTimeout("socket transport: worker " + std::to_string(rank_) + " still waits for " +
                                 std::to_string(pending) + " peer connection(s)",
                             -1, rank_);
    }
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) throw std::runtime_error("socket transport: accept() failed: " + errno_text());
    std::uint32_t hello = 0;
    read_all(fd, &hello, sizeof hello);
    if (hello >= static_cast<std::uint32_t>(size()) || static_cast<int>(hello) <= rank_ ||
        peers_[hello].fd >= 0) {
      ::close(fd);
      throw std::runtime_error("socket transport: unexpected handshake from rank " + std::to_string(hello));
    }
    peers_[hello].fd = fd;
  }
  for (Peer& p : peers_) {
    if (p.fd >= 0) tune(p.fd);
  }
}

void SocketTransport::read_available(int peer) {
  Peer& p = peers_[static_cast<std::size_t>(peer)];
  std::byte buffer[1 << 16];
  for (;;) {
    const ssize_t k = ::recv(p.fd, buffer, sizeof buffer, 0);
    if (k > 0) {
      p.inbox.insert(p.inbox.end(), buffer, buffer + k);
      continue;
    }
    if (k == 0) {
      p.closed = true;
      break;
    }
    if (errno == EINTR) continue;
    if (errno == EAGAIN || errno == EWOULDBLOCK) break;
    throw TransportError("socket transport: read from worker " + std::to_string(peer) + " failed: " + errno_text(),
                         peer, rank_);
  }
  std::size_t pos = 0;
  while (p.inbox.size() - pos >= kHeaderBytes) {
    wire::Reader header(std::span(p.inbox).subspan(pos, kHeaderBytes));
    const std::uint64_t tag = header.u64();
    const std::uint64_t length = header.u64();
    if (p.inbox.size() - pos - kHeaderBytes < length) break;
    const auto begin = p.inbox.begin() + static_cast<std::ptrdiff_t>(pos + kHeaderBytes);
    p.frames.push_back({tag, std::vector<std::byte>(begin, begin + static_cast<std::ptrdiff_t>(length))});
    pos += kHeaderBytes + length;
  }
  if (pos > 0) p.inbox.erase(p.inbox.begin(), p.inbox.begin() + static_cast<std::ptrdiff_t>(pos));
}

void SocketTransport::write_available(int peer) {
  Peer& p = peers_[static_cast<std::size_t>(peer)];
  while (p.out_pos < p.outbox.size()) {
    const ssize_t k = ::send(p.fd, p.outbox.data() + p.out_pos, p.outbox.size() - p.out_pos, MSG_NOSIGNAL);
    if (k > 0) {
      p.out_pos += static_cast<std::size_t>(k);
      continue;
    }
    if (k < 0 && errno == EINTR) continue;
    if (k < 0 && (errno == EAGAIN || errno == EWOULDBLOCK)) return;
    throw TransportError("socket transport: write to worker " + std::to_string(peer) + " failed: " + errno_text(),
                         rank_, peer);
  }
  p.outbox.clear();
  p.out_pos = 0;
}

std::vector<Message> SocketTransport::exchange(std::vector<Message> outgoing, std::span<const int> sources) {
  const std::uint64_t tag = sequence_++;
  ++stats_.collectives;
  for (Message& m : outgoing) {
    if (m.peer < 0 || m.peer >= size()) throw std::invalid_argument("exchange: invalid peer rank");
    stats_.bytes_sent += m.bytes.size();
    Peer& p = peers_[static_cast<std::size_t>(m.peer)];
    if (m.peer == rank_) {
      p.frames.push_back({tag, std::move(m.bytes)});
      continue;
    }
    ++stats_.messages_sent;
    wire::Bytes header;
    wire::put_u64(header, tag);
    wire::put_u64(header, m.bytes.size());
    p.outbox.insert(p.outbox.end(), header.begin(), header.end());
    p.outbox.insert(p.outbox.end(), m.bytes.begin(), m.bytes.end());
    write_available(m.peer);
  }

  std::vector<int> wanted(sources.begin(), sources.end());
  std::sort(wanted.begin(), wanted.end());
  const auto deadline = std::chrono::steady_clock::now() + timeout_;
  std::vector<pollfd> fds;
  std::vector<int> fd_peer;
  for (;;) {
    fds.clear();
    fd_peer.clear();
    bool pending = false;
    for (int peer = 0; peer < size(); ++peer) {
      const Peer& p = peers_[static_cast<std::size_t>(peer)];
      if (peer == rank_) continue;
      if (p.closed) {
        if (!p.outbox.empty()) {
          throw TransportError("socket transport: worker " + std::to_string(peer) + " closed the link before worker " +
                                   std::to_string(rank_) + " could deliver",
                               rank_, peer);
        }
        continue;
      }
      short events = POLLIN;
      if (!p.outbox.empty()) {
        events |= POLLOUT;
        pending = true;
      }
      fds.push_back({p.fd, events, 0});
      fd_peer.push_back(peer);
    }
    int missing = -1;
    for (int source : wanted) {
      if (peers_[static_cast<std::size_t>(source)].frames.empty()) {
        missing = source;
        break;
      }
    }
    if (!pending && missing < 0) break;
    if (missing >= 0 && peers_[static_cast<std::size_t>(missing)].closed) {
      throw TransportError("socket transport: worker " + std::to_string(missing) + " closed the link to worker " +
                               std::to_string(rank_),
                           missing, rank_);
    }

    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      if (missing >= 0) {
        throw TransportTimeout("transport timeout: worker " + std::to_string(missing) + " -> worker " +
                                   std::to_string(rank_) + " delivered nothing within " +
                                   std::to_string(timeout_.count()) + " ms",
                               missing, rank_);
      }
      throw TransportTimeout("transport timeout: worker " + std::to_string(rank_) + " could not flush its sends",
                             rank_, -1);
    }
    if (missing == rank_) {
      throw ProtocolError("transport: worker " + std::to_string(rank_) + " expected a message from itself");
    }
    const int ready = ::poll(fds.data(), fds.size(), static_cast<int>(std::min<long>(left.count(), 1000)));
    if (ready < 0) {
      if (errno == EINTR) continue;
      throw std::runtime_error("socket transport: poll() failed: " + errno_text());
    }
    for (std::size_t k = 0; k < fds.size(); ++k) {
      if (fds[k].revents & (POLLIN | POLLHUP | POLLERR)) read_available(fd_peer[k]);
      if (fds[k].revents & POLLOUT) write_available(fd_peer[k]);
    }
  }

  std::vector<Message> received;
  received.reserve(wanted.size());
  for (int source : wanted) {
    Peer& p = peers_[static_cast<std::size_t>(source)];
    if (p.frames.front().tag != tag) {
      throw ProtocolError("transport: worker " + std::to_string(source) + " -> worker " + std::to_string(rank_) +
                          " message belongs to collective " + std::to_string(p.frames.front().tag) + ", expected " +
                          std::to_string(tag));
    }
    received.push_back({source, std::move(p.frames.front().bytes)});
    p.frames.pop_front();
  }
  return received;
}

}  // namespace corticarc::partition
