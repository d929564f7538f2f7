#include "corticarc/partition/transport.hpp"

#include <numeric>

#include "corticarc/partition/wire.hpp"

namespace corticarc::partition {

std::vector<std::uint32_t> Transport::alltoall(std::span<const std::uint32_t> words) {
  const int n = size();
  if (words.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("alltoall: need one word per worker");
  std::vector<Message> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int peer = 0; peer < n; ++peer) {
    Message m{peer, {}};
    wire::put_u32(m.bytes, words[static_cast<std::size_t>(peer)]);
    out.push_back(std::move(m));
  }
  std::vector<int> sources(static_cast<std::size_t>(n));
  std::iota(sources.begin(), sources.end(), 0);
  std::vector<Message> in = exchange(std::move(out), sources);
  std::vector<std::uint32_t> result(static_cast<std::size_t>(n));
  for (const Message& m : in) {
    if (m.bytes.size() != 4) {
      throw ProtocolError("alltoall: worker " + std::to_string(m.peer) + " -> " + std::to_string(rank()) +
                          " sent " + std::to_string(m.bytes.size()) + " bytes instead of one word");
    }
    result[static_cast<std::size_t>(m.peer)] = wire::Reader(m.bytes).u32();
  }
  return result;
}

std::vector<std::vector<std::byte>> Transport::alltoallv(std::vector<std::vector<std::byte>> payloads,
                                                         std::span<const std::uint64_t> recv_lengths) {
  const int n = size();
  if (payloads.size() != static_cast<std::size_t>(n) || recv_lengths.size() != static_cast<std::size_t>(n)) {
    throw std::invalid_argument("alltoallv: need one payload and one length per worker");
  }
  std::vector<Message> out;
  for (int peer = 0; peer < n; ++peer) {
    auto& p = payloads[static_cast<std::size_t>(peer)];
    if (!p.empty()) out.push_back({peer, std::move(p)});
  }
  std::vector<int> sources;
  for (int peer = 0; peer < n; ++peer) {
    if (recv_lengths[static_cast<std::size_t>(peer)] > 0) sources.push_back(peer);
  }
  std::vector<Message> in = exchange(std::move(out), sources);
  std::vector<std::vector<std::byte>> result(static_cast<std::size_t>(n));
  for (Message& m : in) {
    const std::uint64_t expected = recv_lengths[static_cast<std::size_t>(m.peer)];
    if (m.bytes.size() != expected) {
      throw ProtocolError("alltoallv: worker " + std::to_string(m.peer) + " -> " + std::to_string(rank()) +
                          " announced " + std::to_string(expected) + " bytes but sent " +
                          std::to_string(m.bytes.size()));
    }
    result[static_cast<std::size_t>(m.peer)] = std::move(m.bytes);
  }
  return result;
}

void Transport::barrier() {
  const int n = size();
  std::vector<Message> out;
  std::vector<int> sources;
  for (int peer = 0; peer < n; ++peer) {
    out.push_back({peer, {}});
    sources.push_back(peer);
  }
  exchange(std::move(out), sources);
}

}  // namespace corticarc::partition
