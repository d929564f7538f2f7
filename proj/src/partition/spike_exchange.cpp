#include "corticarc/partition/spike_exchange.hpp"

#include <string>

#include "corticarc/partition/wire.hpp"

namespace corticarc::partition {

void ExchangeStats::resize(int workers) {
  spikes_sent.resize(static_cast<std::size_t>(workers), 0);
  spikes_received.resize(static_cast<std::size_t>(workers), 0);
  payloads_sent.resize(static_cast<std::size_t>(workers), 0);
}

std::vector<AxonalSpikeMessage> deliver_spikes(Transport& transport, std::uint64_t step,
                                               std::vector<std::vector<SpikeEvent>>& outgoing,
                                               const ConnectivityDirectory& directory, ExchangeStats& stats) {
  const int me = transport.rank();
  const int n = transport.size();
  if (outgoing.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("deliver_spikes: need one list per worker");
  stats.resize(n);
  ++stats.steps;

  auto where = [&](int from, int to) {
    return "worker " + std::to_string(from) + " -> worker " + std::to_string(to) + " at step " + std::to_string(step);
  };

  for (int w = 0; w < n; ++w) {
    if (!outgoing[static_cast<std::size_t>(w)].empty() && !directory.is_target(w)) {
      throw ProtocolError("deliver_spikes: spikes queued for " + where(me, w) + " outside the directory");
    }
  }

  std::vector<int> remote_sources;
  for (int w : directory.sources) {
    if (w != me) remote_sources.push_back(w);
  }

  // Phase 1: spike counters.
  std::vector<Message> counters;
  for (int w : directory.targets) {
    if (w == me) continue;
    Message m{w, {}};
    const std::size_t count = outgoing[static_cast<std::size_t>(w)].size();
    wire::put_u32(m.bytes, static_cast<std::uint32_t>(count));
    counters.push_back(std::move(m));
    ++stats.counter_messages;
  }
  std::vector<Message> announced = transport.exchange(std::move(counters), remote_sources);
  std::vector<std::uint32_t> expect(static_cast<std::size_t>(n), 0);
  std::vector<int> payload_sources;
  for (const Message& m : announced) {
    if (m.bytes.size() != 4) throw ProtocolError("deliver_spikes: malformed counter from " + where(m.peer, me));
    const std::uint32_t c = wire::Reader(m.bytes).u32();
    expect[static_cast<std::size_t>(m.peer)] = c;
    if (c > 0) payload_sources.push_back(m.peer);
  }

  // Phase 2: payloads only where a counter is non-zero.
  std::vector<Message> payloads;
  for (int w : directory.targets) {
    if (w == me) continue;
    const auto& spikes = outgoing[static_cast<std::size_t>(w)];
    if (spikes.empty()) continue;
    Message m{w, {}};
    m.bytes.reserve(spikes.size() * kSpikeWireBytes);
    for (const SpikeEvent& s : spikes) {
      wire::put_u32(m.bytes, s.source_neuron);
      wire::put_f64(m.bytes, s.emission_time);
    }
    stats.spikes_sent[static_cast<std::size_t>(w)] += spikes.size();
    ++stats.payloads_sent[static_cast<std::size_t>(w)];
    ++stats.payload_messages;
    ++stats.nonzero_counters;
    payloads.push_back(std::move(m));
  }
  std::vector<Message> arrived = transport.exchange(std::move(payloads), payload_sources);

  std::vector<AxonalSpikeMessage> result;
  bool self_done = false;
  auto take_self = [&] {
    auto& local = outgoing[static_cast<std::size_t>(me)];
    if (!local.empty()) {
      stats.spikes_sent[static_cast<std::size_t>(me)] += local.size();
      stats.spikes_received[static_cast<std::size_t>(me)] += local.size();
      result.push_back({me, std::move(local)});
      local.clear();
    }
    self_done = true;
  };
  for (const Message& m : arrived) {
    if (!self_done && m.peer > me) take_self();
    const std::uint32_t c = expect[static_cast<std::size_t>(m.peer)];
    if (m.bytes.size() != std::size_t{c} * kSpikeWireBytes) {
      throw ProtocolError("deliver_spikes: " + where(m.peer, me) + " announced " + std::to_string(c) +
                          " spikes but sent " + std::to_string(m.bytes.size()) + " bytes");
    }
    AxonalSpikeMessage msg{m.peer, {}};
    msg.spikes.reserve(c);
    wire::Reader in(m.bytes);
    for (std::uint32_t k = 0; k < c; ++k) {
      SpikeEvent s;
      s.source_neuron = in.u32();
      s.emission_time = in.f64();
      msg.spikes.push_back(s);
    }
    stats.spikes_received[static_cast<std::size_t>(m.peer)] += c;
    result.push_back(std::move(msg));
  }
  if (!self_done) take_self();
  for (auto& list : outgoing) list.clear();
  return result;
}

}  // namespace corticarc::partition
