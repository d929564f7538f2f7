#include "corticarc/partition/construction.hpp"

#include <algorithm>
#include <chrono>
#include <limits>
#include <string>

#include "corticarc/partition/wire.hpp"

namespace corticarc::partition {

namespace {

constexpr std::uint64_t kListHeaderBytes = 8;
constexpr std::uint64_t kRecordWireBytes = 12;

std::string pair_name(int from, int to) { return "worker " + std::to_string(from) + " -> worker " + std::to_string(to); }

void put_record(wire::Bytes& out, const SynapseRecord& r) {
  wire::put_u32(out, r.target_neuron);
  wire::put_f32(out, r.weight);
  wire::put_u16(out, r.delay);
  wire::put_u16(out, r.flags);
}

}  // namespace

LocalNetwork construct_network(Transport& transport, const ProcessMap& pmap,
                               const connectivity::SynapseGenerator& generator, const ConstructionOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const int me = transport.rank();
  const int n = transport.size();
  if (n != pmap.worker_count()) throw std::invalid_argument("construct_network: transport and process map disagree");
  if (n > std::numeric_limits<std::uint16_t>::max()) throw std::invalid_argument("construct_network: too many workers");

  const connectivity::GridSpec& grid = pmap.grid();
  LocalNetwork net;
  net.rank = me;

  // Step 1: count per (owned neuron, target worker).
  const std::uint64_t owned = pmap.owned_neurons(me);
  std::vector<std::uint64_t> outgoing(static_cast<std::size_t>(n), 0);
  std::vector<std::uint32_t> axon_counts;
  net.axon_offsets_.reserve(owned + 1);
  net.axon_offsets_.push_back(0);
  std::vector<std::uint64_t> per_worker(static_cast<std::size_t>(n), 0);
  std::vector<int> touched;
  for (std::uint32_t local = 0; local < owned; ++local) {
    const NeuronId source = pmap.global_id(me, local);
    generator.count(source, [&](std::uint32_t column, std::uint64_t count) {
      if (count == 0) return;
      const int w = pmap.owner(column);
      if (per_worker[static_cast<std::size_t>(w)] == 0) touched.push_back(w);
      per_worker[static_cast<std::size_t>(w)] += count;
    });
    std::sort(touched.begin(), touched.end());
    for (int w : touched) {
      net.axon_workers_.push_back(static_cast<std::uint16_t>(w));
      axon_counts.push_back(static_cast<std::uint32_t>(per_worker[static_cast<std::size_t>(w)]));
      outgoing[static_cast<std::size_t>(w)] += per_worker[static_cast<std::size_t>(w)];
      per_worker[static_cast<std::size_t>(w)] = 0;
    }
    touched.clear();
    net.axon_offsets_.push_back(static_cast<std::uint32_t>(net.axon_workers_.size()));
  }

  std::vector<std::uint32_t> words(static_cast<std::size_t>(n));
  for (int w = 0; w < n; ++w) {
    const std::uint64_t c = outgoing[static_cast<std::size_t>(w)];
    if (c > std::numeric_limits<std::uint32_t>::max()) {
      throw std::overflow_error("construction: " + pair_name(me, w) + " carries " + std::to_string(c) +
                                " synapses, more than one counter word holds");
    }
    words[static_cast<std::size_t>(w)] = static_cast<std::uint32_t>(c);
  }
  const std::vector<std::uint32_t> incoming_words = transport.alltoall(words);

  ConnectivityDirectory& dir = net.directory;
  dir.outgoing_counts = outgoing;
  dir.incoming_counts.assign(incoming_words.begin(), incoming_words.end());
  for (int w = 0; w < n; ++w) {
    if (dir.is_target(w)) dir.targets.push_back(w);
    if (dir.is_source(w)) dir.sources.push_back(w);
  }

  // Cross-check: every worker tells each peer whether it lists the peer as a source.
  std::vector<std::uint32_t> listed(static_cast<std::size_t>(n));
  for (int w = 0; w < n; ++w) listed[static_cast<std::size_t>(w)] = dir.is_source(w) ? 1 : 0;
  const std::vector<std::uint32_t> listed_by = transport.alltoall(listed);
  for (int w = 0; w < n; ++w) {
    if ((listed_by[static_cast<std::size_t>(w)] != 0) != dir.is_target(w)) {
      throw ProtocolError("construction: directory mismatch on " + pair_name(me, w));
    }
  }

  for (std::uint64_t c : outgoing) net.stats.outgoing_synapses += c;
  for (std::uint64_t c : dir.incoming_counts) net.stats.incoming_synapses += c;

  if (options.count_only) {
    net.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return net;
  }

  // Step 2: plan rounds of owned neurons, bounded by the bytes they send.
  std::vector<std::uint32_t> round_starts{0};
  {
    std::uint64_t bytes = 0;
    for (std::uint32_t local = 0; local < owned; ++local) {
      std::uint64_t b = 0;
      for (std::uint32_t k = net.axon_offsets_[local]; k < net.axon_offsets_[local + 1]; ++k) {
        if (net.axon_workers_[k] != me) b += kListHeaderBytes + kRecordWireBytes * axon_counts[k];
      }
      if (bytes > 0 && bytes + b > options.chunk_bytes) {
        round_starts.push_back(local);
        bytes = 0;
      }
      bytes += b;
    }
    round_starts.push_back(static_cast<std::uint32_t>(owned));
  }
  const std::uint32_t my_rounds = static_cast<std::uint32_t>(round_starts.size() - 1);
  std::uint32_t rounds = 0;
  for (std::uint32_t r : transport.alltoall(std::vector<std::uint32_t>(static_cast<std::size_t>(n), my_rounds))) {
    rounds = std::max(rounds, r);
  }

  net.incoming.reserve(net.stats.incoming_synapses);
  std::vector<std::uint64_t> received(static_cast<std::size_t>(n), 0);
  std::uint64_t checksum = 0;

  auto store = [&](NeuronId source, std::span<const SynapseRecord> list) {
    net.incoming.begin_source(source);
    for (SynapseRecord r : list) {
      checksum += synapse_hash(source, r);
      r.target_neuron = pmap.local_index(r.target_neuron);
      net.incoming.append(r);
    }
  };

  std::vector<SynapseRecord> synapses;
  std::vector<std::vector<SynapseRecord>> split(static_cast<std::size_t>(n));
  std::vector<SynapseRecord> parsed;
  for (std::uint32_t round = 0; round < rounds; ++round) {
    std::vector<wire::Bytes> payloads(static_cast<std::size_t>(n));
    if (round < my_rounds) {
      for (std::uint32_t local = round_starts[round]; local < round_starts[round + 1]; ++local) {
        const NeuronId source = pmap.global_id(me, local);
        synapses.clear();
        generator.generate(source, synapses);
        for (const SynapseRecord& r : synapses) split[static_cast<std::size_t>(pmap.owner_of_neuron(r.target_neuron))].push_back(r);
        for (std::uint32_t k = net.axon_offsets_[local]; k < net.axon_offsets_[local + 1]; ++k) {
          const int w = net.axon_workers_[k];
          auto& list = split[static_cast<std::size_t>(w)];
          if (list.size() != axon_counts[k]) {
            throw std::logic_error("construction: neuron " + std::to_string(source) + " generated " +
                                   std::to_string(list.size()) + " synapses for worker " + std::to_string(w) +
                                   " but counted " + std::to_string(axon_counts[k]));
          }
          if (w == me) {
            store(source, list);
            received[static_cast<std::size_t>(me)] += list.size();
          } else {
            auto& out = payloads[static_cast<std::size_t>(w)];
            wire::put_u32(out, source);
            wire::put_u32(out, static_cast<std::uint32_t>(list.size()));
            for (const SynapseRecord& r : list) put_record(out, r);
          }
          list.clear();
        }
        for (const auto& list : split) {
          if (!list.empty()) throw std::logic_error("construction: synapse for a worker missing from the axon list");
        }
      }
    }

    std::vector<std::uint32_t> lengths(static_cast<std::size_t>(n));
    std::uint64_t sent_bytes = 0;
    for (int w = 0; w < n; ++w) {
      const std::uint64_t len = payloads[static_cast<std::size_t>(w)].size();
      if (len > std::numeric_limits<std::uint32_t>::max()) throw std::overflow_error("construction: round too large");
      lengths[static_cast<std::size_t>(w)] = static_cast<std::uint32_t>(len);
      sent_bytes += len;
    }
    const std::vector<std::uint32_t> announced = transport.alltoall(lengths);
    std::vector<std::uint64_t> expect(announced.begin(), announced.end());
    expect[static_cast<std::size_t>(me)] = 0;
    payloads[static_cast<std::size_t>(me)].clear();
    for (int w = 0; w < n; ++w) {
      if ((payloads[static_cast<std::size_t>(w)].size() > 0 && !dir.is_target(w)) ||
          (expect[static_cast<std::size_t>(w)] > 0 && !dir.is_source(w))) {
        throw ProtocolError("construction: payload on " + pair_name(me, w) + " outside the directory");
      }
    }
    std::vector<wire::Bytes> inbox = transport.alltoallv(std::move(payloads), expect);

    std::uint64_t recv_bytes = 0;
    for (int w = 0; w < n; ++w) {
      const wire::Bytes& bytes = inbox[static_cast<std::size_t>(w)];
      recv_bytes += bytes.size();
      wire::Reader in(bytes);
      while (!in.done()) {
        const NeuronId source = in.u32();
        const std::uint32_t count = in.u32();
        if (pmap.owner_of_neuron(source) != w) {
          throw ProtocolError("construction: " + pair_name(w, me) + " sent synapses of neuron " +
                              std::to_string(source) + " it does not own");
        }
        parsed.clear();
        for (std::uint32_t k = 0; k < count; ++k) {
          SynapseRecord r;
          r.target_neuron = in.u32();
          r.weight = in.f32();
          r.delay = in.u16();
          r.flags = in.u16();
          if (r.target_neuron >= grid.neurons() || pmap.owner_of_neuron(r.target_neuron) != me) {
            throw ProtocolError("construction: " + pair_name(w, me) + " sent a synapse onto neuron " +
                                std::to_string(r.target_neuron) + " owned elsewhere");
          }
          parsed.push_back(r);
        }
        store(source, parsed);
        received[static_cast<std::size_t>(w)] += count;
      }
    }
    net.stats.buffer_high_water = std::max(net.stats.buffer_high_water, sent_bytes + recv_bytes);
  }

  for (int w = 0; w < n; ++w) {
    if (received[static_cast<std::size_t>(w)] != dir.incoming_counts[static_cast<std::size_t>(w)]) {
      throw ProtocolError("construction: " + pair_name(w, me) + " announced " +
                          std::to_string(dir.incoming_counts[static_cast<std::size_t>(w)]) + " synapses but delivered " +
                          std::to_string(received[static_cast<std::size_t>(w)]));
    }
  }
  net.incoming.finalize();
  net.stats.checksum = checksum;
  net.stats.rounds = rounds;
  net.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return net;
}

}  // namespace corticarc::partition
