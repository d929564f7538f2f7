#include "corticarc/partition/inprocess_transport.hpp"

#include <algorithm>

namespace corticarc::partition {

class InProcessTransport final : public Transport {
 public:
  InProcessTransport(InProcessGroup& group, int rank) : group_(group), rank_(rank) {}

  int rank() const override { return rank_; }
  int size() const override { return group_.size(); }

  std::vector<Message> exchange(std::vector<Message> outgoing, std::span<const int> sources) override {
    const std::uint64_t tag = sequence_++;
    ++stats_.collectives;
    for (Message& m : outgoing) {
      if (m.peer < 0 || m.peer >= size()) throw std::invalid_argument("exchange: invalid peer rank");
      stats_.messages_sent += m.peer != rank_;
      stats_.bytes_sent += m.bytes.size();
      auto& box = *group_.boxes_[static_cast<std::size_t>(m.peer)];
      {
        std::lock_guard lock(box.mutex);
        box.from[static_cast<std::size_t>(rank_)].push_back({tag, std::move(m.bytes)});
      }
      box.ready.notify_all();
    }

    std::vector<int> wanted(sources.begin(), sources.end());
    std::sort(wanted.begin(), wanted.end());
    std::vector<Message> received;
    received.reserve(wanted.size());
    auto& box = *group_.boxes_[static_cast<std::size_t>(rank_)];
    const auto deadline = std::chrono::steady_clock::now() + group_.timeout();
    std::unique_lock lock(box.mutex);
    for (int source : wanted) {
      auto& queue = box.from[static_cast<std::size_t>(source)];
      while (queue.empty()) {
        if (group_.aborted_.load()) {
          std::lock_guard reason(group_.reason_mutex_);
          throw TransportAborted("transport aborted: " + group_.reason_);
        }
        if (box.ready.wait_until(lock, deadline) == std::cv_status::timeout && queue.empty()) {
          throw TransportTimeout("transport timeout: worker " + std::to_string(source) + " -> worker " +
                                     std::to_string(rank_) + " delivered nothing within " +
                                     std::to_string(group_.timeout().count()) + " ms",
                                 source, rank_);
        }
      }
      if (queue.front().tag != tag) {
        throw ProtocolError("transport: worker " + std::to_string(source) + " -> worker " + std::to_string(rank_) +
                            " message belongs to collective " + std::to_string(queue.front().tag) +
                            ", expected " + std::to_string(tag));
      }
      received.push_back({source, std::move(queue.front().bytes)});
      queue.pop_front();
    }
    return received;
  }

 private:
  InProcessGroup& group_;
  int rank_;
  std::uint64_t sequence_ = 0;
};

InProcessGroup::InProcessGroup(int size, std::chrono::milliseconds timeout) : size_(size), timeout_(timeout) {
  if (size < 1) throw std::invalid_argument("in-process group: size must be at least 1");
  for (int r = 0; r < size; ++r) {
    auto box = std::make_unique<Mailbox>();
    box->from.resize(static_cast<std::size_t>(size));
    boxes_.push_back(std::move(box));
  }
}

std::unique_ptr<Transport> InProcessGroup::endpoint(int rank) {
  if (rank < 0 || rank >= size_) throw std::invalid_argument("in-process group: invalid rank");
  return std::make_unique<InProcessTransport>(*this, rank);
}

void InProcessGroup::abort(const std::string& reason) {
  {
    std::lock_guard lock(reason_mutex_);
    if (reason_.empty()) reason_ = reason;
  }
  aborted_.store(true);
  for (auto& box : boxes_) {
    std::lock_guard lock(box->mutex);
    box->ready.notify_all();
  }
}

}  // namespace corticarc::partition
