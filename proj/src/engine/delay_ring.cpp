#include "corticarc/engine/delay_ring.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace corticarc::engine {

namespace {

constexpr std::uint64_t kNoStep = std::numeric_limits<std::uint64_t>::max();

}  // namespace

DelayRing::DelayRing(std::uint16_t max_delay, double timestep_ms) : max_delay_(max_delay), dt_(timestep_ms) {
  if (max_delay < 1) throw std::invalid_argument("delay ring: max_delay must be at least 1");
  buckets_.resize(max_delay);
  bucket_step_.assign(max_delay, kNoStep);
}

void DelayRing::insert(std::uint64_t emission_step, const ArrivedSpike& spike) {
  if (spike.synapses.empty()) return;
  const std::uint16_t lo = spike.synapses.front().delay;
  const std::uint16_t hi = spike.synapses.back().delay;
  if (lo < 1 || hi > max_delay_) {
    throw std::logic_error("delay ring: delay " + std::to_string(lo < 1 ? lo : hi) + " outside [1, " +
                           std::to_string(max_delay_) + "]");
  }
  const std::size_t b = emission_step % max_delay_;
  if (bucket_step_[b] != emission_step) {
    if (bucket_step_[b] != kNoStep && bucket_step_[b] > emission_step) {
      throw std::logic_error("delay ring: emission step " + std::to_string(emission_step) + " inserted after " +
                             std::to_string(bucket_step_[b]));
    }
    buckets_[b].clear();
    bucket_step_[b] = emission_step;
  }
  buckets_[b].push_back(spike);
}

void DelayRing::drain(std::uint64_t step, std::vector<RingEvent>& out) const {
  out.clear();
  for_each_due(step, [&](const RingEvent& e) { out.push_back(e); });
}

std::uint64_t DelayRing::held() const {
  std::uint64_t n = 0;
  for (const auto& b : buckets_) n += b.size();
  return n;
}

std::uint64_t DelayRing::capacity_bytes() const {
  std::uint64_t bytes = 0;
  for (const auto& b : buckets_) bytes += b.capacity() * sizeof(ArrivedSpike);
  return bytes;
}

}  // namespace corticarc::engine
