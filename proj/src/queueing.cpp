#include "hsrsched/queueing.hpp"

#include <numeric>

namespace hsrsched {

DeadlineQueue::DeadlineQueue(int service_id, int deadline) : service_id_(service_id) {
  if (deadline < 1) throw std::invalid_argument("DeadlineQueue: deadline must be >= 1");
  buckets_.assign(static_cast<std::size_t>(deadline), 0);
}

void DeadlineQueue::admit(Packets arrivals) {
  if (arrivals < 0) throw ContractError("admit: negative arrivals");
  if (buckets_.back() != 0) {
    throw ContractError("admit: bucket m of service " + std::to_string(service_id_) +
                        " not cleared by the previous frame");
  }
  buckets_.back() = arrivals;
  backlog_ += arrivals;
}

Packets DeadlineQueue::serve_and_age(std::span<const Packets> served) {
  if (served.size() != buckets_.size()) {
    throw ContractError("serve_and_age: served vector has wrong length");
  }
  for (std::size_t i = 0; i < buckets_.size(); ++i) {
    if (served[i] < 0 || served[i] > buckets_[i]) {
      throw ContractError("serve_and_age: service " + std::to_string(service_id_) + " bucket " +
                          std::to_string(i + 1) + " overserved");
    }
  }
  const Packets dropped = buckets_.front() - served.front();
  for (std::size_t i = 0; i + 1 < buckets_.size(); ++i) {
    buckets_[i] = buckets_[i + 1] - served[i + 1];
  }
  buckets_.back() = 0;
  backlog_ = std::accumulate(buckets_.begin(), buckets_.end(), Packets{0});
  return dropped;
}

void DeficitQueue::reset(double value) {
  if (!(value >= 0.0)) throw std::invalid_argument("DeficitQueue: value must be non-negative");
  value_ = value;
}

Packets cohort_drops(Packets arrivals, std::span<const Packets> scheduled_over_lifetime) {
  Packets scheduled = 0;
  for (Packets x : scheduled_over_lifetime) {
    if (x < 0) throw ContractError("cohort_drops: negative allocation");
    scheduled += x;
  }
  if (scheduled > arrivals) throw ContractError("cohort_drops: cohort oversubscribed");
  return arrivals - scheduled;
}

FrameServed::FrameServed(std::span<const DeadlineQueue> queues) {
  counts.reserve(queues.size());
  for (const auto& q : queues) counts.emplace_back(static_cast<std::size_t>(q.deadline()), 0);
}

Packets FrameServed::service_total(std::size_t s) const {
  return std::accumulate(counts[s].begin(), counts[s].end(), Packets{0});
}

Packets FrameServed::total() const {
  Packets t = 0;
  for (std::size_t s = 0; s < counts.size(); ++s) t += service_total(s);
  return t;
}

}  // namespace hsrsched
