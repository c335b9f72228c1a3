// Deadline-bucket queues and deficit counters.
//
// A service with deadline m keeps m buckets; bucket r holds the packets that
// have r frames left before expiry.  Each frame runs
//   admit -> schedule -> serve_and_age -> deficit update
// and whatever is left in bucket 1 after service is dropped.
#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hsrsched/channel.hpp"

namespace hsrsched {

/// Raised when a caller breaks the frame sequencing or serving contract.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

class DeadlineQueue {
 public:
  DeadlineQueue(int service_id, int deadline);

  int service_id() const { return service_id_; }
  int deadline() const { return static_cast<int>(buckets_.size()); }

  /// Content of bucket r, 1 <= r <= deadline.
  Packets bucket(int r) const { return buckets_.at(static_cast<std::size_t>(r - 1)); }
  /// Buckets in frames-to-go order, index 0 is r = 1.
  std::span<const Packets> buckets() const { return buckets_; }
  Packets backlog() const { return backlog_; }

  /// Places this frame's arrivals in bucket m.  Bucket m must be empty.
  void admit(Packets arrivals);

  /// Removes served packets, drops what is left in bucket 1 and shifts every
  /// other bucket one step closer to expiry.  Returns the drop count.
  Packets serve_and_age(std::span<const Packets> served);

 private:
  int service_id_;
  std::vector<Packets> buckets_;
  Packets backlog_ = 0;
};

/// (y - drain)^+ + dropped
inline double deficit_update(double y, double drain, Packets dropped) {
  const double drained = y - drain;
  return (drained > 0.0 ? drained : 0.0) + static_cast<double>(dropped);
}

class DeficitQueue {
 public:
  DeficitQueue() = default;
  DeficitQueue(int service_id, double drain) : service_id_(service_id), drain_(drain) {}

  int service_id() const { return service_id_; }
  double drain() const { return drain_; }
  double value() const { return value_; }

  void update(Packets dropped) { value_ = deficit_update(value_, drain_, dropped); }

  /// Test and oracle hook: start from an arbitrary non-negative counter.
  void reset(double value);

 private:
  int service_id_ = 0;
  double drain_ = 0.0;
  double value_ = 0.0;
};

/// Drops of one arrival cohort given what was scheduled for it on each frame
/// of its lifetime.
Packets cohort_drops(Packets arrivals, std::span<const Packets> scheduled_over_lifetime);

/// Per-service, per-bucket transmission counts for one frame.
struct FrameServed {
  std::vector<std::vector<Packets>> counts;  // [service][r - 1]

  FrameServed() = default;
  explicit FrameServed(std::span<const DeadlineQueue> queues);

  Packets total() const;
  Packets service_total(std::size_t s) const;
  bool operator==(const FrameServed&) const = default;
};

}  // namespace hsrsched
