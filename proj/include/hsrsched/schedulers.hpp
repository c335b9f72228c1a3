// Scheduling policies behind one per-frame contract.
//
// Every policy returns, for frame k, how many packets of each (service,
// bucket) to transmit.  The result must fit the frame capacity and never
// exceed a bucket's content.
#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "hsrsched/channel.hpp"
#include "hsrsched/queueing.hpp"
#include "hsrsched/traffic.hpp"

namespace hsrsched {

enum class Policy { dcsa, rr, edf };

std::string_view to_string(Policy policy);
/// Throws std::invalid_argument for anything but dcsa, rr or edf.
Policy parse_policy(std::string_view text);

/// Read-only view of one frame handed to a scheduler.  Services are indexed
/// in ascending id order; services, queues, deficits and arrivals align.
struct FrameContext {
  std::int64_t frame = 0;
  const CapacityProfile* capacity = nullptr;
  std::span<const ServiceSpec> services;
  std::span<const DeadlineQueue> queues;
  std::span<const DeficitQueue> deficits;
  std::span<const Packets> arrivals;

  Packets capacity_at(std::int64_t k) const { return capacity->at_or_zero(k); }
};

class Scheduler {
 public:
  virtual ~Scheduler() = default;
  virtual Policy policy() const = 0;
  /// Runs after admission and before decide.  Only lookahead policies use it.
  virtual void on_arrivals(const FrameContext&) {}
  virtual FrameServed decide(const FrameContext& ctx) = 0;
};

std::unique_ptr<Scheduler> make_scheduler(Policy policy);

/// Serves service (k mod S) only, most urgent bucket first.
FrameServed rr_decide(const FrameContext& ctx);

/// Serves packets in increasing frames-to-go across all services; equal
/// urgency goes to the lower service id.
FrameServed edf_decide(const FrameContext& ctx);

class RoundRobinScheduler final : public Scheduler {
 public:
  Policy policy() const override { return Policy::rr; }
  FrameServed decide(const FrameContext& ctx) override { return rr_decide(ctx); }
};

class EdfScheduler final : public Scheduler {
 public:
  Policy policy() const override { return Policy::edf; }
  FrameServed decide(const FrameContext& ctx) override { return edf_decide(ctx); }
};

/// Committed transmissions per future frame.  A frame's row never exceeds
/// that frame's capacity; rows are dropped once their frame has executed.
class AllocationPlan {
 public:
  AllocationPlan() = default;
  explicit AllocationPlan(std::vector<int> deadlines) : deadlines_(std::move(deadlines)) {}

  void commit(std::int64_t frame, std::size_t service, int r, Packets count);
  Packets committed_total(std::int64_t frame) const;
  Packets committed(std::int64_t frame, std::size_t service, int r) const;
  /// The committed row for a frame, all zeros if nothing was committed.
  FrameServed row(std::int64_t frame) const;
  void erase_before(std::int64_t frame);
  std::size_t horizon_size() const { return rows_.size(); }

 private:
  struct Row {
    FrameServed served;
    Packets total = 0;
  };
  std::vector<int> deadlines_;
  std::map<std::int64_t, Row> rows_;
};

/// Iterates the deficit recursion forward over drops that are already fixed.
/// With m - 1 pending drops this yields Y[k + m - 1] from Y[k].
double projected_deficit(double current, double drain, std::span<const Packets> pending_drops);

/// Lookahead scheduler: when a cohort arrives its whole lifetime is planned
/// at once.  Services are taken in descending projected deficit (ties to the
/// lower id); each fills the earliest frames of its window with whatever
/// capacity earlier cohorts and higher-priority services left.  Capacity
/// nobody committed is left idle.
class DcsaScheduler final : public Scheduler {
 public:
  Policy policy() const override { return Policy::dcsa; }
  void on_arrivals(const FrameContext& ctx) override;
  FrameServed decide(const FrameContext& ctx) override;

  /// Drops of the pre-k cohorts that expire on frames k .. k+m-2, in order.
  std::vector<Packets> pending_drops(std::size_t service, const ServiceSpec& spec,
                                     std::int64_t frame) const;

  const AllocationPlan& plan() const { return plan_; }
  /// Service indices in the order used by the most recent on_arrivals call.
  std::span<const std::size_t> last_priority() const { return last_priority_; }
  std::span<const double> last_projection() const { return last_projection_; }
  /// Packets committed to the cohort that arrived at `frame`.
  Packets cohort_committed(std::size_t service, std::int64_t frame) const;

 private:
  struct Cohort {
    std::int64_t frame;
    Packets arrivals;
    Packets committed;
  };
  void ensure_shape(const FrameContext& ctx);

  bool started_ = false;
  std::int64_t first_frame_ = 0;
  std::int64_t last_planned_ = -1;
  AllocationPlan plan_;
  std::vector<std::deque<Cohort>> cohorts_;
  std::vector<std::size_t> last_priority_;
  std::vector<double> last_projection_;
};

}  // namespace hsrsched
