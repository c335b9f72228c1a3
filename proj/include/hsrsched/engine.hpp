// Frame loop wiring channel, traffic, queues and one scheduler, plus the
// trace it records and the parameter sweeps built on top of it.
#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hsrsched/channel.hpp"
#include "hsrsched/queueing.hpp"
#include "hsrsched/schedulers.hpp"
#include "hsrsched/traffic.hpp"

namespace hsrsched {

struct SimConfig {
  TrajectoryConfig trajectory;
  RadioConfig radio;
  std::vector<ServiceSpec> services;
  Policy scheduler = Policy::dcsa;
  std::uint64_t seed = 42;
  std::optional<std::size_t> num_frames;      // defaults to the trip's frame count
  std::optional<Packets> capacity_override;   // constant C[k] instead of the channel
  double tail_eps = kDefaultTailEps;

  /// Throws std::invalid_argument on any broken invariant.
  void validate() const;
  std::size_t frames() const { return num_frames.value_or(trajectory.frame_count()); }
  CapacityProfile capacity() const;

  bool operator==(const SimConfig&) const = default;
};

struct ServiceFrame {
  Packets arrivals = 0;
  Packets served = 0;
  Packets drops = 0;
  double deficit = 0.0;   // counter after this frame's update
  Packets backlog = 0;    // left in the queue after aging

  bool operator==(const ServiceFrame&) const = default;
};

struct TraceRow {
  std::int64_t frame = 0;
  Packets capacity = 0;
  std::vector<ServiceFrame> services;

  bool operator==(const TraceRow&) const = default;
};

/// Fate of the packets that arrived for one service in one frame.
struct CohortRecord {
  std::int64_t arrival_frame = 0;
  Packets arrivals = 0;
  Packets served = 0;
  Packets dropped = 0;
  bool resolved = false;  // its last frame has executed

  bool operator==(const CohortRecord&) const = default;
};

struct ServiceSummary {
  int id = 0;
  Packets arrivals = 0;
  Packets served = 0;
  Packets drops = 0;
  Packets final_backlog = 0;
  double final_deficit = 0.0;
  std::optional<double> delivery_ratio;

  bool operator==(const ServiceSummary&) const = default;
};

struct RunSummary {
  Policy scheduler = Policy::dcsa;
  std::uint64_t seed = 0;
  std::size_t frames = 0;
  Feasibility feasibility;
  std::vector<ServiceSummary> services;
};

struct TraceLog {
  std::vector<ServiceSpec> services;
  Policy scheduler = Policy::dcsa;
  std::uint64_t seed = 0;
  Feasibility feasibility;
  std::vector<TraceRow> rows;
  std::vector<std::vector<CohortRecord>> cohorts;  // [service][arrival frame]

  RunSummary summary() const;
};

/// What a scheduler saw and chose on one frame, before aging.
struct FrameObservation {
  std::int64_t frame = 0;
  Packets capacity = 0;
  std::span<const DeadlineQueue> queues;
  const FrameServed* served = nullptr;
};

using FrameObserver = std::function<void(const FrameObservation&)>;

/// Runs the whole trip.  The observer, if any, sees every frame's decision.
/// Throws std::invalid_argument for a bad config and ContractError if a
/// scheduler breaks the capacity or bucket constraints.
TraceLog run(const SimConfig& config, const FrameObserver& observer = {});

/// (arrivals - drops) / arrivals over the trace; empty when nothing arrived.
std::optional<double> delivery_ratio(const TraceLog& trace, std::size_t service);

/// CSV with a "# schema=1" line, header, one row per frame.
void write_trace_csv(std::ostream& out, const TraceLog& trace);
void write_summary(std::ostream& out, const RunSummary& summary);

struct SweepGrid {
  std::vector<int> deadlines;
  std::vector<double> lambdas;

  bool empty() const { return deadlines.empty() && lambdas.empty(); }
  bool operator==(const SweepGrid&) const = default;
};

struct SweepPoint {
  std::optional<int> deadline;
  std::optional<double> lambda;
};

struct SweepResult {
  std::size_t index = 0;
  SweepPoint point;
  std::uint64_t seed = 0;
  std::optional<RunSummary> summary;
  std::string error;  // set when the run failed; the sweep carries on
};

/// Grid points in deadline-major order.  A dimension left empty is not varied;
/// both empty means no points.
std::vector<SweepPoint> expand_grid(const SweepGrid& grid);

/// Point applied to every service of the base config, seed = base seed xor index.
SimConfig apply_point(const SimConfig& base, const SweepPoint& point, std::size_t index);

/// One independent run per grid point, spread over `workers` threads
/// (0 picks the hardware concurrency).  Results come back in grid order.
std::vector<SweepResult> sweep(const SimConfig& base, const SweepGrid& grid, unsigned workers = 0);

}  // namespace hsrsched
