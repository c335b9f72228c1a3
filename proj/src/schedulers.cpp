#include "hsrsched/schedulers.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hsrsched {

std::string_view to_string(Policy policy) {
  switch (policy) {
    case Policy::dcsa: return "dcsa";
    case Policy::rr: return "rr";
    case Policy::edf: return "edf";
  }
  return "?";
}

Policy parse_policy(std::string_view text) {
  if (text == "dcsa") return Policy::dcsa;
  if (text == "rr") return Policy::rr;
  if (text == "edf") return Policy::edf;
  throw std::invalid_argument("unknown scheduler '" + std::string(text) + "' (dcsa|rr|edf)");
}

std::unique_ptr<Scheduler> make_scheduler(Policy policy) {
  switch (policy) {
    case Policy::dcsa: return std::make_unique<DcsaScheduler>();
    case Policy::rr: return std::make_unique<RoundRobinScheduler>();
    case Policy::edf: return std::make_unique<EdfScheduler>();
  }
  throw std::invalid_argument("make_scheduler: bad policy");
}

FrameServed rr_decide(const FrameContext& ctx) {
  FrameServed out(ctx.queues);
  if (ctx.queues.empty()) return out;
  const auto chosen = static_cast<std::size_t>(ctx.frame % static_cast<std::int64_t>(ctx.queues.size()));
  Packets left = ctx.capacity_at(ctx.frame);
  const auto buckets = ctx.queues[chosen].buckets();
  for (std::size_t i = 0; i < buckets.size() && left > 0; ++i) {
    const Packets x = std::min(buckets[i], left);
    out.counts[chosen][i] = x;
    left -= x;
  }
  return out;
}

FrameServed edf_decide(const FrameContext& ctx) {
  FrameServed out(ctx.queues);
  Packets left = ctx.capacity_at(ctx.frame);
  int max_deadline = 0;
  for (const auto& q : ctx.queues) max_deadline = std::max(max_deadline, q.deadline());
  for (int r = 1; r <= max_deadline && left > 0; ++r) {
    for (std::size_t s = 0; s < ctx.queues.size() && left > 0; ++s) {
      if (r > ctx.queues[s].deadline()) continue;
      const Packets x = std::min(ctx.queues[s].bucket(r), left);
      out.counts[s][static_cast<std::size_t>(r - 1)] = x;
      left -= x;
    }
  }
  return out;
}

// --- AllocationPlan ---------------------------------------------------------

void AllocationPlan::commit(std::int64_t frame, std::size_t service, int r, Packets count) {
  if (count == 0) return;
  if (count < 0) throw ContractError("AllocationPlan: negative commitment");
  auto [it, inserted] = rows_.try_emplace(frame);
  if (inserted) {
    it->second.served.counts.reserve(deadlines_.size());
    for (int m : deadlines_) it->second.served.counts.emplace_back(static_cast<std::size_t>(m), 0);
  }
  it->second.served.counts.at(service).at(static_cast<std::size_t>(r - 1)) += count;
  it->second.total += count;
}

Packets AllocationPlan::committed_total(std::int64_t frame) const {
  const auto it = rows_.find(frame);
  return it == rows_.end() ? 0 : it->second.total;
}

Packets AllocationPlan::committed(std::int64_t frame, std::size_t service, int r) const {
  const auto it = rows_.find(frame);
  if (it == rows_.end()) return 0;
  return it->second.served.counts.at(service).at(static_cast<std::size_t>(r - 1));
}

FrameServed AllocationPlan::row(std::int64_t frame) const {
  const auto it = rows_.find(frame);
  if (it != rows_.end()) return it->second.served;
  FrameServed empty;
  for (int m : deadlines_) empty.counts.emplace_back(static_cast<std::size_t>(m), 0);
  return empty;
}

void AllocationPlan::erase_before(std::int64_t frame) {
  rows_.erase(rows_.begin(), rows_.lower_bound(frame));
}

// --- DCSA -------------------------------------------------------------------

double projected_deficit(double current, double drain, std::span<const Packets> pending_drops) {
  double y = current;
  for (Packets d : pending_drops) y = deficit_update(y, drain, d);
  return y;
}

void DcsaScheduler::ensure_shape(const FrameContext& ctx) {
  if (started_) return;
  std::vector<int> deadlines;
  for (const auto& spec : ctx.services) deadlines.push_back(spec.deadline);
  plan_ = AllocationPlan(std::move(deadlines));
  cohorts_.assign(ctx.services.size(), {});
  first_frame_ = ctx.frame;
  last_planned_ = ctx.frame - 1;
  started_ = true;
}

Packets DcsaScheduler::cohort_committed(std::size_t service, std::int64_t frame) const {
  for (const auto& c : cohorts_.at(service)) {
    if (c.frame == frame) return c.committed;
  }
  throw ContractError("DCSA: no cohort recorded for frame " + std::to_string(frame));
}

std::vector<Packets> DcsaScheduler::pending_drops(std::size_t service, const ServiceSpec& spec,
                                                  std::int64_t frame) const {
  const int m = spec.deadline;
  std::vector<Packets> drops;
  drops.reserve(static_cast<std::size_t>(m > 0 ? m - 1 : 0));
  for (int j = 0; j + 1 < m; ++j) {
    const std::int64_t cohort = frame + j - m + 1;
    if (cohort < first_frame_) {
      drops.push_back(0);
      continue;
    }
    const auto& list = cohorts_.at(service);
    const auto it = std::find_if(list.begin(), list.end(),
                                 [cohort](const Cohort& c) { return c.frame == cohort; });
    if (it == list.end()) {
      throw ContractError("DCSA: cohort " + std::to_string(cohort) + " of service " +
                          std::to_string(spec.id) + " has no committed plan");
    }
    drops.push_back(it->arrivals - it->committed);
  }
  return drops;
}

void DcsaScheduler::on_arrivals(const FrameContext& ctx) {
  ensure_shape(ctx);
  const std::int64_t k = ctx.frame;
  if (k != last_planned_ + 1) {
    throw ContractError("DCSA: frames must be planned in order");
  }
  last_planned_ = k;
  plan_.erase_before(k);
  for (std::size_t s = 0; s < cohorts_.size(); ++s) {
    const std::int64_t oldest_needed = k - ctx.services[s].deadline + 1;
    auto& list = cohorts_[s];
    while (!list.empty() && list.front().frame < oldest_needed) list.pop_front();
  }

  const std::size_t n = ctx.services.size();
  last_projection_.assign(n, 0.0);
  for (std::size_t s = 0; s < n; ++s) {
    const auto drops = pending_drops(s, ctx.services[s], k);
    last_projection_[s] =
        projected_deficit(ctx.deficits[s].value(), ctx.services[s].deficit_drain(), drops);
  }
  last_priority_.resize(n);
  std::iota(last_priority_.begin(), last_priority_.end(), std::size_t{0});
  std::stable_sort(last_priority_.begin(), last_priority_.end(), [&](std::size_t a, std::size_t b) {
    return last_projection_[a] > last_projection_[b];
  });

  for (std::size_t s : last_priority_) {
    const int m = ctx.services[s].deadline;
    const Packets arrivals = ctx.arrivals[s];
    Packets remaining = arrivals;
    for (int i = 0; i < m && remaining > 0; ++i) {
      const std::int64_t f = k + i;
      const Packets free = std::max<Packets>(ctx.capacity_at(f) - plan_.committed_total(f), 0);
      const Packets x = std::min(remaining, free);
      plan_.commit(f, s, m - i, x);
      remaining -= x;
    }
    cohorts_[s].push_back(Cohort{k, arrivals, arrivals - remaining});
  }
}

FrameServed DcsaScheduler::decide(const FrameContext& ctx) {
  if (!started_ || ctx.frame != last_planned_) {
    throw ContractError("DCSA: decide called before on_arrivals for this frame");
  }
  return plan_.row(ctx.frame);
}

}  // namespace hsrsched
