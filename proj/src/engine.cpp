#include "hsrsched/engine.hpp"

#include <atomic>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

#include "hsrsched/csv.hpp"

namespace hsrsched {

void SimConfig::validate() const {
  trajectory.validate();
  radio.validate();
  if (services.empty()) throw std::invalid_argument("at least one service is required");
  for (std::size_t s = 0; s < services.size(); ++s) {
    if (services[s].id != static_cast<int>(s) + 1) {
      throw std::invalid_argument("service ids must be 1..S in order");
    }
    services[s].validate();
  }
  if (num_frames && *num_frames > trajectory.frame_count()) {
    throw std::invalid_argument("frames (" + std::to_string(*num_frames) +
                                ") exceeds the trip's frame count (" +
                                std::to_string(trajectory.frame_count()) + ")");
  }
  if (capacity_override && *capacity_override < 0) {
    throw std::invalid_argument("capacity_override must be non-negative");
  }
  if (!(tail_eps > 0.0 && tail_eps < 1.0)) throw std::invalid_argument("tail_eps must lie in (0,1)");
}

CapacityProfile SimConfig::capacity() const {
  if (capacity_override) return CapacityProfile::constant(trajectory.frame_count(), *capacity_override);
  return build_capacity_profile(trajectory, radio);
}

RunSummary TraceLog::summary() const {
  RunSummary out;
  out.scheduler = scheduler;
  out.seed = seed;
  out.frames = rows.size();
  out.feasibility = feasibility;
  for (std::size_t s = 0; s < services.size(); ++s) {
    ServiceSummary sum;
    sum.id = services[s].id;
    for (const auto& row : rows) {
      sum.arrivals += row.services[s].arrivals;
      sum.served += row.services[s].served;
      sum.drops += row.services[s].drops;
    }
    if (!rows.empty()) {
      sum.final_backlog = rows.back().services[s].backlog;
      sum.final_deficit = rows.back().services[s].deficit;
    }
    if (sum.arrivals > 0) {
      sum.delivery_ratio =
          static_cast<double>(sum.arrivals - sum.drops) / static_cast<double>(sum.arrivals);
    }
    out.services.push_back(sum);
  }
  return out;
}

TraceLog run(const SimConfig& config, const FrameObserver& observer) {
  config.validate();
  const CapacityProfile profile = config.capacity();
  const std::size_t frames = config.frames();
  const std::size_t n = config.services.size();

  std::vector<DeadlineQueue> queues;
  std::vector<DeficitQueue> deficits;
  for (const auto& spec : config.services) {
    queues.emplace_back(spec.id, spec.deadline);
    deficits.emplace_back(spec.id, spec.deficit_drain());
  }
  ArrivalGenerator arrivals_gen(config.services, config.seed);
  auto scheduler = make_scheduler(config.scheduler);

  TraceLog trace;
  trace.services = config.services;
  trace.scheduler = config.scheduler;
  trace.seed = config.seed;
  trace.feasibility = feasibility_check(config.services, profile);
  trace.rows.reserve(frames);
  trace.cohorts.assign(n, {});
  for (auto& c : trace.cohorts) c.reserve(frames);

  for (std::size_t frame = 0; frame < frames; ++frame) {
    const auto k = static_cast<std::int64_t>(frame);
    const Packets capacity = profile[frame];
    const ArrivalVector arrivals = arrivals_gen.next();
    for (std::size_t s = 0; s < n; ++s) {
      queues[s].admit(arrivals[s]);
      trace.cohorts[s].push_back(CohortRecord{k, arrivals[s], 0, 0, false});
    }

    const FrameContext ctx{k, &profile, config.services, queues, deficits, arrivals};
    scheduler->on_arrivals(ctx);
    const FrameServed served = scheduler->decide(ctx);

    if (served.counts.size() != n) throw ContractError("scheduler returned wrong service count");
    for (std::size_t s = 0; s < n; ++s) {
      if (served.counts[s].size() != static_cast<std::size_t>(config.services[s].deadline)) {
        throw ContractError("scheduler returned wrong bucket count");
      }
    }
    if (served.total() > capacity) {
      throw ContractError("frame " + std::to_string(k) + ": served " +
                          std::to_string(served.total()) + " exceeds capacity " +
                          std::to_string(capacity));
    }
    if (observer) observer(FrameObservation{k, capacity, queues, &served});

    TraceRow row{k, capacity, std::vector<ServiceFrame>(n)};
    for (std::size_t s = 0; s < n; ++s) {
      const int m = config.services[s].deadline;
      const Packets dropped = queues[s].serve_and_age(served.counts[s]);
      auto& cohorts = trace.cohorts[s];
      for (int r = 1; r <= m; ++r) {
        const Packets x = served.counts[s][static_cast<std::size_t>(r - 1)];
        if (x > 0) cohorts[static_cast<std::size_t>(k - (m - r))].served += x;
      }
      const std::int64_t expiring = k - m + 1;
      if (expiring >= 0) {
        auto& c = cohorts[static_cast<std::size_t>(expiring)];
        c.dropped = dropped;
        c.resolved = true;
      }
      deficits[s].update(dropped);
      row.services[s] = ServiceFrame{arrivals[s], served.service_total(s), dropped,
                                     deficits[s].value(), queues[s].backlog()};
    }
    trace.rows.push_back(std::move(row));
  }
  return trace;
}

std::optional<double> delivery_ratio(const TraceLog& trace, std::size_t service) {
  Packets arrivals = 0;
  Packets drops = 0;
  for (const auto& row : trace.rows) {
    arrivals += row.services.at(service).arrivals;
    drops += row.services.at(service).drops;
  }
  if (arrivals == 0) return std::nullopt;
  return static_cast<double>(arrivals - drops) / static_cast<double>(arrivals);
}

void write_trace_csv(std::ostream& out, const TraceLog& trace) {
  out << "# schema=1\n";
  out << "frame,capacity";
  for (const auto& spec : trace.services) {
    const std::string id = std::to_string(spec.id);
    out << ",arrivals_" << id << ",served_" << id << ",drops_" << id << ",deficit_" << id
        << ",backlog_" << id;
  }
  out << '\n';
  for (const auto& row : trace.rows) {
    out << row.frame << ',' << row.capacity;
    for (const auto& sf : row.services) {
      out << ',' << sf.arrivals << ',' << sf.served << ',' << sf.drops << ','
          << csv::real(sf.deficit) << ',' << sf.backlog;
    }
    out << '\n';
  }
}

void write_summary(std::ostream& out, const RunSummary& summary) {
  out << "[run]\n";
  out << "scheduler = " << to_string(summary.scheduler) << '\n';
  out << "seed = " << summary.seed << '\n';
  out << "frames = " << summary.frames << '\n';
  out << "feasible = " << (summary.feasibility.feasible ? "true" : "false") << '\n';
  out << "demand = " << csv::real(summary.feasibility.demand) << '\n';
  out << "mean_capacity = " << csv::real(summary.feasibility.mean_capacity) << '\n';
  out << "feasibility_margin = " << csv::real(summary.feasibility.margin) << '\n';
  for (const auto& s : summary.services) {
    out << "\n[service." << s.id << "]\n";
    out << "arrivals = " << s.arrivals << '\n';
    out << "served = " << s.served << '\n';
    out << "drops = " << s.drops << '\n';
    out << "final_backlog = " << s.final_backlog << '\n';
    out << "final_deficit = " << csv::real(s.final_deficit) << '\n';
    out << "delivery_ratio = "
        << (s.delivery_ratio ? csv::real(*s.delivery_ratio) : std::string("absent")) << '\n';
  }
}

std::vector<SweepPoint> expand_grid(const SweepGrid& grid) {
  std::vector<SweepPoint> points;
  if (grid.deadlines.empty() && grid.lambdas.empty()) return points;
  if (grid.lambdas.empty()) {
    for (int m : grid.deadlines) points.push_back({m, std::nullopt});
  } else if (grid.deadlines.empty()) {
    for (double l : grid.lambdas) points.push_back({std::nullopt, l});
  } else {
    for (int m : grid.deadlines) {
      for (double l : grid.lambdas) points.push_back({m, l});
    }
  }
  return points;
}

SimConfig apply_point(const SimConfig& base, const SweepPoint& point, std::size_t index) {
  SimConfig cfg = base;
  for (auto& spec : cfg.services) {
    if (point.deadline) spec.deadline = *point.deadline;
    if (point.lambda) {
      spec.lambda = *point.lambda;
      spec.max_arrivals = arrival_bound(spec.lambda, cfg.tail_eps);
    }
  }
  cfg.seed = base.seed ^ static_cast<std::uint64_t>(index);
  return cfg;
}

std::vector<SweepResult> sweep(const SimConfig& base, const SweepGrid& grid, unsigned workers) {
  const auto points = expand_grid(grid);
  std::vector<SweepResult> results(points.size());
  if (points.empty()) return results;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(points.size()));

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      SweepResult& res = results[i];
      res.index = i;
      res.point = points[i];
      try {
        const SimConfig cfg = apply_point(base, points[i], i);
        res.seed = cfg.seed;
        res.summary = run(cfg).summary();
      } catch (const std::exception& e) {
        res.error = e.what();
      }
    }
  };
  std::vector<std::jthread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  pool.clear();  // joins
  return results;
}

}  // namespace hsrsched
