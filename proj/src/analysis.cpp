#include "hsrsched/analysis.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "hsrsched/csv.hpp"

namespace hsrsched {

double constant_B(std::span<const ServiceSpec> services) {
  double b = 0.0;
  for (const auto& spec : services) {
    const double drain = spec.deficit_drain();
    const auto a = static_cast<double>(spec.max_arrivals);
    b += drain * drain + a * a;
  }
  return 0.5 * b;
}

double weighted_drop_objective(std::span<const double> deficits, std::span<const Packets> drops) {
  if (deficits.size() != drops.size()) {
    throw std::invalid_argument("weighted_drop_objective: length mismatch");
  }
  double sum = 0.0;
  for (std::size_t s = 0; s < drops.size(); ++s) sum += deficits[s] * static_cast<double>(drops[s]);
  return sum;
}

DriftReport check_sample_drift(const TraceLog& trace, double tolerance) {
  DriftReport report;
  report.constant_B = constant_B(trace.services);
  const std::size_t n = trace.services.size();
  std::vector<double> y(n, 0.0);
  double lyapunov = 0.0;
  for (const auto& row : trace.rows) {
    double next_lyapunov = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
      const double drain = trace.services[s].deficit_drain();
      const double d = static_cast<double>(row.services[s].drops);
      const double y_next = row.services[s].deficit;
      // lhs - rhs with Y^2 - 2 Y p + p^2 folded into (Y - p)^2 and the
      // difference of squares factored, so equal values cancel exactly.
      const double u = y[s] - drain;
      const double excess = (y_next - u) * (y_next + u) - d * d - 2.0 * y[s] * d;
      ++report.samples;
      if (excess > tolerance) {
        if (report.violations == 0) {
          report.first_violation = DriftViolation{s, row.frame, excess};
        }
        ++report.violations;
      }
      if (report.samples == 1 || excess > report.max_excess) report.max_excess = excess;
      next_lyapunov += 0.5 * y_next * y_next;
      y[s] = y_next;
    }
    lyapunov = next_lyapunov;
  }
  report.lyapunov_final = lyapunov;
  if (!trace.rows.empty()) report.mean_drift = lyapunov / static_cast<double>(trace.rows.size());
  return report;
}

bool PrefixBoundReport::passed() const {
  return std::all_of(services.begin(), services.end(), [](const PrefixBoundService& s) {
    return s.prefix_violations == 0 && (!s.rate_stable || s.drop_bound_holds);
  });
}

PrefixBoundReport check_lemma1(const TraceLog& trace, double rate_threshold, double tolerance) {
  if (trace.rows.size() < 2) throw std::invalid_argument("check_lemma1: need at least two frames");
  PrefixBoundReport report;
  const auto frames = static_cast<double>(trace.rows.size());
  for (std::size_t s = 0; s < trace.services.size(); ++s) {
    PrefixBoundService out;
    out.id = trace.services[s].id;
    const double drain = trace.services[s].deficit_drain();
    Packets cumulative_drops = 0;
    bool first = true;
    for (std::size_t l = 0; l < trace.rows.size(); ++l) {
      cumulative_drops += trace.rows[l].services[s].drops;
      // After frame l the prefix holds l + 1 terms and Y[0] = 0.
      const double lhs = trace.rows[l].services[s].deficit;
      const double rhs = static_cast<double>(cumulative_drops) - static_cast<double>(l + 1) * drain;
      const double excess = rhs - lhs;
      if (first || excess > out.max_excess) out.max_excess = excess;
      first = false;
      if (excess > tolerance) {
        if (out.prefix_violations == 0) out.first_violation_frame = trace.rows[l].frame;
        ++out.prefix_violations;
      }
    }
    const double y_final = trace.rows.back().services[s].deficit;
    out.final_rate = y_final / frames;
    out.rate_stable = out.final_rate < rate_threshold;
    out.mean_drops = static_cast<double>(cumulative_drops) / frames;
    out.drop_bound = drain + out.final_rate;
    out.drop_bound_holds = out.mean_drops <= out.drop_bound + tolerance;
    report.services.push_back(out);
  }
  return report;
}

// --- exhaustive oracle ------------------------------------------------------

namespace {

struct Enumerator {
  const OracleInstance& inst;
  std::span<const std::size_t> priority;
  std::span<const double> weights;
  std::vector<Packets> free;
  std::vector<Packets> drops;
  OracleResult best;
  bool have_best = false;

  bool lex_less(const std::vector<Packets>& a, const std::vector<Packets>& b) const {
    for (std::size_t s : priority) {
      if (a[s] != b[s]) return a[s] < b[s];
    }
    return false;
  }

  void leaf() {
    ++best.plans;
    const double w = weighted_drop_objective(weights, drops);
    if (!have_best) {
      best.lex_min_drops = drops;
      best.min_weighted = w;
      have_best = true;
      return;
    }
    if (lex_less(drops, best.lex_min_drops)) best.lex_min_drops = drops;
    best.min_weighted = std::min(best.min_weighted, w);
  }

  // Chooses how many packets of `service` go out on frame offset `i`.
  void place(std::size_t service, int i, Packets left) {
    if (service == inst.arrivals.size()) {
      leaf();
      return;
    }
    if (i == inst.deadlines[service]) {
      drops[service] = left;
      place(service + 1, 0, service + 1 < inst.arrivals.size() ? inst.arrivals[service + 1] : 0);
      return;
    }
    const auto slot = static_cast<std::size_t>(i);
    const Packets top = std::min(left, free[slot]);
    for (Packets x = 0; x <= top; ++x) {
      free[slot] -= x;
      place(service, i + 1, left - x);
      free[slot] += x;
    }
  }
};

void check_limits(const OracleInstance& inst, std::span<const std::size_t> priority,
                  const OracleLimits& limits) {
  const std::size_t n = inst.arrivals.size();
  if (n == 0 || n > limits.max_services) throw std::length_error("oracle: too many services");
  if (inst.deadlines.size() != n || priority.size() != n) {
    throw std::invalid_argument("oracle: arrivals, deadlines and priority must align");
  }
  int max_m = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (inst.deadlines[s] < 1 || inst.deadlines[s] > limits.max_deadline) {
      throw std::length_error("oracle: deadline outside guard");
    }
    if (inst.arrivals[s] < 0 || inst.arrivals[s] > limits.max_arrivals) {
      throw std::length_error("oracle: arrivals outside guard");
    }
    max_m = std::max(max_m, inst.deadlines[s]);
  }
  if (inst.residual.size() < static_cast<std::size_t>(max_m)) {
    throw std::invalid_argument("oracle: residual capacity shorter than the longest window");
  }
  for (Packets c : inst.residual) {
    if (c < 0 || c > limits.max_capacity) throw std::length_error("oracle: capacity outside guard");
  }
  std::vector<bool> seen(n, false);
  for (std::size_t s : priority) {
    if (s >= n || seen[s]) throw std::invalid_argument("oracle: priority is not a permutation");
    seen[s] = true;
  }
}

}  // namespace

OracleResult brute_force_enumerate(const OracleInstance& instance,
                                   std::span<const std::size_t> priority,
                                   std::span<const double> weights, const OracleLimits& limits) {
  check_limits(instance, priority, limits);
  std::vector<double> zero;
  if (weights.empty()) {
    zero.assign(instance.arrivals.size(), 0.0);
    weights = zero;
  }
  if (weights.size() != instance.arrivals.size()) throw std::invalid_argument("oracle: weights length");
  Enumerator e{instance, priority, weights, instance.residual,
               std::vector<Packets>(instance.arrivals.size(), 0), {}, false};
  e.place(0, 0, instance.arrivals[0]);
  return e.best;
}

std::vector<Packets> brute_force_lex_min_drops(const OracleInstance& instance,
                                               std::span<const std::size_t> priority,
                                               const OracleLimits& limits) {
  return brute_force_enumerate(instance, priority, {}, limits).lex_min_drops;
}

namespace {

Packets draw(std::mt19937_64& rng, Packets lo, Packets hi) {
  return lo + static_cast<Packets>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

OracleTrial random_oracle_trial(std::mt19937_64& rng, bool mixed_deadlines) {
  const auto n = static_cast<std::size_t>(draw(rng, 1, 3));
  const int common = static_cast<int>(draw(rng, 1, 3));
  std::vector<ServiceSpec> services;
  std::vector<DeficitQueue> deficits;
  std::vector<DeadlineQueue> queues;
  int max_m = 0;
  for (std::size_t s = 0; s < n; ++s) {
    ServiceSpec spec;
    spec.id = static_cast<int>(s) + 1;
    spec.lambda = static_cast<double>(draw(rng, 1, 5));
    spec.deadline = mixed_deadlines ? static_cast<int>(draw(rng, 1, 3)) : common;
    spec.delivery_ratio = 0.5 + 0.05 * static_cast<double>(draw(rng, 0, 9));
    spec.max_arrivals = 6;
    max_m = std::max(max_m, spec.deadline);
    deficits.emplace_back(spec.id, spec.deficit_drain());
    deficits.back().reset(0.25 * static_cast<double>(draw(rng, 0, 20)));
    queues.emplace_back(spec.id, spec.deadline);
    services.push_back(spec);
  }
  const auto warmup = draw(rng, 0, 2);
  std::vector<Packets> caps(static_cast<std::size_t>(warmup + 3));
  for (auto& c : caps) c = draw(rng, 0, 6);
  const CapacityProfile profile(caps);

  DcsaScheduler dcsa;
  auto arrivals_draw = [&] {
    std::vector<Packets> a(n);
    for (auto& x : a) x = draw(rng, 0, 6);
    return a;
  };
  for (std::int64_t k = 0; k < warmup; ++k) {
    const auto a = arrivals_draw();
    dcsa.on_arrivals(FrameContext{k, &profile, services, queues, deficits, a});
  }

  const std::int64_t k = warmup;
  OracleTrial trial;
  trial.instance.arrivals = arrivals_draw();
  trial.instance.deadlines.reserve(n);
  for (const auto& spec : services) trial.instance.deadlines.push_back(spec.deadline);
  for (int i = 0; i < max_m; ++i) {
    trial.instance.residual.push_back(profile.at_or_zero(k + i) - dcsa.plan().committed_total(k + i));
  }
  dcsa.on_arrivals(FrameContext{k, &profile, services, queues, deficits, trial.instance.arrivals});

  trial.priority.assign(dcsa.last_priority().begin(), dcsa.last_priority().end());
  trial.projected.assign(dcsa.last_projection().begin(), dcsa.last_projection().end());
  for (std::size_t s = 0; s < n; ++s) {
    trial.dcsa_drops.push_back(trial.instance.arrivals[s] - dcsa.cohort_committed(s, k));
  }
  const auto oracle = brute_force_enumerate(trial.instance, trial.priority, trial.projected);
  trial.oracle_drops = oracle.lex_min_drops;
  trial.best_objective = oracle.min_weighted;
  trial.dcsa_objective = weighted_drop_objective(trial.projected, trial.dcsa_drops);
  return trial;
}

OracleSummary run_oracle_trials(std::uint64_t seed, std::size_t count, bool mixed_deadlines) {
  OracleSummary summary;
  summary.mixed_deadlines = mixed_deadlines;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    OracleTrial trial = random_oracle_trial(rng, mixed_deadlines);
    ++summary.trials;
    if (trial.weighted_optimal()) ++summary.weighted_optimal;
    if (trial.lex_agrees()) {
      ++summary.lex_agreements;
    } else if (summary.disagreements.size() < 5) {
      summary.disagreements.push_back(std::move(trial));
    }
  }
  return summary;
}

// --- reports ----------------------------------------------------------------

namespace {

template <typename T>
std::string join(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += csv::real(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

}  // namespace

void write_report(std::ostream& out, std::string_view section, const DriftReport& r) {
  out << '[' << section << "]\n";
  out << "status = " << (r.passed() ? "pass" : "fail") << '\n';
  out << "samples = " << r.samples << '\n';
  out << "violations = " << r.violations << '\n';
  out << "max_excess = " << csv::real(r.max_excess) << '\n';
  if (r.first_violation) {
    out << "first_violation_service = " << r.first_violation->service + 1 << '\n';
    out << "first_violation_frame = " << r.first_violation->frame << '\n';
    out << "first_violation_excess = " << csv::real(r.first_violation->excess) << '\n';
  }
  out << "constant_B = " << csv::real(r.constant_B) << '\n';
  out << "mean_drift = " << csv::real(r.mean_drift) << '\n';
  out << "lyapunov_final = " << csv::real(r.lyapunov_final) << '\n';
}

void write_report(std::ostream& out, std::string_view section, const PrefixBoundReport& r) {
  out << '[' << section << "]\n";
  out << "status = " << (r.passed() ? "pass" : "fail") << '\n';
  for (const auto& s : r.services) {
    const std::string p = "service_" + std::to_string(s.id) + '_';
    out << p << "prefix_violations = " << s.prefix_violations << '\n';
    out << p << "max_excess = " << csv::real(s.max_excess) << '\n';
    if (s.first_violation_frame) out << p << "first_violation_frame = " << *s.first_violation_frame << '\n';
    out << p << "final_rate = " << csv::real(s.final_rate) << '\n';
    out << p << "rate_stable = " << (s.rate_stable ? "true" : "false") << '\n';
    out << p << "mean_drops = " << csv::real(s.mean_drops) << '\n';
    out << p << "drop_bound = " << csv::real(s.drop_bound) << '\n';
    out << p << "drop_bound_holds = " << (s.drop_bound_holds ? "true" : "false") << '\n';
  }
}

void write_report(std::ostream& out, std::string_view section, const OracleSummary& r) {
  out << '[' << section << "]\n";
  out << "status = " << (r.all_agree() ? "pass" : "fail") << '\n';
  out << "deadlines = " << (r.mixed_deadlines ? "mixed" : "common") << '\n';
  out << "trials = " << r.trials << '\n';
  out << "lex_agreements = " << r.lex_agreements << '\n';
  out << "weighted_optimal = " << r.weighted_optimal << '\n';
  for (std::size_t i = 0; i < r.disagreements.size(); ++i) {
    const auto& t = r.disagreements[i];
    const std::string p = "disagreement_" + std::to_string(i + 1) + '_';
    out << p << "arrivals = " << join(t.instance.arrivals) << '\n';
    out << p << "deadlines = " << join(t.instance.deadlines) << '\n';
    out << p << "residual = " << join(t.instance.residual) << '\n';
    std::vector<std::size_t> order;
    for (std::size_t s : t.priority) order.push_back(s + 1);
    out << p << "priority = " << join(order) << '\n';
    out << p << "dcsa_drops = " << join(t.dcsa_drops) << '\n';
    out << p << "oracle_drops = " << join(t.oracle_drops) << '\n';
  }
}

}  // namespace hsrsched
