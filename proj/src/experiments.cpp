#include "hsrsched/experiments.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "hsrsched/csv.hpp"

namespace hsrsched {

std::vector<DeficitSeries> run_deficit_comparison(const SimConfig& base) {
  if (base.services.size() != 2) {
    throw std::invalid_argument("deficit comparison needs exactly two services");
  }
  std::vector<DeficitSeries> out;
  for (Policy policy : kAllPolicies) {
    SimConfig cfg = base;
    cfg.scheduler = policy;
    DeficitSeries series;
    series.policy = policy;
    series.trace = run(cfg);
    for (const auto& row : series.trace.rows) {
      series.max_gap = std::max(series.max_gap, std::abs(row.services[0].deficit - row.services[1].deficit));
    }
    for (std::size_t s = 0; s < 2; ++s) {
      series.final_deficits.push_back(
          series.trace.rows.empty() ? 0.0 : series.trace.rows.back().services[s].deficit);
    }
    out.push_back(std::move(series));
  }
  return out;
}

void write_deficit_csv(std::ostream& out, const TraceLog& trace, std::size_t rows) {
  out << "# schema=1\n";
  out << "frame";
  for (const auto& spec : trace.services) out << ",deficit_" << spec.id;
  out << '\n';
  const std::size_t n = std::min(rows, trace.rows.size());
  for (std::size_t k = 0; k < n; ++k) {
    out << trace.rows[k].frame;
    for (const auto& sf : trace.rows[k].services) out << ',' << csv::real(sf.deficit);
    out << '\n';
  }
}

std::vector<DeliveryPoint> run_delivery_sweep(const SimConfig& base, const SweepGrid& grid,
                                              std::size_t replicates, unsigned workers) {
  if (grid.empty()) throw std::invalid_argument("delivery sweep: grid is empty");
  if (base.services.size() != 1) throw std::invalid_argument("delivery sweep needs exactly one service");
  if (replicates < 1) throw std::invalid_argument("delivery sweep: replicates must be >= 1");

  const auto points = expand_grid(grid);
  std::vector<DeliveryPoint> out(points.size());
  std::vector<double> sums(points.size(), 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    out[i].deadline = points[i].deadline.value_or(base.services[0].deadline);
    out[i].lambda = points[i].lambda.value_or(base.services[0].lambda);
  }
  for (std::size_t r = 0; r < replicates; ++r) {
    SimConfig cfg = base;
    cfg.seed = base.seed + r;
    for (const auto& res : sweep(cfg, grid, workers)) {
      if (!res.error.empty()) throw std::runtime_error("delivery sweep: " + res.error);
      const auto& ratio = res.summary->services[0].delivery_ratio;
      if (!ratio) continue;
      sums[res.index] += *ratio;
      ++out[res.index].replicates;
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].delivery_ratio = out[i].replicates ? sums[i] / static_cast<double>(out[i].replicates)
                                              : std::nan("");
  }
  return out;
}

void write_delivery_csv(std::ostream& out, std::span<const DeliveryPoint> points) {
  out << "# schema=1\n";
  out << "m,lambda,delivery_ratio\n";
  for (const auto& p : points) {
    out << p.deadline << ',' << csv::real(p.lambda) << ','
        << (p.replicates ? csv::real(p.delivery_ratio) : std::string("absent")) << '\n';
  }
}

bool VerifyResult::passed() const {
  for (const auto& p : policies) {
    if (!p.drift.passed() || !p.prefix.passed()) return false;
  }
  return oracle_common.all_agree();
}

VerifyResult run_verification(const SimConfig& base, const VerifyOptions& options) {
  VerifyResult result;
  for (Policy policy : kAllPolicies) {
    SimConfig cfg = base;
    cfg.scheduler = policy;
    TraceLog trace = run(cfg);
    if (options.inject_corruption && policy == Policy::dcsa && !trace.rows.empty()) {
      trace.rows[trace.rows.size() / 2].services[0].deficit += 10.0;
    }
    PolicyVerification pv;
    pv.policy = policy;
    pv.drift = check_sample_drift(trace);
    pv.prefix = check_lemma1(trace, options.rate_threshold);
    result.policies.push_back(std::move(pv));
  }
  result.oracle_common = run_oracle_trials(options.oracle_seed, options.oracle_instances, false);
  result.oracle_mixed = run_oracle_trials(options.oracle_seed, options.oracle_instances, true);
  return result;
}

void write_verify_report(std::ostream& out, const VerifyResult& result) {
  out << "[verify]\n";
  out << "status = " << (result.passed() ? "pass" : "fail") << "\n\n";
  for (const auto& p : result.policies) {
    const std::string name(to_string(p.policy));
    write_report(out, "drift." + name, p.drift);
    out << '\n';
    write_report(out, "prefix." + name, p.prefix);
    out << '\n';
  }
  write_report(out, "oracle.common", result.oracle_common);
  out << "asserted = true\n\n";
  write_report(out, "oracle.mixed", result.oracle_mixed);
  out << "asserted = false\n";
}

}  // namespace hsrsched
