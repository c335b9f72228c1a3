// Canned experiments: deficit evolution under the three policies, delivery
// ratio across deadlines and arrival rates, and the verification suite.
#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "hsrsched/analysis.hpp"
#include "hsrsched/config.hpp"
#include "hsrsched/engine.hpp"

namespace hsrsched {

inline constexpr Policy kAllPolicies[] = {Policy::dcsa, Policy::rr, Policy::edf};

struct DeficitSeries {
  Policy policy = Policy::dcsa;
  TraceLog trace;
  std::vector<double> final_deficits;
  double max_gap = 0.0;  // max_k |Y_1[k] - Y_2[k]|
};

/// The same two-service config and seed under dcsa, rr and edf, in that order.
/// Throws std::invalid_argument unless there are exactly two services.
std::vector<DeficitSeries> run_deficit_comparison(const SimConfig& base);

/// frame,deficit_1,...,deficit_S for the first `rows` frames.
void write_deficit_csv(std::ostream& out, const TraceLog& trace, std::size_t rows);

struct DeliveryPoint {
  int deadline = 0;
  double lambda = 0.0;
  double delivery_ratio = 0.0;  // mean over replicates that saw arrivals
  std::size_t replicates = 0;
};

/// Single-service sweep; replicate r starts from seed + r.  Throws
/// std::invalid_argument for an empty grid or a multi-service config.
std::vector<DeliveryPoint> run_delivery_sweep(const SimConfig& base, const SweepGrid& grid,
                                              std::size_t replicates, unsigned workers = 0);

/// m,lambda,delivery_ratio
void write_delivery_csv(std::ostream& out, std::span<const DeliveryPoint> points);

struct PolicyVerification {
  Policy policy = Policy::dcsa;
  DriftReport drift;
  PrefixBoundReport prefix;
};

struct VerifyResult {
  std::vector<PolicyVerification> policies;
  OracleSummary oracle_common;  // asserted
  OracleSummary oracle_mixed;   // reported only

  bool passed() const;
};

VerifyResult run_verification(const SimConfig& base, const VerifyOptions& options);
void write_verify_report(std::ostream& out, const VerifyResult& result);

}  // namespace hsrsched
