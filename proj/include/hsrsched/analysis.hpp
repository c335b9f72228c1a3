// Checks of the deficit-queue bounds on recorded traces, and an exhaustive
// allocation oracle for small lookahead instances.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "hsrsched/engine.hpp"

namespace hsrsched {

inline constexpr double kCheckTolerance = 1e-9;
inline constexpr double kRateStabilityThreshold = 1e-3;

/// B = 1/2 sum_s [(p_s lambda_s)^2 + a_s^2]
double constant_B(std::span<const ServiceSpec> services);

/// sum_s Y_s D_s
double weighted_drop_objective(std::span<const double> deficits, std::span<const Packets> drops);

struct DriftViolation {
  std::size_t service = 0;
  std::int64_t frame = 0;
  double excess = 0.0;  // lhs - rhs of the squared recursion
};

struct DriftReport {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double max_excess = 0.0;  // most positive lhs - rhs seen; <= 0 when the bound is tight or slack
  std::optional<DriftViolation> first_violation;
  // Diagnostics, not asserted.
  double lyapunov_final = 0.0;  // 1/2 sum_s Y_s^2 at the end of the trace
  double mean_drift = 0.0;      // average per-frame change of that quantity
  double constant_B = 0.0;

  bool passed() const { return violations == 0; }
};

/// Per frame and service: Y[k+1]^2 <= Y[k]^2 + (p lambda)^2 + D[k]^2 + 2 Y[k] (D[k] - p lambda).
DriftReport check_sample_drift(const TraceLog& trace, double tolerance = kCheckTolerance);

struct PrefixBoundService {
  int id = 0;
  std::size_t prefix_violations = 0;
  double max_excess = 0.0;
  std::optional<std::int64_t> first_violation_frame;
  double final_rate = 0.0;  // Y[K] / K
  bool rate_stable = false;
  double mean_drops = 0.0;
  double drop_bound = 0.0;  // p lambda + Y[K] / K
  bool drop_bound_holds = true;
};

struct PrefixBoundReport {
  std::vector<PrefixBoundService> services;
  bool passed() const;
};

/// Telescoped prefix bound Y[k] - Y[0] >= sum_{l<k} (D[l] - p lambda) at every
/// k, and the finite-horizon drop-rate bound whenever Y[K]/K is below
/// `rate_threshold`.  Requires at least two frames.
PrefixBoundReport check_lemma1(const TraceLog& trace, double rate_threshold = kRateStabilityThreshold,
                          double tolerance = kCheckTolerance);

/// One arrival frame of a lookahead instance: this frame's cohorts and the
/// capacity still free on frames k .. k + max m - 1 after earlier commitments.
struct OracleInstance {
  std::vector<Packets> arrivals;
  std::vector<int> deadlines;
  std::vector<Packets> residual;
};

struct OracleLimits {
  std::size_t max_services = 3;
  int max_deadline = 3;
  Packets max_arrivals = 6;
  Packets max_capacity = 6;
};

struct OracleResult {
  std::vector<Packets> lex_min_drops;  // indexed by service, minimal in priority order
  double min_weighted = 0.0;           // min over feasible plans of sum w_s D_s
  std::size_t plans = 0;
};

/// Enumerates every allocation of the current cohorts that respects the free
/// capacity and each cohort's window.  Throws std::length_error past `limits`.
OracleResult brute_force_enumerate(const OracleInstance& instance,
                                   std::span<const std::size_t> priority,
                                   std::span<const double> weights, const OracleLimits& limits = {});

std::vector<Packets> brute_force_lex_min_drops(const OracleInstance& instance,
                                               std::span<const std::size_t> priority,
                                               const OracleLimits& limits = {});

/// A DCSA decision on a random small state, side by side with the oracle.
struct OracleTrial {
  OracleInstance instance;
  std::vector<std::size_t> priority;
  std::vector<double> projected;
  std::vector<Packets> dcsa_drops;
  std::vector<Packets> oracle_drops;
  double dcsa_objective = 0.0;
  double best_objective = 0.0;

  bool lex_agrees() const { return dcsa_drops == oracle_drops; }
  bool weighted_optimal() const { return dcsa_objective <= best_objective + kCheckTolerance; }
};

/// Builds a random state by planning 0-2 earlier frames through a real
/// DcsaScheduler, then plans one more frame and runs the oracle on it.
/// With `mixed_deadlines` each service draws its own deadline; otherwise all
/// services share one.
OracleTrial random_oracle_trial(std::mt19937_64& rng, bool mixed_deadlines);

struct OracleSummary {
  bool mixed_deadlines = false;
  std::size_t trials = 0;
  std::size_t lex_agreements = 0;
  std::size_t weighted_optimal = 0;
  std::vector<OracleTrial> disagreements;  // first few, for reporting

  bool all_agree() const { return lex_agreements == trials; }
};

OracleSummary run_oracle_trials(std::uint64_t seed, std::size_t count, bool mixed_deadlines);

/// Structured-text report blocks, one "[section]" each.
void write_report(std::ostream& out, std::string_view section, const DriftReport& report);
void write_report(std::ostream& out, std::string_view section, const PrefixBoundReport& report);
void write_report(std::ostream& out, std::string_view section, const OracleSummary& summary);

}  // namespace hsrsched
