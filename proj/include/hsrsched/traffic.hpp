// Per-frame packet arrivals: truncated Poisson per service, i.i.d. across
// frames and independent across services.
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "hsrsched/channel.hpp"

namespace hsrsched {

inline constexpr double kDefaultTailEps = 1e-6;

/// Poisson(lambda) restricted to {0..max_arrivals} and renormalized.
struct TruncatedPoisson {
  Packets max_arrivals = 0;
  std::vector<double> pmf;
  std::vector<double> cdf;  // cdf.back() == 1 exactly

  double mean() const;
};

/// Picks the smallest bound a with Pr[X > a] < tail_eps for X ~ Poisson(lambda).
TruncatedPoisson truncated_poisson_pmf(double lambda, double tail_eps = kDefaultTailEps);

/// Default a_s for a service: the tail bound, but never below ceil(lambda).
Packets arrival_bound(double lambda, double tail_eps = kDefaultTailEps);

/// Truncation at an explicitly configured bound.
TruncatedPoisson truncated_poisson_bounded(double lambda, Packets max_arrivals);

struct ServiceSpec {
  int id = 1;
  double lambda = 1.0;           // mean packets per frame
  int deadline = 1;              // frames a packet may wait, m_s
  double delivery_ratio = 0.9;   // q_s
  Packets max_arrivals = 0;      // a_s

  double loss_bound() const { return 1.0 - delivery_ratio; }
  /// Per-frame drain of the deficit counter, p_s lambda_s.
  double deficit_drain() const { return loss_bound() * lambda; }

  void validate() const;

  /// Fills max_arrivals from the Poisson tail.
  static ServiceSpec make(int id, double lambda, int deadline, double delivery_ratio,
                          double tail_eps = kDefaultTailEps);

  bool operator==(const ServiceSpec&) const = default;
};

using ArrivalVector = std::vector<Packets>;

/// Uniform double in [0,1) from the top 53 bits of one 64-bit draw.
inline double unit_uniform(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Draws one frame of arrivals: one inverse-CDF draw per service, in order.
ArrivalVector sample_arrivals(std::mt19937_64& rng, std::span<const TruncatedPoisson> dists);

/// Owns the generator of one run.  The stream is std::mt19937_64 seeded with
/// the 64-bit run seed, consumed frame-major and service-minor.
class ArrivalGenerator {
 public:
  ArrivalGenerator(std::span<const ServiceSpec> services, std::uint64_t seed);

  ArrivalVector next() { return sample_arrivals(rng_, dists_); }
  std::span<const TruncatedPoisson> distributions() const { return dists_; }

 private:
  std::mt19937_64 rng_;
  std::vector<TruncatedPoisson> dists_;
};

struct Feasibility {
  bool feasible = false;
  double demand = 0.0;         // sum_s lambda_s q_s
  double mean_capacity = 0.0;  // (1/K) sum_k C[k]
  double margin = 0.0;         // mean_capacity - demand
};

Feasibility feasibility_check(std::span<const ServiceSpec> services, const CapacityProfile& profile);

}  // namespace hsrsched
