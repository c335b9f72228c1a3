#include "hsrsched/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hsrsched {

namespace {

double poisson_log_pmf(double lambda, Packets i) {
  const double x = static_cast<double>(i);
  return -lambda + x * std::log(lambda) - std::lgamma(x + 1.0);
}

TruncatedPoisson normalize(double lambda, Packets bound) {
  TruncatedPoisson out;
  out.max_arrivals = bound;
  out.pmf.resize(static_cast<std::size_t>(bound) + 1);
  for (Packets i = 0; i <= bound; ++i) {
    out.pmf[static_cast<std::size_t>(i)] = std::exp(poisson_log_pmf(lambda, i));
  }
  double total = 0.0;
  for (double p : out.pmf) total += p;
  for (double& p : out.pmf) p /= total;
  out.cdf.resize(out.pmf.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < out.pmf.size(); ++i) {
    acc += out.pmf[i];
    out.cdf[i] = acc;
  }
  out.cdf.back() = 1.0;
  return out;
}

}  // namespace

double TruncatedPoisson::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) m += static_cast<double>(i) * pmf[i];
  return m;
}

TruncatedPoisson truncated_poisson_pmf(double lambda, double tail_eps) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("truncated_poisson_pmf: lambda must be positive");
  }
  if (!(tail_eps > 0.0 && tail_eps < 1.0)) {
    throw std::invalid_argument("truncated_poisson_pmf: tail_eps must lie in (0,1)");
  }
  // Far enough out that the mass beyond is below any double-representable eps.
  const auto horizon =
      static_cast<Packets>(std::ceil(lambda + 40.0 * std::sqrt(lambda) + 60.0));
  // tail[a] = Pr[X > a], accumulated from the top so small tails keep precision.
  std::vector<double> tail(static_cast<std::size_t>(horizon) + 1, 0.0);
  double acc = 0.0;
  for (Packets a = horizon; a >= 0; --a) {
    tail[static_cast<std::size_t>(a)] = acc;
    acc += std::exp(poisson_log_pmf(lambda, a));
  }
  Packets bound = 0;
  while (tail[static_cast<std::size_t>(bound)] >= tail_eps) ++bound;
  return normalize(lambda, bound);
}

TruncatedPoisson truncated_poisson_bounded(double lambda, Packets max_arrivals) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("truncated_poisson_bounded: lambda must be positive");
  }
  if (max_arrivals < 0) {
    throw std::invalid_argument("truncated_poisson_bounded: bound must be non-negative");
  }
  return normalize(lambda, max_arrivals);
}

void ServiceSpec::validate() const {
  const std::string who = "service " + std::to_string(id) + ": ";
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw std::invalid_argument(who + "lambda must be positive");
  if (deadline < 1) throw std::invalid_argument(who + "deadline must be at least 1 frame");
  if (!(delivery_ratio > 0.0 && delivery_ratio < 1.0)) {
    throw std::invalid_argument(who + "delivery_ratio must lie in (0,1)");
  }
  if (static_cast<double>(max_arrivals) < std::ceil(lambda)) {
    throw std::invalid_argument(who + "max_arrivals must be at least ceil(lambda)");
  }
}

Packets arrival_bound(double lambda, double tail_eps) {
  const auto floor_bound = static_cast<Packets>(std::ceil(lambda));
  return std::max(truncated_poisson_pmf(lambda, tail_eps).max_arrivals, floor_bound);
}

ServiceSpec ServiceSpec::make(int id, double lambda, int deadline, double delivery_ratio,
                              double tail_eps) {
  ServiceSpec spec{id, lambda, deadline, delivery_ratio, 0};
  spec.max_arrivals = arrival_bound(lambda, tail_eps);
  spec.validate();
  return spec;
}

ArrivalVector sample_arrivals(std::mt19937_64& rng, std::span<const TruncatedPoisson> dists) {
  ArrivalVector counts(dists.size());
  for (std::size_t s = 0; s < dists.size(); ++s) {
    const double u = unit_uniform(rng);
    const auto& cdf = dists[s].cdf;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    counts[s] = std::min<Packets>(static_cast<Packets>(it - cdf.begin()), dists[s].max_arrivals);
  }
  return counts;
}

ArrivalGenerator::ArrivalGenerator(std::span<const ServiceSpec> services, std::uint64_t seed)
    : rng_(seed) {
  dists_.reserve(services.size());
  for (const auto& spec : services) {
    dists_.push_back(truncated_poisson_bounded(spec.lambda, spec.max_arrivals));
  }
}

Feasibility feasibility_check(std::span<const ServiceSpec> services, const CapacityProfile& profile) {
  if (profile.empty()) throw std::invalid_argument("feasibility_check: empty capacity profile");
  Feasibility f;
  for (const auto& spec : services) f.demand += spec.lambda * spec.delivery_ratio;
  f.mean_capacity = profile.mean();
  f.margin = f.mean_capacity - f.demand;
  f.feasible = f.demand <= f.mean_capacity;
  return f;
}

}  // namespace hsrsched
