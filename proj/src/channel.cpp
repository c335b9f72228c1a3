#include "hsrsched/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

#include "hsrsched/csv.hpp"

namespace hsrsched {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw std::invalid_argument(std::string(name) + " must be strictly positive");
  }
}

}  // namespace

void TrajectoryConfig::validate() const {
  require_positive(speed_mps, "speed");
  require_positive(cell_radius_m, "cell_radius");
  require_positive(track_offset_m, "track_offset");
  require_positive(trip_duration_s, "trip_duration");
  require_positive(frame_length_s, "frame_length");
  if (frame_count() < 1) {
    throw std::invalid_argument("trip_duration must span at least one frame");
  }
}

double TrajectoryConfig::max_distance_m() const {
  return std::hypot(cell_radius_m, track_offset_m);
}

std::size_t TrajectoryConfig::frame_count() const {
  // 30 / 1e-3 is 29999.999... in binary; absorb that before flooring.
  const double ratio = trip_duration_s / frame_length_s;
  return static_cast<std::size_t>(std::floor(ratio + 1e-9 * std::max(1.0, ratio)));
}

void RadioConfig::validate() const {
  require_positive(carrier_hz, "carrier_frequency");
  require_positive(bs_height_m, "bs_antenna_height");
  require_positive(rs_height_m, "rs_antenna_height");
  require_positive(tx_power_over_noise_db, "tx_power_over_noise_db");
  require_positive(bandwidth_hz, "bandwidth");
  require_positive(packet_bits, "packet_size");
}

double RadioConfig::breakpoint_m() const {
  return 4.0 * bs_height_m * rs_height_m * carrier_hz / kSpeedOfLight;
}

double distance_at(double t, const TrajectoryConfig& traj) {
  if (!(t >= 0.0) || t > traj.trip_duration_s) {
    throw std::domain_error("distance_at: t = " + std::to_string(t) + " outside trip");
  }
  const double cell = 2.0 * traj.cell_radius_m;
  const double s1 = std::fmod(traj.speed_mps * t, cell);
  const double along = s1 < traj.cell_radius_m ? s1 : cell - s1;
  return std::hypot(along, traj.track_offset_m);
}

double path_loss_db(double d, const RadioConfig& radio) {
  if (!(d > 0.0)) {
    throw std::domain_error("path_loss_db: distance must be positive");
  }
  const double d_bp = radio.breakpoint_m();
  const double freq_term = 20.0 * std::log10(radio.carrier_hz / 5.0e9);
  if (d < d_bp) {
    return 44.2 + 21.5 * std::log10(d) + freq_term;
  }
  const double bp_term = 21.5 * std::log10(d_bp);
  return 44.2 + 40.0 * std::log10(d / d_bp) + bp_term + freq_term;
}

double snr_db(double t, const TrajectoryConfig& traj, const RadioConfig& radio) {
  return radio.tx_power_over_noise_db - path_loss_db(distance_at(t, traj), radio);
}

double rate_bps(double t, const TrajectoryConfig& traj, const RadioConfig& radio) {
  const double linear = std::pow(10.0, snr_db(t, traj, radio) / 10.0);
  return radio.bandwidth_hz * std::log2(1.0 + linear);
}

CapacityProfile::CapacityProfile(std::vector<Packets> capacities)
    : capacities_(std::move(capacities)) {
  for (Packets c : capacities_) {
    if (c < 0) throw std::invalid_argument("capacity must be non-negative");
  }
}

CapacityProfile CapacityProfile::constant(std::size_t frames, Packets capacity) {
  return CapacityProfile(std::vector<Packets>(frames, capacity));
}

Packets CapacityProfile::at_or_zero(std::int64_t k) const {
  if (k < 0 || static_cast<std::size_t>(k) >= capacities_.size()) return 0;
  return capacities_[static_cast<std::size_t>(k)];
}

double CapacityProfile::mean() const {
  if (capacities_.empty()) return 0.0;
  const Packets sum = std::accumulate(capacities_.begin(), capacities_.end(), Packets{0});
  return static_cast<double>(sum) / static_cast<double>(capacities_.size());
}

namespace {

Packets frame_capacity(double rate, const TrajectoryConfig& traj, const RadioConfig& radio) {
  return static_cast<Packets>(std::floor(rate * traj.frame_length_s / radio.packet_bits));
}

}  // namespace

CapacityProfile build_capacity_profile(const TrajectoryConfig& traj, const RadioConfig& radio) {
  traj.validate();
  radio.validate();
  const std::size_t frames = traj.frame_count();
  std::vector<Packets> caps(frames);
  for (std::size_t k = 0; k < frames; ++k) {
    caps[k] = frame_capacity(rate_bps(traj.frame_start_s(k), traj, radio), traj, radio);
  }
  return CapacityProfile(std::move(caps));
}

void write_channel_csv(std::ostream& out, const TrajectoryConfig& traj, const RadioConfig& radio) {
  traj.validate();
  radio.validate();
  out << "# schema=1\n";
  out << "frame,time_s,distance_m,pathloss_db,snr_db,rate_bps,capacity_pkts\n";
  const std::size_t frames = traj.frame_count();
  for (std::size_t k = 0; k < frames; ++k) {
    const double t = traj.frame_start_s(k);
    const double d = distance_at(t, traj);
    const double pl = path_loss_db(d, radio);
    const double rate = rate_bps(t, traj, radio);
    out << k << ',' << csv::real(t) << ',' << csv::real(d) << ',' << csv::real(pl) << ','
        << csv::real(radio.tx_power_over_noise_db - pl) << ',' << csv::real(rate) << ','
        << frame_capacity(rate, traj, radio) << '\n';
  }
}

}  // namespace hsrsched
