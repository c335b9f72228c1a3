// Deterministic downlink channel along a high-speed rail line.
//
// The train moves at constant speed past base stations spaced one cell
// (2R) apart along the track.  Its distance to the serving station is a
// periodic function of trip time; path loss, SNR, Shannon rate and the
// per-frame packet capacity all follow from that distance.
#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace hsrsched {

using Packets = std::int64_t;

inline constexpr double kSpeedOfLight = 3.0e8;  // m/s

struct TrajectoryConfig {
  double speed_mps = 100.0;
  double cell_radius_m = 1500.0;
  double track_offset_m = 30.0;
  double trip_duration_s = 30.0;
  double frame_length_s = 1.0e-3;

  /// Throws std::invalid_argument unless every field is strictly positive
  /// and the trip holds at least one frame.
  void validate() const;

  double cell_period_s() const { return 2.0 * cell_radius_m / speed_mps; }
  double max_distance_m() const;
  std::size_t frame_count() const;
  double frame_start_s(std::size_t k) const { return static_cast<double>(k) * frame_length_s; }

  bool operator==(const TrajectoryConfig&) const = default;
};

struct RadioConfig {
  double carrier_hz = 2.4e9;
  double bs_height_m = 50.0;
  double rs_height_m = 5.0;
  double tx_power_over_noise_db = 115.0;
  double bandwidth_hz = 1.0e7;
  double packet_bits = 500.0;

  void validate() const;

  /// Breakpoint of the dual-slope path-loss curve, 4 hBS hRS fc / c.
  double breakpoint_m() const;

  bool operator==(const RadioConfig&) const = default;
};

/// Distance from the serving base station to the train relay at trip time t.
/// Throws std::domain_error if t is outside [0, trip duration].
double distance_at(double t, const TrajectoryConfig& traj);

/// Dual-slope path loss in dB.  Throws std::domain_error for d <= 0.
double path_loss_db(double d, const RadioConfig& radio);

double snr_db(double t, const TrajectoryConfig& traj, const RadioConfig& radio);

/// Shannon rate W log2(1 + snr) with the SNR converted from dB to linear.
double rate_bps(double t, const TrajectoryConfig& traj, const RadioConfig& radio);

/// Packets-per-frame capacity for every frame of a trip.  Immutable.
class CapacityProfile {
 public:
  CapacityProfile() = default;
  explicit CapacityProfile(std::vector<Packets> capacities);

  /// Every frame carries the same capacity; used for saturation runs and
  /// for synthetic channels in tests.
  static CapacityProfile constant(std::size_t frames, Packets capacity);

  std::size_t size() const { return capacities_.size(); }
  bool empty() const { return capacities_.empty(); }
  Packets operator[](std::size_t k) const { return capacities_[k]; }

  /// Capacity of frame k, or zero past the end of the trip.
  Packets at_or_zero(std::int64_t k) const;

  std::span<const Packets> values() const { return capacities_; }
  double mean() const;

  bool operator==(const CapacityProfile&) const = default;

 private:
  std::vector<Packets> capacities_;
};

/// C[k] = floor(rate(k TF) TF / G) for k = 0..K-1.
CapacityProfile build_capacity_profile(const TrajectoryConfig& traj, const RadioConfig& radio);

/// One CSV row per frame: frame,time_s,distance_m,pathloss_db,snr_db,rate_bps,capacity_pkts
void write_channel_csv(std::ostream& out, const TrajectoryConfig& traj, const RadioConfig& radio);

}  // namespace hsrsched
