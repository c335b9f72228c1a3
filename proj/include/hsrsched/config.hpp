// Experiment configuration files.
//
//   [experiment]  kind = single|fig2|fig3|verify, output_dir
//   [trajectory]  speed, cell_radius, track_offset, trip_duration, frame_length
//   [radio]       carrier_frequency, bs_antenna_height, rs_antenna_height,
//                 tx_power_over_noise_db, bandwidth, packet_size
//   [simulation]  scheduler, seed, frames?, capacity_override?, tail_eps
//   [service.N]   lambda, deadline, delivery_ratio, max_arrivals?
//   [sweep]       deadlines, lambdas (comma lists), replicates
//   [fig2]        plot_frames
//   [verify]      oracle_instances, oracle_seed, rate_threshold, inject_corruption
//
// Every section except [service.N] is optional and falls back to the
// the defaults below (reference channel, two services).
#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "hsrsched/engine.hpp"
#include "hsrsched/ini.hpp"

namespace hsrsched {

/// Parse or validation failure, message prefixed "source:line:".
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { single, fig2, fig3, verify };

std::string_view to_string(ExperimentKind kind);

struct VerifyOptions {
  std::size_t oracle_instances = 200;
  std::uint64_t oracle_seed = 7;
  double rate_threshold = 1e-3;
  bool inject_corruption = false;  // test hook: tamper with one deficit value

  bool operator==(const VerifyOptions&) const = default;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::single;
  std::string output_dir = "out";
  SimConfig sim;
  SweepGrid grid;
  std::size_t replicates = 1;
  std::size_t plot_frames = 1000;
  VerifyOptions verify;

  bool operator==(const ExperimentConfig& o) const;
};

ExperimentConfig from_document(const ini::Document& doc);
ini::Document to_document(const ExperimentConfig& config);

ExperimentConfig parse_config(std::string_view text, std::string source = "<config>");
/// Throws ConfigError "config not found" if the file cannot be opened.
ExperimentConfig load_config(const std::filesystem::path& path);
std::string to_text(const ExperimentConfig& config);

}  // namespace hsrsched
