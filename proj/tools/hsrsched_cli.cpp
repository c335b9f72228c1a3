// hsrsched: run, compare and verify deadline-constrained downlink schedulers.
//
// Exit codes: 0 success, 1 invalid config or arguments, 2 runtime failure,
// 3 verification failure.  SPDLOG_LEVEL controls log verbosity.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/cfg/env.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "hsrsched/config.hpp"
#include "hsrsched/csv.hpp"
#include "hsrsched/engine.hpp"
#include "hsrsched/experiments.hpp"

namespace fs = std::filesystem;
using namespace hsrsched;

namespace {

enum ExitCode : int { kOk = 0, kValidation = 1, kRuntime = 2, kVerification = 3 };

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<std::size_t> frames;
};

ExperimentConfig load(const std::string& path, const Overrides& o) {
  ExperimentConfig cfg = load_config(path);
  if (o.seed) cfg.sim.seed = *o.seed;
  if (o.out) cfg.output_dir = *o.out;
  if (o.frames) {
    cfg.sim.num_frames = *o.frames;
    try {
      cfg.sim.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("--frames: ") + e.what());
    }
  }
  return cfg;
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
  return out;
}

int cmd_run(const ExperimentConfig& cfg) {
  spdlog::info("run: {} frames, scheduler {}, seed {}", cfg.sim.frames(), to_string(cfg.sim.scheduler),
               cfg.sim.seed);
  const TraceLog trace = run(cfg.sim);
  auto csv = open_output(cfg.output_dir, "trace.csv");
  write_trace_csv(csv, trace);
  auto summary = open_output(cfg.output_dir, "summary.txt");
  write_summary(summary, trace.summary());
  if (!trace.feasibility.feasible) {
    spdlog::warn("service mix exceeds mean capacity by {}", -trace.feasibility.margin);
  }
  spdlog::info("wrote {}", (fs::path(cfg.output_dir) / "trace.csv").string());
  return kOk;
}

int cmd_channel(const ExperimentConfig& cfg) {
  auto csv = open_output(cfg.output_dir, "channel.csv");
  write_channel_csv(csv, cfg.sim.trajectory, cfg.sim.radio);
  return kOk;
}

int cmd_fig2(const ExperimentConfig& cfg) {
  if (cfg.sim.services.size() != 2) throw ConfigError("fig2 needs exactly two services");
  const auto series = run_deficit_comparison(cfg.sim);
  auto summary = open_output(cfg.output_dir, "fig2_summary.txt");
  for (const auto& s : series) {
    const std::string name(to_string(s.policy));
    auto series_csv = open_output(cfg.output_dir, "fig2_" + name + ".csv");
    write_deficit_csv(series_csv, s.trace, cfg.plot_frames);
    summary << "[fig2." << name << "]\n";
    summary << "final_deficit_1 = " << csv::real(s.final_deficits[0]) << '\n';
    summary << "final_deficit_2 = " << csv::real(s.final_deficits[1]) << '\n';
    summary << "max_gap = " << csv::real(s.max_gap) << "\n\n";
    write_summary(summary, s.trace.summary());
    summary << '\n';
    spdlog::info("{}: Y1 = {}, Y2 = {}, max gap {}", name, s.final_deficits[0], s.final_deficits[1],
                 s.max_gap);
  }
  return kOk;
}

int cmd_fig3(const ExperimentConfig& cfg) {
  if (cfg.grid.empty()) throw ConfigError("fig3: [sweep] grid is empty");
  if (cfg.sim.services.size() != 1) throw ConfigError("fig3 needs exactly one service");
  const auto points = run_delivery_sweep(cfg.sim, cfg.grid, cfg.replicates);
  auto csv = open_output(cfg.output_dir, "fig3.csv");
  write_delivery_csv(csv, points);
  return kOk;
}

int cmd_verify(const ExperimentConfig& cfg) {
  const VerifyResult result = run_verification(cfg.sim, cfg.verify);
  auto report = open_output(cfg.output_dir, "verify_report.txt");
  write_verify_report(report, result);
  write_verify_report(std::cout, result);
  if (!result.passed()) {
    spdlog::error("verification failed");
    return kVerification;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_logger_mt("hsrsched");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  spdlog::cfg::load_env_levels();

  CLI::App app{"Deadline-constrained multi-service downlink scheduling simulator"};
  app.require_subcommand(1);
  Overrides overrides;
  std::string config_path;

  auto add = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("config", config_path, "Experiment config file")->required();
    sub->add_option("--seed", overrides.seed, "Override the run seed");
    sub->add_option("--out", overrides.out, "Output directory");
    sub->add_option("--frames", overrides.frames, "Number of frames to simulate");
    return sub;
  };
  auto* run_cmd = add("run", "Simulate one config and write trace.csv and summary.txt");
  auto* fig2_cmd = add("fig2", "Deficit evolution under dcsa, rr and edf");
  auto* fig3_cmd = add("fig3", "Delivery ratio across the deadline/arrival-rate grid");
  auto* verify_cmd = add("verify", "Check deficit bounds and the allocation oracle");
  auto* channel_cmd = add("channel", "Write the per-frame channel profile as channel.csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kValidation;
  }

  try {
    const ExperimentConfig cfg = load(config_path, overrides);
    if (run_cmd->parsed()) return cmd_run(cfg);
    if (fig2_cmd->parsed()) return cmd_fig2(cfg);
    if (fig3_cmd->parsed()) return cmd_fig3(cfg);
    if (verify_cmd->parsed()) return cmd_verify(cfg);
    if (channel_cmd->parsed()) return cmd_channel(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << '\n';
    return kRuntime;
  }
  return kRuntime;
}
