#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hsrsched/analysis.hpp"
#include "hsrsched/channel.hpp"
#include "hsrsched/config.hpp"
#include "hsrsched/engine.hpp"
#include "hsrsched/traffic.hpp"

namespace py = pybind11;
using namespace hsrsched;

namespace {

// Column-oriented view of a trace: {"frame": [...], "capacity": [...],
// "arrivals": [[per service] per frame], ...}.
py::dict trace_columns(const TraceLog& trace) {
  const std::size_t n = trace.rows.size(), S = trace.services.size();
  std::vector<std::int64_t> frame(n);
  std::vector<Packets> capacity(n);
  std::vector<std::vector<Packets>> arrivals(S, std::vector<Packets>(n)), served = arrivals, drops = arrivals,
                                                                          backlog = arrivals;
  std::vector<std::vector<double>> deficit(S, std::vector<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    const auto& row = trace.rows[k];
    frame[k] = row.frame;
    capacity[k] = row.capacity;
    for (std::size_t s = 0; s < S; ++s) {
      const auto& sf = row.services[s];
      arrivals[s][k] = sf.arrivals;
      served[s][k] = sf.served;
      drops[s][k] = sf.drops;
      deficit[s][k] = sf.deficit;
      backlog[s][k] = sf.backlog;
    }
  }
  py::dict d;
  d["frame"] = frame;
  d["capacity"] = capacity;
  d["arrivals"] = arrivals;
  d["served"] = served;
  d["drops"] = drops;
  d["deficit"] = deficit;
  d["backlog"] = backlog;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Deadline-constrained multi-service downlink scheduling simulator";

  py::register_exception<ContractError>(m, "ContractError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<TrajectoryConfig>(m, "TrajectoryConfig")
      .def(py::init<>())
      .def_readwrite("speed_mps", &TrajectoryConfig::speed_mps)
      .def_readwrite("cell_radius_m", &TrajectoryConfig::cell_radius_m)
      .def_readwrite("track_offset_m", &TrajectoryConfig::track_offset_m)
      .def_readwrite("trip_duration_s", &TrajectoryConfig::trip_duration_s)
      .def_readwrite("frame_length_s", &TrajectoryConfig::frame_length_s)
      .def("validate", &TrajectoryConfig::validate)
      .def("frame_count", &TrajectoryConfig::frame_count)
      .def("max_distance_m", &TrajectoryConfig::max_distance_m);

  py::class_<RadioConfig>(m, "RadioConfig")
      .def(py::init<>())
      .def_readwrite("carrier_hz", &RadioConfig::carrier_hz)
      .def_readwrite("bs_height_m", &RadioConfig::bs_height_m)
      .def_readwrite("rs_height_m", &RadioConfig::rs_height_m)
      .def_readwrite("tx_power_over_noise_db", &RadioConfig::tx_power_over_noise_db)
      .def_readwrite("bandwidth_hz", &RadioConfig::bandwidth_hz)
      .def_readwrite("packet_bits", &RadioConfig::packet_bits)
      .def("validate", &RadioConfig::validate)
      .def("breakpoint_m", &RadioConfig::breakpoint_m);

  m.def("distance_at", &distance_at, py::arg("t"), py::arg("trajectory") = TrajectoryConfig{});
  m.def("path_loss_db", &path_loss_db, py::arg("d"), py::arg("radio") = RadioConfig{});
  m.def("snr_db", &snr_db, py::arg("t"), py::arg("trajectory") = TrajectoryConfig{},
        py::arg("radio") = RadioConfig{});
  m.def("rate_bps", &rate_bps, py::arg("t"), py::arg("trajectory") = TrajectoryConfig{},
        py::arg("radio") = RadioConfig{});
  m.def(
      "capacity_profile",
      [](const TrajectoryConfig& t, const RadioConfig& r) {
        const auto p = build_capacity_profile(t, r);
        return std::vector<Packets>(p.values().begin(), p.values().end());
      },
      py::arg("trajectory") = TrajectoryConfig{}, py::arg("radio") = RadioConfig{});

  py::class_<TruncatedPoisson>(m, "TruncatedPoisson")
      .def_readonly("max_arrivals", &TruncatedPoisson::max_arrivals)
      .def_readonly("pmf", &TruncatedPoisson::pmf)
      .def_readonly("cdf", &TruncatedPoisson::cdf)
      .def("mean", &TruncatedPoisson::mean);
  m.def("truncated_poisson_pmf", &truncated_poisson_pmf, py::arg("lam"),
        py::arg("tail_eps") = kDefaultTailEps);

  py::class_<ServiceSpec>(m, "ServiceSpec")
      .def(py::init(&ServiceSpec::make), py::arg("id"), py::arg("lam"), py::arg("deadline"),
           py::arg("delivery_ratio"), py::arg("tail_eps") = kDefaultTailEps)
      .def_readwrite("id", &ServiceSpec::id)
      .def_readwrite("lam", &ServiceSpec::lambda)
      .def_readwrite("deadline", &ServiceSpec::deadline)
      .def_readwrite("delivery_ratio", &ServiceSpec::delivery_ratio)
      .def_readwrite("max_arrivals", &ServiceSpec::max_arrivals)
      .def("__repr__", [](const ServiceSpec& s) {
        std::ostringstream os;
        os << "ServiceSpec(id=" << s.id << ", lam=" << s.lambda << ", deadline=" << s.deadline
           << ", delivery_ratio=" << s.delivery_ratio << ", max_arrivals=" << s.max_arrivals << ")";
        return os.str();
      });

  py::enum_<Policy>(m, "Policy")
      .value("dcsa", Policy::dcsa)
      .value("rr", Policy::rr)
      .value("edf", Policy::edf);

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_readwrite("trajectory", &SimConfig::trajectory)
      .def_readwrite("radio", &SimConfig::radio)
      .def_readwrite("services", &SimConfig::services)
      .def_readwrite("scheduler", &SimConfig::scheduler)
      .def_readwrite("seed", &SimConfig::seed)
      .def_readwrite("num_frames", &SimConfig::num_frames)
      .def_readwrite("capacity_override", &SimConfig::capacity_override)
      .def_readwrite("tail_eps", &SimConfig::tail_eps)
      .def("validate", &SimConfig::validate)
      .def("frames", &SimConfig::frames);

  py::class_<Feasibility>(m, "Feasibility")
      .def_readonly("feasible", &Feasibility::feasible)
      .def_readonly("demand", &Feasibility::demand)
      .def_readonly("mean_capacity", &Feasibility::mean_capacity)
      .def_readonly("margin", &Feasibility::margin);

  py::class_<TraceLog>(m, "Trace")
      .def_readonly("services", &TraceLog::services)
      .def_readonly("seed", &TraceLog::seed)
      .def_readonly("scheduler", &TraceLog::scheduler)
      .def_readonly("feasibility", &TraceLog::feasibility)
      .def("__len__", [](const TraceLog& t) { return t.rows.size(); })
      .def("columns", &trace_columns)
      .def("delivery_ratio", [](const TraceLog& t, std::size_t s) { return delivery_ratio(t, s); })
      .def("to_csv", [](const TraceLog& t) {
        std::ostringstream os;
        write_trace_csv(os, t);
        return os.str();
      });

  m.def("run", [](const SimConfig& cfg) { return run(cfg); }, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  m.def("constant_B", [](const std::vector<ServiceSpec>& s) { return constant_B(s); });

  py::class_<DriftReport>(m, "DriftReport")
      .def_readonly("samples", &DriftReport::samples)
      .def_readonly("violations", &DriftReport::violations)
      .def_readonly("max_excess", &DriftReport::max_excess)
      .def_readonly("constant_B", &DriftReport::constant_B)
      .def("passed", &DriftReport::passed);
  m.def("check_sample_drift", &check_sample_drift, py::arg("trace"), py::arg("tolerance") = kCheckTolerance);

  py::class_<PrefixBoundService>(m, "PrefixBoundService")
      .def_readonly("id", &PrefixBoundService::id)
      .def_readonly("prefix_violations", &PrefixBoundService::prefix_violations)
      .def_readonly("final_rate", &PrefixBoundService::final_rate)
      .def_readonly("rate_stable", &PrefixBoundService::rate_stable)
      .def_readonly("mean_drops", &PrefixBoundService::mean_drops)
      .def_readonly("drop_bound", &PrefixBoundService::drop_bound)
      .def_readonly("drop_bound_holds", &PrefixBoundService::drop_bound_holds);
  py::class_<PrefixBoundReport>(m, "PrefixBoundReport")
      .def_readonly("services", &PrefixBoundReport::services)
      .def("passed", &PrefixBoundReport::passed);
  m.def("check_lemma1", &check_lemma1, py::arg("trace"),
        py::arg("rate_threshold") = kRateStabilityThreshold, py::arg("tolerance") = kCheckTolerance);

  m.def(
      "brute_force_lex_min_drops",
      [](std::vector<Packets> arrivals, std::vector<int> deadlines, std::vector<Packets> residual,
         std::vector<std::size_t> priority) {
        return brute_force_lex_min_drops(OracleInstance{std::move(arrivals), std::move(deadlines),
                                                        std::move(residual)},
                                         priority);
      },
      py::arg("arrivals"), py::arg("deadlines"), py::arg("residual"), py::arg("priority"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_readwrite("output_dir", &ExperimentConfig::output_dir)
      .def_readwrite("sim", &ExperimentConfig::sim)
      .def_readwrite("replicates", &ExperimentConfig::replicates)
      .def_property_readonly("kind", [](const ExperimentConfig& c) { return std::string(to_string(c.kind)); })
      .def("to_text", &to_text);
  m.def("parse_config", [](const std::string& text) { return parse_config(text); });
  m.def("load_config", [](const std::string& path) { return load_config(path); });
}
