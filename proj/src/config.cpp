#include "hsrsched/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

namespace hsrsched {

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::single: return "single";
    case ExperimentKind::fig2: return "fig2";
    case ExperimentKind::fig3: return "fig3";
    case ExperimentKind::verify: return "verify";
  }
  return "?";
}

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return kind == o.kind && output_dir == o.output_dir && sim == o.sim && grid == o.grid &&
         replicates == o.replicates && plot_frames == o.plot_frames && verify == o.verify;
}

namespace {

class Reader {
 public:
  explicit Reader(const ini::Document& doc) : doc_(doc) {}

  [[noreturn]] void fail(int line, const std::string& msg) const {
    throw ConfigError(doc_.source() + ":" + std::to_string(line) + ": " + msg);
  }

  template <typename T>
  T number(const ini::Entry& e) const {
    T value{};
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
      fail(e.line, "'" + e.key + "' expects a number, got '" + e.value + "'");
    }
    return value;
  }

  bool boolean(const ini::Entry& e) const {
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    fail(e.line, "'" + e.key + "' expects true or false");
  }

  template <typename T>
  std::vector<T> list(const ini::Entry& e) const {
    std::vector<T> out;
    std::string_view rest = e.value;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      std::string item(rest.substr(0, comma));
      item.erase(0, item.find_first_not_of(" \t"));
      item.erase(item.find_last_not_of(" \t") + 1);
      out.push_back(number<T>(ini::Entry{e.key, item, e.line}));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return out;
  }

  /// Rejects keys the section does not know about.
  void only(const ini::Section& s, std::initializer_list<std::string_view> keys) const {
    for (const auto& e : s.entries) {
      if (std::find(keys.begin(), keys.end(), e.key) == keys.end()) {
        fail(e.line, "unknown key '" + e.key + "' in [" + s.name + "]");
      }
    }
  }

 private:
  const ini::Document& doc_;
};

template <typename F>
void with_line(const Reader& r, int line, F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    r.fail(line, e.what());
  }
}

std::string fmt(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

template <typename T>
std::string fmt_list(const std::vector<T>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ", ";
    if constexpr (std::is_floating_point_v<T>) {
      out += fmt(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

}  // namespace

ExperimentConfig from_document(const ini::Document& doc) {
  const Reader r(doc);
  ExperimentConfig cfg;
  SimConfig& sim = cfg.sim;
  std::map<int, const ini::Section*> service_sections;

  for (const auto& sec : doc.sections()) {
    if (sec.name == "experiment") {
      r.only(sec, {"kind", "output_dir"});
      if (const auto* e = sec.find("kind")) {
        if (e->value == "single") cfg.kind = ExperimentKind::single;
        else if (e->value == "fig2") cfg.kind = ExperimentKind::fig2;
        else if (e->value == "fig3") cfg.kind = ExperimentKind::fig3;
        else if (e->value == "verify") cfg.kind = ExperimentKind::verify;
        else r.fail(e->line, "kind must be single, fig2, fig3 or verify");
      }
      if (const auto* e = sec.find("output_dir")) {
        if (e->value.empty()) r.fail(e->line, "output_dir must not be empty");
        cfg.output_dir = e->value;
      }
    } else if (sec.name == "trajectory") {
      r.only(sec, {"speed", "cell_radius", "track_offset", "trip_duration", "frame_length"});
      auto& t = sim.trajectory;
      if (const auto* e = sec.find("speed")) t.speed_mps = r.number<double>(*e);
      if (const auto* e = sec.find("cell_radius")) t.cell_radius_m = r.number<double>(*e);
      if (const auto* e = sec.find("track_offset")) t.track_offset_m = r.number<double>(*e);
      if (const auto* e = sec.find("trip_duration")) t.trip_duration_s = r.number<double>(*e);
      if (const auto* e = sec.find("frame_length")) t.frame_length_s = r.number<double>(*e);
      with_line(r, sec.line, [&] { t.validate(); });
    } else if (sec.name == "radio") {
      r.only(sec, {"carrier_frequency", "bs_antenna_height", "rs_antenna_height",
                   "tx_power_over_noise_db", "bandwidth", "packet_size"});
      auto& rc = sim.radio;
      if (const auto* e = sec.find("carrier_frequency")) rc.carrier_hz = r.number<double>(*e);
      if (const auto* e = sec.find("bs_antenna_height")) rc.bs_height_m = r.number<double>(*e);
      if (const auto* e = sec.find("rs_antenna_height")) rc.rs_height_m = r.number<double>(*e);
      if (const auto* e = sec.find("tx_power_over_noise_db")) rc.tx_power_over_noise_db = r.number<double>(*e);
      if (const auto* e = sec.find("bandwidth")) rc.bandwidth_hz = r.number<double>(*e);
      if (const auto* e = sec.find("packet_size")) rc.packet_bits = r.number<double>(*e);
      with_line(r, sec.line, [&] { rc.validate(); });
    } else if (sec.name == "simulation") {
      r.only(sec, {"scheduler", "seed", "frames", "capacity_override", "tail_eps"});
      if (const auto* e = sec.find("scheduler")) {
        with_line(r, e->line, [&] { sim.scheduler = parse_policy(e->value); });
      }
      if (const auto* e = sec.find("seed")) sim.seed = r.number<std::uint64_t>(*e);
      if (const auto* e = sec.find("frames")) sim.num_frames = r.number<std::size_t>(*e);
      if (const auto* e = sec.find("capacity_override")) sim.capacity_override = r.number<Packets>(*e);
      if (const auto* e = sec.find("tail_eps")) {
        sim.tail_eps = r.number<double>(*e);
        if (!(sim.tail_eps > 0.0 && sim.tail_eps < 1.0)) r.fail(e->line, "tail_eps must lie in (0,1)");
      }
    } else if (sec.name.starts_with("service.")) {
      const ini::Entry idx{"service", sec.name.substr(8), sec.line};
      service_sections[r.number<int>(idx)] = &sec;
    } else if (sec.name == "sweep") {
      r.only(sec, {"deadlines", "lambdas", "replicates"});
      if (const auto* e = sec.find("deadlines")) cfg.grid.deadlines = r.list<int>(*e);
      if (const auto* e = sec.find("lambdas")) cfg.grid.lambdas = r.list<double>(*e);
      if (const auto* e = sec.find("replicates")) {
        cfg.replicates = r.number<std::size_t>(*e);
        if (cfg.replicates < 1) r.fail(e->line, "replicates must be at least 1");
      }
      for (int m : cfg.grid.deadlines) {
        if (m < 1) r.fail(sec.find("deadlines")->line, "deadlines must be >= 1");
      }
      for (double l : cfg.grid.lambdas) {
        if (!(l > 0.0)) r.fail(sec.find("lambdas")->line, "lambdas must be positive");
      }
    } else if (sec.name == "fig2") {
      r.only(sec, {"plot_frames"});
      if (const auto* e = sec.find("plot_frames")) cfg.plot_frames = r.number<std::size_t>(*e);
    } else if (sec.name == "verify") {
      r.only(sec, {"oracle_instances", "oracle_seed", "rate_threshold", "inject_corruption"});
      auto& v = cfg.verify;
      if (const auto* e = sec.find("oracle_instances")) v.oracle_instances = r.number<std::size_t>(*e);
      if (const auto* e = sec.find("oracle_seed")) v.oracle_seed = r.number<std::uint64_t>(*e);
      if (const auto* e = sec.find("rate_threshold")) v.rate_threshold = r.number<double>(*e);
      if (const auto* e = sec.find("inject_corruption")) v.inject_corruption = r.boolean(*e);
    } else {
      r.fail(sec.line, "unknown section [" + sec.name + "]");
    }
  }

  int expected = 1;
  for (const auto& [id, sec] : service_sections) {
    if (id != expected) r.fail(sec->line, "service ids must run 1..S without gaps");
    ++expected;
    r.only(*sec, {"lambda", "deadline", "delivery_ratio", "max_arrivals"});
    ServiceSpec spec;
    spec.id = id;
    const auto* lambda = sec->find("lambda");
    const auto* deadline = sec->find("deadline");
    const auto* ratio = sec->find("delivery_ratio");
    if (!lambda || !deadline || !ratio) {
      r.fail(sec->line, "[" + sec->name + "] needs lambda, deadline and delivery_ratio");
    }
    spec.lambda = r.number<double>(*lambda);
    spec.deadline = r.number<int>(*deadline);
    spec.delivery_ratio = r.number<double>(*ratio);
    if (const auto* e = sec->find("max_arrivals")) {
      spec.max_arrivals = r.number<Packets>(*e);
      with_line(r, e->line, [&] { spec.validate(); });
    } else {
      with_line(r, sec->line, [&] {
        spec = ServiceSpec::make(id, spec.lambda, spec.deadline, spec.delivery_ratio, sim.tail_eps);
      });
    }
    sim.services.push_back(spec);
  }
  if (sim.services.empty()) r.fail(1, "no [service.N] sections");

  const auto* simulation = doc.find("simulation");
  with_line(r, simulation ? simulation->line : 1, [&] { sim.validate(); });
  return cfg;
}

ini::Document to_document(const ExperimentConfig& cfg) {
  ini::Document doc;
  auto& ex = doc.section("experiment");
  ex.set("kind", std::string(to_string(cfg.kind)));
  ex.set("output_dir", cfg.output_dir);

  const auto& t = cfg.sim.trajectory;
  auto& ts = doc.section("trajectory");
  ts.set("speed", fmt(t.speed_mps));
  ts.set("cell_radius", fmt(t.cell_radius_m));
  ts.set("track_offset", fmt(t.track_offset_m));
  ts.set("trip_duration", fmt(t.trip_duration_s));
  ts.set("frame_length", fmt(t.frame_length_s));

  const auto& rc = cfg.sim.radio;
  auto& rs = doc.section("radio");
  rs.set("carrier_frequency", fmt(rc.carrier_hz));
  rs.set("bs_antenna_height", fmt(rc.bs_height_m));
  rs.set("rs_antenna_height", fmt(rc.rs_height_m));
  rs.set("tx_power_over_noise_db", fmt(rc.tx_power_over_noise_db));
  rs.set("bandwidth", fmt(rc.bandwidth_hz));
  rs.set("packet_size", fmt(rc.packet_bits));

  auto& sim = doc.section("simulation");
  sim.set("scheduler", std::string(to_string(cfg.sim.scheduler)));
  sim.set("seed", std::to_string(cfg.sim.seed));
  if (cfg.sim.num_frames) sim.set("frames", std::to_string(*cfg.sim.num_frames));
  if (cfg.sim.capacity_override) sim.set("capacity_override", std::to_string(*cfg.sim.capacity_override));
  sim.set("tail_eps", fmt(cfg.sim.tail_eps));

  for (const auto& spec : cfg.sim.services) {
    auto& s = doc.section("service." + std::to_string(spec.id));
    s.set("lambda", fmt(spec.lambda));
    s.set("deadline", std::to_string(spec.deadline));
    s.set("delivery_ratio", fmt(spec.delivery_ratio));
    s.set("max_arrivals", std::to_string(spec.max_arrivals));
  }

  auto& sw = doc.section("sweep");
  if (!cfg.grid.deadlines.empty()) sw.set("deadlines", fmt_list(cfg.grid.deadlines));
  if (!cfg.grid.lambdas.empty()) sw.set("lambdas", fmt_list(cfg.grid.lambdas));
  sw.set("replicates", std::to_string(cfg.replicates));

  doc.section("fig2").set("plot_frames", std::to_string(cfg.plot_frames));

  auto& v = doc.section("verify");
  v.set("oracle_instances", std::to_string(cfg.verify.oracle_instances));
  v.set("oracle_seed", std::to_string(cfg.verify.oracle_seed));
  v.set("rate_threshold", fmt(cfg.verify.rate_threshold));
  v.set("inject_corruption", cfg.verify.inject_corruption ? "true" : "false");
  return doc;
}

ExperimentConfig parse_config(std::string_view text, std::string source) {
  try {
    return from_document(ini::Document::parse(text, std::move(source)));
  } catch (const ini::ParseError& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string() + ": config not found");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string to_text(const ExperimentConfig& config) { return to_document(config).str(); }

}  // namespace hsrsched
