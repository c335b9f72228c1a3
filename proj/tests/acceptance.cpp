// Acceptance checks, one PASS/FAIL line per criterion.
//
// usage: acceptance <configs dir> <scratch dir>
// Exit status is the number of failed criteria.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "hsrsched/analysis.hpp"
#include "hsrsched/config.hpp"
#include "hsrsched/engine.hpp"
#include "hsrsched/experiments.hpp"
#include "reference.hpp"

namespace fs = std::filesystem;
using namespace hsrsched;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [x]");
  }
};

std::string num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

fs::path g_configs, g_scratch;

Verdict channel_values() {
  Verdict v;
  const TrajectoryConfig t;
  const RadioConfig r;
  const ref::Link link;
  const double dbp = r.breakpoint_m();
  v.require(std::abs(dbp - 8000.0) <= 1.0 && std::abs(dbp - ref::breakpoint(link)) <= 1e-6,
            "d_bp = " + num(dbp));
  const double pl = path_loss_db(30.0, r);
  v.require(std::abs(pl - 69.58) <= 0.05 && std::abs(pl - ref::pathloss(link, 30.0)) <= 1e-9,
            "PL(30 m) = " + num(pl) + " dB");
  const auto profile = build_capacity_profile(t, r);
  const Packets c0 = profile[0];
  v.require(std::llabs(c0 - 301) <= 2 && c0 == ref::capacity(link, 0.0), "C[0] = " + std::to_string(c0));
  const Packets c15 = profile[15000];
  v.require(std::llabs(c15 - 62) <= 2 && c15 == ref::capacity(link, 15.0), "C(15 s) = " + std::to_string(c15));
  return v;
}

Verdict profile_shape() {
  Verdict v;
  const auto p = build_capacity_profile({}, {});
  const std::size_t n = p.size();
  std::size_t k = 1;
  while (k < n && p[k] <= p[k - 1]) ++k;
  const std::size_t turn = k;
  while (k < n && p[k] >= p[k - 1]) ++k;
  v.require(k == n, "valley (turns up at frame " + std::to_string(turn) + ")");

  const Packets lo = *std::min_element(p.values().begin(), p.values().end());
  std::size_t first = n, last = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (p[i] == lo) {
      first = std::min(first, i);
      last = i;
    }
  }
  const double centre = 0.5 * static_cast<double>(first + last);
  v.require(p[15000] == lo && std::abs(centre - 15000.0) <= 1.0,
            "minimum " + std::to_string(lo) + " centred at frame " + num(centre));

  Packets worst = 0;
  for (std::size_t i = 1; i < n; ++i) worst = std::max<Packets>(worst, std::llabs(p[i] - p[n - i]));
  v.require(worst <= 1, "max |C[k] - C[K-k]| = " + std::to_string(worst));
  return v;
}

SimConfig default_mix() { return load_config(g_configs / "fig2.conf").sim; }

// Traces shared by the constraint and bound checks.
std::vector<TraceLog> g_matrix;

Verdict constraint_invariants() {
  Verdict v;
  std::size_t capacity = 0, overserve = 0, negative = 0, conservation = 0, frames = 0;
  for (Policy policy : kAllPolicies) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      SimConfig c = default_mix();
      c.scheduler = policy;
      c.seed = seed;
      TraceLog t = run(c, [&](const FrameObservation& o) {
        ++frames;
        if (o.served->total() > o.capacity) ++capacity;
        for (std::size_t s = 0; s < o.queues.size(); ++s) {
          const auto b = o.queues[s].buckets();
          for (std::size_t r = 0; r < b.size(); ++r) {
            if (b[r] < 0) ++negative;
            if (o.served->counts[s][r] < 0 || o.served->counts[s][r] > b[r]) ++overserve;
          }
        }
      });
      for (std::size_t s = 0; s < t.cohorts.size(); ++s) {
        Packets a = 0, x = 0, d = 0;
        for (const auto& row : t.rows) {
          a += row.services[s].arrivals;
          x += row.services[s].served;
          d += row.services[s].drops;
        }
        if (a != x + d + t.rows.back().services[s].backlog) ++conservation;
        for (const auto& cohort : t.cohorts[s]) {
          if (cohort.resolved ? cohort.arrivals != cohort.served + cohort.dropped
                              : cohort.served > cohort.arrivals) {
            ++conservation;
          }
        }
      }
      g_matrix.push_back(std::move(t));
    }
  }
  v.require(frames == 9 * 30000, std::to_string(g_matrix.size()) + " runs, " + std::to_string(frames) + " frames");
  v.require(capacity == 0, "capacity violations " + std::to_string(capacity));
  v.require(overserve == 0, "overserved buckets " + std::to_string(overserve));
  v.require(negative == 0, "negative buckets " + std::to_string(negative));
  v.require(conservation == 0, "conservation violations " + std::to_string(conservation));
  return v;
}

Verdict deficit_bounds() {
  Verdict v;
  std::size_t drift = 0, prefix = 0;
  double worst_drift = -INFINITY, worst_prefix = -INFINITY;
  for (const auto& t : g_matrix) {
    const auto d = check_sample_drift(t, 1e-9);
    drift += d.violations;
    worst_drift = std::max(worst_drift, d.max_excess);
    const auto l = check_lemma1(t, kRateStabilityThreshold, 1e-9);
    for (const auto& s : l.services) {
      prefix += s.prefix_violations;
      worst_prefix = std::max(worst_prefix, s.max_excess);
    }
  }
  v.require(!g_matrix.empty(), std::to_string(g_matrix.size()) + " traces");
  v.require(drift == 0, "drift violations " + std::to_string(drift) + " (max excess " + num(worst_drift) + ")");
  v.require(prefix == 0, "prefix violations " + std::to_string(prefix) + " (max excess " + num(worst_prefix) + ")");
  return v;
}

Verdict oracle_agreement() {
  Verdict v;
  const auto mixed = run_oracle_trials(7, 200, true);
  v.require(mixed.trials == 200 && mixed.lex_agreements == 200,
            "per-service deadlines: " + std::to_string(mixed.lex_agreements) + "/" + std::to_string(mixed.trials));
  if (!mixed.disagreements.empty()) {
    const auto& t = mixed.disagreements.front();
    std::ostringstream os;
    os << "e.g. arrivals";
    for (auto a : t.instance.arrivals) os << ' ' << a;
    os << ", m";
    for (auto m : t.instance.deadlines) os << ' ' << m;
    os << ", free";
    for (auto c : t.instance.residual) os << ' ' << c;
    os << ": dcsa drops";
    for (auto d : t.dcsa_drops) os << ' ' << d;
    os << " vs oracle";
    for (auto d : t.oracle_drops) os << ' ' << d;
    v.detail += "; " + os.str();
  }
  const auto common = run_oracle_trials(7, 200, false);
  v.detail += "; shared deadline: " + std::to_string(common.lex_agreements) + "/" + std::to_string(common.trials);
  return v;
}

Verdict deficit_evolution() {
  Verdict v;
  const auto cfg = load_config(g_configs / "fig2.conf");
  const auto series = run_deficit_comparison(cfg.sim);
  const std::size_t window = std::min<std::size_t>(1000, cfg.sim.frames());
  const std::size_t block = 100;

  bool envelope = true;
  double peak = 0;
  for (const auto& s : series) {
    for (std::size_t svc = 0; svc < 2; ++svc) {
      double prev = 0;
      for (std::size_t b0 = 0; b0 < window; b0 += block) {
        double m = 0;
        for (std::size_t k = b0; k < std::min(window, b0 + block); ++k) {
          m = std::max(m, s.trace.rows[k].services[svc].deficit);
        }
        if (m < prev) envelope = false;
        prev = m;
        peak = std::max(peak, m);
      }
    }
  }
  v.require(envelope, "(a) 100-frame block maxima non-decreasing over frames 0-999, peak " + num(peak));

  const DeficitSeries& dcsa = series[0];
  const DeficitSeries& rr = series[1];
  const DeficitSeries& edf = series[2];
  const double y_dcsa = dcsa.final_deficits[0], y_edf = edf.final_deficits[0];
  const bool ratio_ok = y_edf >= 1.5 * y_dcsa && y_edf > 0;
  v.require(ratio_ok, "(b) service 1 final deficit edf/dcsa = " + num(y_edf) + "/" + num(y_dcsa) + " = " +
                          (y_dcsa > 0 ? num(y_edf / y_dcsa, 3) : std::string("undefined")));
  v.require(dcsa.max_gap < edf.max_gap && dcsa.max_gap < rr.max_gap,
            "(c) max gap dcsa " + num(dcsa.max_gap) + ", edf " + num(edf.max_gap) + ", rr " + num(rr.max_gap));
  return v;
}

Verdict delivery_sweep() {
  Verdict v;
  const auto cfg = load_config(g_configs / "fig3.conf");
  auto ms = cfg.grid.deadlines;
  auto lambdas = cfg.grid.lambdas;
  std::sort(lambdas.begin(), lambdas.end());
  const bool shape = ms == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10} && lambdas.size() == 2 &&
                     lambdas[0] < lambdas[1] && cfg.replicates == 5 && cfg.sim.services.size() == 1;
  v.require(shape, "grid m 1..10 x lambda {" + num(lambdas.front()) + "," + num(lambdas.back()) + "}, " +
                       std::to_string(cfg.replicates) + " replicates");
  if (!shape) return v;
  const auto pts = run_delivery_sweep(cfg.sim, cfg.grid, cfg.replicates);
  auto ratio = [&](int m, double l) {
    for (const auto& p : pts) {
      if (p.deadline == m && p.lambda == l) return p.delivery_ratio;
    }
    return std::nan("");
  };
  for (double l : lambdas) {
    int inversions = 0;
    double worst = 0;
    std::string series;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      const double r = ratio(ms[i], l);
      series += (i ? " " : "") + num(r, 5);
      if (i == 0) continue;
      const double dip = ratio(ms[i - 1], l) - r;
      if (dip > 0) {
        ++inversions;
        worst = std::max(worst, dip);
      }
    }
    v.require(inversions <= 1 && worst <= 0.01, "lambda " + num(l) + ": " + std::to_string(inversions) +
                                                    " inversion(s), largest " + num(worst, 3) + " [" + series + "]");
  }
  double excess = -INFINITY;
  for (int m : ms) excess = std::max(excess, ratio(m, lambdas[1]) - ratio(m, lambdas[0]));
  v.require(excess <= 0.01, "max ratio(hi) - ratio(lo) = " + num(excess, 3));
  return v;
}

Verdict saturation() {
  Verdict v;
  SimConfig c = default_mix();
  Packets cap = 0;
  for (const auto& s : c.services) cap += s.max_arrivals * s.deadline;
  c.capacity_override = cap;
  for (Policy policy : kAllPolicies) {
    c.scheduler = policy;
    const auto t = run(c);
    bool ok = true;
    for (std::size_t s = 0; s < t.services.size(); ++s) {
      const auto ratio = delivery_ratio(t, s);
      ok = ok && ratio && *ratio == 1.0;
      for (const auto& row : t.rows) ok = ok && row.services[s].deficit == 0.0;
    }
    v.require(ok, std::string(to_string(policy)) + " at C = " + std::to_string(cap));
  }
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Verdict determinism() {
  Verdict v;
  const auto cfg = load_config(g_configs / "default.conf");
  fs::create_directories(g_scratch);
  for (int i = 0; i < 2; ++i) {
    std::ofstream out(g_scratch / ("trace_" + std::to_string(i) + ".csv"), std::ios::binary);
    write_trace_csv(out, run(cfg.sim));
  }
  const auto a = slurp(g_scratch / "trace_0.csv"), b = slurp(g_scratch / "trace_1.csv");
  v.require(!a.empty() && a == b, std::to_string(a.size()) + " bytes, identical");
  return v;
}

Verdict feasibility() {
  Verdict v;
  const SimConfig c = default_mix();
  const auto f = feasibility_check(c.services, c.capacity());
  const ref::Link link;
  long double total = 0;
  const std::size_t frames = c.trajectory.frame_count();
  for (std::size_t k = 0; k < frames; ++k) total += ref::capacity(link, static_cast<double>(k) * 1e-3);
  double demand = 0;
  for (const auto& s : c.services) demand += s.lambda * s.delivery_ratio;
  const double expected = static_cast<double>(total / frames) - demand;
  const double rel = std::abs(f.margin - expected) / std::max(std::abs(expected), 1e-300);
  v.require(rel <= 1e-9, "margin " + num(f.margin, 12) + " vs " + num(expected, 12));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 3) {
    std::fprintf(stderr, "usage: %s <configs dir> <scratch dir>\n", argv[0]);
    return 64;
  }
  g_configs = argv[1];
  g_scratch = argv[2];

  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"channel derived values", channel_values},
      {"capacity profile shape", profile_shape},
      {"constraint invariants", constraint_invariants},
      {"deficit bounds on traces", deficit_bounds},
      {"oracle agreement", oracle_agreement},
      {"deficit evolution (two services)", deficit_evolution},
      {"delivery ratio vs deadline", delivery_sweep},
      {"saturation", saturation},
      {"determinism", determinism},
      {"feasibility margin", feasibility},
  };
  int failed = 0, id = 0;
  for (const auto& [name, check] : criteria) {
    ++id;
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("error: ") + e.what();
    }
    failed += !v.pass;
    std::printf("%s %2d %s: %s\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("acceptance: %d/%zu passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed;
}
