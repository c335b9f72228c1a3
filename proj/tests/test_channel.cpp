#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hsrsched/channel.hpp"
#include "reference.hpp"

using namespace hsrsched;

TEST_SUITE("channel") {
  TEST_CASE("distance at trip start, cell edge and one period later") {
    TrajectoryConfig t;
    CHECK(distance_at(0.0, t) == doctest::Approx(30.0));
    CHECK(distance_at(15.0, t) == doctest::Approx(1500.2999700).epsilon(1e-9));
    t.trip_duration_s = 90;
    for (double x : {0.0, 1.234, 7.5, 14.9, 29.0, 44.1}) {
      CHECK(distance_at(x + 30.0, t) == doctest::Approx(distance_at(x, t)).epsilon(1e-9));
    }
  }

  TEST_CASE("distance is symmetric within a cell and stays in range") {
    TrajectoryConfig t;
    const double dmax = std::sqrt(1500.0 * 1500.0 + 30.0 * 30.0);
    for (int i = 0; i <= 300; ++i) {
      const double x = 0.1 * i;
      const double d = distance_at(x, t);
      CHECK(d == doctest::Approx(distance_at(30.0 - x, t)).epsilon(1e-9));
      CHECK(d >= 30.0 - 1e-9);
      CHECK(d <= dmax + 1e-9);
    }
    CHECK(t.max_distance_m() == doctest::Approx(dmax));
  }

  TEST_CASE("distance rejects times outside the trip") {
    TrajectoryConfig t;
    CHECK_THROWS_AS(distance_at(-0.001, t), std::domain_error);
    CHECK_THROWS_AS(distance_at(30.001, t), std::domain_error);
  }

  TEST_CASE("breakpoint and path loss at the track offset") {
    RadioConfig r;
    CHECK(r.breakpoint_m() == doctest::Approx(8000.0));
    CHECK(path_loss_db(30.0, r) == doctest::Approx(69.583).epsilon(1e-5));
    // 20 log10(2.4/5)
    CHECK(path_loss_db(1.0, r) - 44.2 == doctest::Approx(-6.3752).epsilon(1e-4));
    CHECK_THROWS_AS(path_loss_db(0.0, r), std::domain_error);
    CHECK_THROWS_AS(path_loss_db(-1.0, r), std::domain_error);
  }

  TEST_CASE("second path-loss branch starts at the breakpoint") {
    RadioConfig r;
    const double d = r.breakpoint_m();
    const double L = 20 * std::log10(r.carrier_hz / 5e9);
    CHECK(path_loss_db(d, r) == doctest::Approx(44.2 + 21.5 * std::log10(d) + L));
    CHECK(path_loss_db(2 * d, r) == doctest::Approx(44.2 + 40 * std::log10(2.0) + 21.5 * std::log10(d) + L));
  }

  TEST_CASE("snr and rate at trip start and cell edge") {
    TrajectoryConfig t;
    RadioConfig r;
    CHECK(snr_db(0.0, t, r) == doctest::Approx(45.417).epsilon(1e-4));
    CHECK(snr_db(15.0, t, r) == doctest::Approx(8.887).epsilon(1e-3));
    CHECK(rate_bps(0.0, t, r) == doctest::Approx(1.5088e8).epsilon(1e-4));
    CHECK(rate_bps(15.0, t, r) == doctest::Approx(3.128e7).epsilon(1e-3));
  }

  TEST_CASE("zero dB snr gives exactly the bandwidth") {
    TrajectoryConfig t;
    RadioConfig r;
    r.tx_power_over_noise_db = path_loss_db(30.0, r);
    CHECK(snr_db(0.0, t, r) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(rate_bps(0.0, t, r) == doctest::Approx(r.bandwidth_hz));
  }

  TEST_CASE("snr decreases over the first half cell") {
    TrajectoryConfig t;
    RadioConfig r;
    double prev = snr_db(0.0, t, r);
    for (int i = 1; i <= 150; ++i) {
      const double s = snr_db(0.1 * i, t, r);
      CHECK(s < prev);
      prev = s;
    }
  }

  TEST_CASE("capacity profile matches the reference link model") {
    TrajectoryConfig t;
    RadioConfig r;
    const auto p = build_capacity_profile(t, r);
    REQUIRE(p.size() == 30000);
    CHECK(p[0] == 301);
    CHECK(p[15000] == 62);
    ref::Link link;
    for (std::size_t k = 0; k < p.size(); k += 97) {
      CHECK(p[k] == ref::capacity(link, static_cast<double>(k) * 1e-3));
    }
  }

  TEST_CASE("default trip never reaches the far path-loss branch") {
    TrajectoryConfig t;
    RadioConfig r;
    CHECK(t.max_distance_m() < r.breakpoint_m());
  }

  TEST_CASE("capacity is a valley with its floor at the cell edge") {
    const auto p = build_capacity_profile({}, {});
    std::size_t k = 1;
    while (k < p.size() && p[k] <= p[k - 1]) ++k;
    while (k < p.size() && p[k] >= p[k - 1]) ++k;
    CHECK(k == p.size());
  }

  TEST_CASE("weak link floors to zero packets") {
    RadioConfig r;
    r.tx_power_over_noise_db = 60;
    const auto p = build_capacity_profile({}, r);
    CHECK(p[15000] == 0);
    CHECK(p.at_or_zero(-1) == 0);
    CHECK(p.at_or_zero(30000) == 0);
  }

  TEST_CASE("longer trips repeat the cell profile") {
    TrajectoryConfig t;
    t.trip_duration_s = 60;
    const auto p = build_capacity_profile(t, {});
    REQUIRE(p.size() == 60000);
    for (std::size_t k = 0; k < 30000; k += 113) CHECK(std::llabs(p[k] - p[k + 30000]) <= 1);
  }

  TEST_CASE("frame count tolerates binary rounding of the frame length") {
    TrajectoryConfig t;
    CHECK(t.frame_count() == 30000);
    t.frame_length_s = 3e-3;
    t.trip_duration_s = 0.9;
    CHECK(t.frame_count() == 300);
  }

  TEST_CASE("invalid configs are rejected") {
    TrajectoryConfig t;
    t.speed_mps = 0;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    RadioConfig r;
    r.packet_bits = -1;
    CHECK_THROWS_AS(r.validate(), std::invalid_argument);
  }

  TEST_CASE("channel csv has a schema line, a header and one row per frame") {
    TrajectoryConfig t;
    t.trip_duration_s = 0.005;
    std::ostringstream os;
    write_channel_csv(os, t, {});
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "# schema=1");
    std::getline(is, line);
    CHECK(line == "frame,time_s,distance_m,pathloss_db,snr_db,rate_bps,capacity_pkts");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 5);
  }
}
