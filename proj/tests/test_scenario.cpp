#include <cmath>
#include <vector>

#include "doctest.h"
#include "veo/rng.hpp"
#include "veo/scenario.hpp"

using namespace veo;
using doctest::Approx;

TEST_CASE("fleet layout respects the scenario bounds") {
  ScenarioConfig cfg;
  cfg.num_cvs = 32;
  const auto fleet = make_vehicles(cfg, 77);
  REQUIRE(fleet.size() == 32);
  for (const auto& v : fleet) {
    CHECK(v.x >= 0.0);
    CHECK(v.x < cfg.road_length_m);
    CHECK(v.lane >= 0);
    CHECK(v.lane < cfg.num_lanes);
    CHECK(v.y == Approx((v.lane + 0.5) * cfg.lane_width_m).epsilon(1e-12));
    CHECK(v.speed_mps >= cfg.speed_range_mps.lo);
    CHECK(v.speed_mps <= cfg.speed_range_mps.hi);
    CHECK(v.cpu_hz >= cfg.cv_cpu_range_hz.lo);
    CHECK(v.cpu_hz <= cfg.cv_cpu_range_hz.hi);
  }
}

TEST_CASE("a smaller fleet is a prefix of a larger one") {
  ScenarioConfig small;
  small.num_cvs = 3;
  ScenarioConfig large;
  large.num_cvs = 6;
  const auto a = make_vehicles(small, 9001);
  const auto b = make_vehicles(large, 9001);
  REQUIRE(a.size() == 3);
  REQUIRE(b.size() == 6);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].lane == b[i].lane);
    CHECK(a[i].speed_mps == b[i].speed_mps);
    CHECK(a[i].cpu_hz == b[i].cpu_hz);
  }
  CHECK(make_vehicles(small, 9001)[0].x == a[0].x);
  CHECK(make_vehicles(small, 9002)[0].x != a[0].x);
}

TEST_CASE("rsus sit centred on the road at the configured spacing") {
  ScenarioConfig cfg;
  const auto rsus = make_rsus(cfg);
  REQUIRE(rsus.size() == 3);
  CHECK(rsus[0].x == Approx(200.0).epsilon(1e-12));
  CHECK(rsus[1].x == Approx(350.0).epsilon(1e-12));
  CHECK(rsus[2].x == Approx(500.0).epsilon(1e-12));
  for (const auto& r : rsus) {
    CHECK(r.lateral_m == 9.75);
    CHECK(r.height_m == 10.0);
    CHECK(r.cpu_hz == cfg.rsu_cpu_hz);
  }

  ScenarioConfig two = cfg;
  two.num_rsus = 2;
  const auto pair = make_rsus(two);
  REQUIRE(pair.size() == 2);
  CHECK(pair[0].x == Approx(275.0).epsilon(1e-12));
  CHECK(pair[1].x == Approx(425.0).epsilon(1e-12));
}

TEST_CASE("mobility advances and wraps at the road end") {
  ScenarioConfig cfg;
  VehicleState v;
  v.x = 0.0;
  v.speed_mps = 14.0;
  advance_mobility(v, cfg);
  CHECK(v.x == Approx(14.0).epsilon(1e-12));

  v.x = 695.0;
  advance_mobility(v, cfg);
  CHECK(v.x == Approx(9.0).epsilon(1e-12));

  v.x = 695.0;
  v.speed_mps = 1405.0;  // two full laps plus five metres
  advance_mobility(v, cfg);
  CHECK(v.x == Approx(0.0).epsilon(1e-9));
}

TEST_CASE("vehicle to rsu distance") {
  ScenarioConfig cfg;
  VehicleState v;
  v.x = 350.0;
  v.y = 1.875;
  RsuState r;
  r.x = 350.0;
  r.lateral_m = 9.75;
  r.height_m = 10.0;

  const double expected = std::sqrt(7.875 * 7.875 + 100.0);
  CHECK(cv_rsu_distance(v, r, false) == Approx(expected).epsilon(1e-12));
  CHECK(cv_rsu_distance(v, r, false) == Approx(12.728).epsilon(1e-3));

  v.x = 250.0;
  CHECK(cv_rsu_distance(v, r, false) ==
        Approx(std::sqrt(100.0 * 100.0 + 7.875 * 7.875 + 100.0)).epsilon(1e-12));
  CHECK(cv_rsu_distance(v, r, true) == Approx(expected).epsilon(1e-12));
}

TEST_CASE("pathloss gain follows the log-distance law") {
  CHECK(pathloss_gain(1.0) == Approx(std::pow(10.0, -3.84)).epsilon(1e-12));
  CHECK(pathloss_gain(0.25) == pathloss_gain(1.0));
  CHECK(pathloss_gain(100.0) == Approx(std::pow(10.0, -8.04)).epsilon(1e-12));
  double prev = pathloss_gain(1.0);
  for (int d = 2; d <= 1000; ++d) {
    const double g = pathloss_gain(static_cast<double>(d));
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("v2i rate at the reference operating point") {
  ScenarioConfig cfg;
  const double gain = pathloss_gain(100.0);
  const double rate = v2i_rate(1.0, 1.0, gain, cfg);
  const double snr = cfg.tx_power_w * gain / cfg.noise_power_w;
  const double expected = 1.5 * 1.0 * 20e6 * std::log2(1.0 + snr);
  CHECK(rate == Approx(expected).epsilon(1e-12));
  CHECK(rate == Approx(4.94e8).epsilon(1e-3));

  CHECK(v2i_rate(0.0, 1.0, gain, cfg) == 0.0);
  CHECK(v2i_rate(-0.5, 1.0, gain, cfg) == 0.0);
  CHECK(v2i_rate(0.5, 1.0, gain, cfg) < rate);
}

TEST_CASE("channel power has unit mean") {
  Rng rng(4242);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double h2 = draw_channel_gain2(rng);
    CHECK(h2 >= 0.0);
    sum += h2;
  }
  const double mean = sum / n;
  CHECK(mean > 0.95);
  CHECK(mean < 1.05);
}

TEST_CASE("spawned tasks stay inside the configured ranges") {
  ScenarioConfig cfg;
  VehicleState v;
  v.cpu_hz = 2.6e9;
  Rng rng(31337);
  for (int i = 0; i < 2000; ++i) {
    const TaskSpec t = spawn_task(v, cfg, rng);
    CHECK(t.task_bits >= cfg.task_bits_range.lo);
    CHECK(t.task_bits <= cfg.task_bits_range.hi);
    CHECK(t.instr_bits >= cfg.instr_bits_range.lo);
    CHECK(t.instr_bits <= cfg.instr_bits_range.hi);
    CHECK(t.task_intensity >= cfg.task_intensity_range.lo);
    CHECK(t.task_intensity <= cfg.task_intensity_range.hi);
    CHECK(t.cotra_intensity >= cfg.cotra_intensity_range.lo);
    CHECK(t.cotra_intensity <= cfg.cotra_intensity_range.hi);
    CHECK(t.cpu_hz == v.cpu_hz);
    CHECK(t.t_max_s == cfg.t_max_s);
  }
}

TEST_CASE("task draws are reproducible per stream") {
  ScenarioConfig cfg;
  VehicleState v;
  v.cpu_hz = 2.6e9;
  Rng a(555);
  Rng b(555);
  const TaskSpec ta = spawn_task(v, cfg, a);
  const TaskSpec tb = spawn_task(v, cfg, b);
  CHECK(ta.task_bits == tb.task_bits);
  CHECK(ta.instr_bits == tb.instr_bits);
  CHECK(ta.task_intensity == tb.task_intensity);
  CHECK(ta.cotra_intensity == tb.cotra_intensity);
}
