#include "veo/scenario.hpp"

#include <cmath>

namespace veo {

std::vector<VehicleState> make_vehicles(const ScenarioConfig& cfg, std::uint64_t scenario_seed) {
  std::vector<VehicleState> fleet;
  fleet.reserve(cfg.num_cvs);
  for (int i = 0; i < cfg.num_cvs; ++i) {
    Rng rng(derive_seed(scenario_seed, Stream::vehicle, static_cast<std::uint64_t>(i)));
    VehicleState v;
    v.x = rng.uniform(0.0, cfg.road_length_m);
    v.lane = static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.num_lanes)));
    v.y = (v.lane + 0.5) * cfg.lane_width_m;
    v.speed_mps = rng.uniform(cfg.speed_range_mps.lo, cfg.speed_range_mps.hi);
    v.cpu_hz = rng.uniform(cfg.cv_cpu_range_hz.lo, cfg.cv_cpu_range_hz.hi);
    fleet.push_back(v);
  }
  return fleet;
}

std::vector<RsuState> make_rsus(const ScenarioConfig& cfg) {
  std::vector<RsuState> units;
  units.reserve(cfg.num_rsus);
  const double mid = cfg.road_length_m / 2.0;
  for (int k = 0; k < cfg.num_rsus; ++k) {
    RsuState r;
    r.x = mid + (k - (cfg.num_rsus - 1) / 2.0) * cfg.rsu_spacing_m;
    r.lateral_m = cfg.rsu_lateral_offset_m;
    r.height_m = cfg.rsu_height_m;
    r.cpu_hz = cfg.rsu_cpu_hz;
    units.push_back(r);
  }
  return units;
}

void advance_mobility(VehicleState& v, const ScenarioConfig& cfg) {
  v.x += v.speed_mps * cfg.slot_duration_s;
  while (v.x >= cfg.road_length_m) v.x -= cfg.road_length_m;
}

double cv_rsu_distance(const VehicleState& v, const RsuState& r, bool static_distance) {
  const double dx = static_distance ? 0.0 : (r.x - v.x);
  const double dy = v.y - r.lateral_m;
  return std::sqrt(dx * dx + dy * dy + r.height_m * r.height_m);
}

double pathloss_gain(double distance_m) {
  const double d = std::max(distance_m, 1.0);
  const double db = -38.4 - 21.0 * std::log10(d);
  return std::pow(10.0, db / 10.0);
}

double draw_channel_gain2(Rng& rng) {
  const double a = rng.normal() * std::sqrt(0.5);
  const double b = rng.normal() * std::sqrt(0.5);
  return a * a + b * b;
}

double v2i_rate(double bandwidth_ratio, double channel_gain2, double pathloss_linear,
                const ScenarioConfig& cfg) {
  if (bandwidth_ratio <= 0.0) return 0.0;
  const double snr = cfg.tx_power_w * channel_gain2 * pathloss_linear / cfg.noise_power_w;
  return cfg.enhancement_factor * bandwidth_ratio * cfg.bandwidth_hz * std::log2(1.0 + snr);
}

TaskSpec spawn_task(const VehicleState& v, const ScenarioConfig& cfg, Rng& rng) {
  TaskSpec t;
  t.task_bits = rng.uniform(cfg.task_bits_range.lo, cfg.task_bits_range.hi);
  t.instr_bits = rng.uniform(cfg.instr_bits_range.lo, cfg.instr_bits_range.hi);
  t.cpu_hz = v.cpu_hz;
  t.task_intensity = rng.uniform(cfg.task_intensity_range.lo, cfg.task_intensity_range.hi);
  t.cotra_intensity = rng.uniform(cfg.cotra_intensity_range.lo, cfg.cotra_intensity_range.hi);
  t.t_max_s = cfg.t_max_s;
  return t;
}

}  // namespace veo
