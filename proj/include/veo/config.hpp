#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace veo {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Static description of one experiment scenario. All values are SI and are
// immutable for the lifetime of an environment instance.
struct ScenarioConfig {
  // Topology.
  int num_cvs = 5;
  int num_rsus = 3;
  int num_lanes = 4;
  double lane_width_m = 3.75;
  double road_length_m = 700.0;
  double rsu_spacing_m = 150.0;
  double rsu_height_m = 10.0;
  double rsu_lateral_offset_m = 9.75;
  double rsu_coverage_m = 200.0;

  // Radio.
  double bandwidth_hz = 20e6;
  double noise_power_w = 1e-13;
  double tx_power_w = 1.0;
  double enhancement_factor = 1.5;

  // Timing.
  double slot_duration_s = 1.0;
  int slots_per_episode = 30;

  // Vehicles and compute.
  Interval speed_range_mps{12.0, 16.0};
  Interval cv_cpu_range_hz{2e9, 3e9};
  double rsu_cpu_hz = 20e9;
  double twin_reserve_hz = 1e9;

  // Task generation.
  Interval task_bits_range{1e6, 3e6};
  Interval instr_bits_range{1e4, 5e4};
  Interval task_intensity_range{1500.0, 2000.0};
  Interval cotra_intensity_range{100.0, 500.0};
  double t_max_s = 3.0;

  // Energy and objective.
  double kappa_cv = 1e-26;
  double kappa_rsu = 1e-28;
  double alpha = 0.6;
  double lyapunov_v = 5.0;
  double energy_budget_w = 400.0;
  double deadline_penalty = 10.0;

  // Queueing.
  int window_m = 5;

  // Model toggles.
  bool static_distance = false;
  bool instr_includes_transmit = false;

  std::uint64_t seed = 1;

  // Usable RSU cycles once the twin's reserve is held back.
  double rsu_usable_hz() const { return rsu_cpu_hz - twin_reserve_hz; }

  // Throws ConfigError with the offending field named.
  void validate() const;
};

// Parses "key = value" lines; '#' starts a comment; interval values are two
// numbers separated by a comma or whitespace. Unknown keys are errors.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);
// One key per line in parse_config's format; parses back to an equal config.
std::string config_to_text(const ScenarioConfig& cfg);
void save_config(const ScenarioConfig& cfg, const std::string& path);

// Single-field access by key name (same key space as the config file).
void config_set_field(ScenarioConfig& cfg, const std::string& key, const std::string& value);
std::string config_get_field(const ScenarioConfig& cfg, const std::string& key);

}  // namespace veo
