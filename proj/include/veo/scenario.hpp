#pragma once

#include <vector>

#include "veo/compute.hpp"
#include "veo/config.hpp"
#include "veo/rng.hpp"

namespace veo {

struct VehicleState {
  double x = 0.0;          // along-road position, wraps at road_length
  double y = 0.0;          // lane-center offset from the road edge
  double speed_mps = 0.0;  // constant per vehicle
  double cpu_hz = 0.0;
  int lane = 0;
};

struct RsuState {
  double x = 0.0;
  double lateral_m = 0.0;  // offset of the unit from the road edge
  double height_m = 0.0;
  double cpu_hz = 0.0;
};

// Initial fleet/infrastructure layout. Per-vehicle draws come from vehicle-
// indexed substreams so a fleet of size I is a prefix of any larger fleet.
std::vector<VehicleState> make_vehicles(const ScenarioConfig& cfg, std::uint64_t scenario_seed);
std::vector<RsuState> make_rsus(const ScenarioConfig& cfg);

// Advances one slot of straight-line motion with wraparound.
void advance_mobility(VehicleState& v, const ScenarioConfig& cfg);

// 3D separation between vehicle antenna and RSU head. The static variant
// ignores along-road displacement (unit pinned overhead).
double cv_rsu_distance(const VehicleState& v, const RsuState& r, bool static_distance);

// Log-distance pathloss as a linear power gain; distances below 1 m clamp.
double pathloss_gain(double distance_m);

// Squared Rayleigh envelope with unit mean (two half-variance Gaussians).
double draw_channel_gain2(Rng& rng);

// Achievable V2I rate in bit/s for one link share.
double v2i_rate(double bandwidth_ratio, double channel_gain2, double pathloss_linear,
                const ScenarioConfig& cfg);

// Draws one slot's workload for a vehicle.
TaskSpec spawn_task(const VehicleState& v, const ScenarioConfig& cfg, Rng& rng);

}  // namespace veo
