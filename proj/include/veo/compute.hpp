#pragma once

#include <span>
#include <vector>

#include "veo/config.hpp"

namespace veo {

// One slot's workload for one vehicle. Units: bits, Hz, cycles/bit, seconds.
struct TaskSpec {
  double task_bits = 0.0;        // G^TasD
  double instr_bits = 0.0;       // G^InsD
  double cpu_hz = 0.0;           // onboard CPU of the owning vehicle
  double task_intensity = 0.0;   // cycles per bit for the task itself
  double cotra_intensity = 0.0;  // cycles per bit for coordinate transformation
  double t_max_s = 0.0;          // completion deadline
};

// Feasible allocation for one vehicle after projection.
struct SplitDecision {
  double local_ratio = 0.0;
  std::vector<double> rsu_ratios;      // per RSU, local + sum(rsu) == 1
  std::vector<double> bandwidth;       // per RSU, sum == 1
  std::vector<double> rsu_cpu_hz;      // granted cycles/s per RSU
};

// Queueing-delay estimates fed into branch latencies.
struct QueueDelays {
  double local_s = 0.0;
  std::vector<double> rsu_s;
};

// Full per-task accounting for one slot.
struct TaskOutcome {
  double local_latency_s = 0.0;          // includes local queue delay when active
  std::vector<double> upload_latency_s;  // effective upload per RSU (mode-resolved)
  std::vector<double> rsu_latency_s;     // upload + compute + queue delay per RSU
  std::vector<int> instr_mode;           // 1 when the instruction path carries the branch
  double task_latency_s = 0.0;           // max over active branches
  double local_energy_j = 0.0;
  std::vector<double> upload_energy_j;   // transmission or transformation energy per RSU
  std::vector<double> compute_energy_j;  // RSU execution energy per branch
  double task_energy_j = 0.0;
  double local_arrival_cycles = 0.0;     // enqueued locally this slot
  std::vector<double> rsu_arrival_cycles;  // enqueued at each RSU this slot
  bool feasible = true;                  // every active branch has a finite route
  bool deadline_met = true;
};

double local_latency(const SplitDecision& split, const TaskSpec& task);
double local_energy(double latency_s, double cpu_hz, const ScenarioConfig& cfg);

// Raw-data transmission leg of one RSU branch.
double data_upload_latency(double split_ratio, const TaskSpec& task, double rate_bps);
double upload_energy(double latency_s, const ScenarioConfig& cfg);

// Instruction transmission leg (tiny control payload).
double instr_upload_latency(double instr_bits_share, double rate_bps);

// RSU-side coordinate transformation replacing the raw-data upload.
double cotra_latency(double split_ratio, const TaskSpec& task, double rsu_cpu_hz);
double cotra_energy(double latency_s, double rsu_cpu_hz, const ScenarioConfig& cfg);

// Mode selection: the branch travels by whichever path finishes first,
// instruction mode only on a strict win (ties keep raw data).
struct UploadChoice {
  double latency_s = 0.0;
  int instr_mode = 0;
};
UploadChoice effective_upload(double datat_latency_s, double cotra_latency_s);

double rsu_compute_latency(double split_ratio, const TaskSpec& task, double rsu_cpu_hz);
double rsu_compute_energy(double latency_s, double rsu_cpu_hz, const ScenarioConfig& cfg);

// Composes all branches of one task. rates_bps holds the achieved V2I rate per
// RSU for this vehicle; delays carry last slot's queueing estimates.
TaskOutcome evaluate_task(const SplitDecision& split, const TaskSpec& task,
                          std::span<const double> rates_bps, const QueueDelays& delays,
                          const ScenarioConfig& cfg);

}  // namespace veo
