#include "veo/compute.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace veo {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kActiveEps = 0.0;  // a branch is active iff its ratio > 0
}  // namespace

double local_latency(const SplitDecision& split, const TaskSpec& task) {
  if (split.local_ratio <= kActiveEps) return 0.0;
  if (task.cpu_hz <= 0.0) return kInf;
  return split.local_ratio * task.task_bits * task.task_intensity / task.cpu_hz;
}

double local_energy(double latency_s, double cpu_hz, const ScenarioConfig& cfg) {
  if (!std::isfinite(latency_s)) return 0.0;
  return cfg.kappa_cv * latency_s * cpu_hz * cpu_hz * cpu_hz;
}

double data_upload_latency(double split_ratio, const TaskSpec& task, double rate_bps) {
  if (split_ratio <= kActiveEps) return 0.0;
  if (rate_bps <= 0.0) return kInf;
  return split_ratio * task.task_bits / rate_bps;
}

double upload_energy(double latency_s, const ScenarioConfig& cfg) {
  if (!std::isfinite(latency_s)) return 0.0;
  return latency_s * cfg.tx_power_w;
}

double instr_upload_latency(double instr_bits_share, double rate_bps) {
  if (instr_bits_share <= 0.0) return 0.0;
  if (rate_bps <= 0.0) return kInf;
  return instr_bits_share / rate_bps;
}

double cotra_latency(double split_ratio, const TaskSpec& task, double rsu_cpu_hz) {
  if (split_ratio <= kActiveEps) return 0.0;
  if (rsu_cpu_hz <= 0.0) return kInf;
  return split_ratio * task.task_bits * task.cotra_intensity / rsu_cpu_hz;
}

double cotra_energy(double latency_s, double rsu_cpu_hz, const ScenarioConfig& cfg) {
  if (!std::isfinite(latency_s)) return 0.0;
  return cfg.kappa_rsu * latency_s * rsu_cpu_hz * rsu_cpu_hz * rsu_cpu_hz;
}

UploadChoice effective_upload(double datat_latency_s, double cotra_latency_s) {
  if (cotra_latency_s < datat_latency_s) return {cotra_latency_s, 1};
  return {datat_latency_s, 0};
}

double rsu_compute_latency(double split_ratio, const TaskSpec& task, double rsu_cpu_hz) {
  if (split_ratio <= kActiveEps) return 0.0;
  if (rsu_cpu_hz <= 0.0) return kInf;
  return split_ratio * task.task_bits * task.task_intensity / rsu_cpu_hz;
}

double rsu_compute_energy(double latency_s, double rsu_cpu_hz, const ScenarioConfig& cfg) {
  if (!std::isfinite(latency_s)) return 0.0;
  return cfg.kappa_rsu * latency_s * rsu_cpu_hz * rsu_cpu_hz * rsu_cpu_hz;
}

TaskOutcome evaluate_task(const SplitDecision& split, const TaskSpec& task,
                          std::span<const double> rates_bps, const QueueDelays& delays,
                          const ScenarioConfig& cfg) {
  const std::size_t k = split.rsu_ratios.size();
  if (rates_bps.size() != k || split.bandwidth.size() != k || split.rsu_cpu_hz.size() != k ||
      delays.rsu_s.size() != k)
    throw std::invalid_argument("evaluate_task: per-RSU vector sizes disagree");

  TaskOutcome out;
  out.upload_latency_s.assign(k, 0.0);
  out.rsu_latency_s.assign(k, 0.0);
  out.instr_mode.assign(k, 0);
  out.upload_energy_j.assign(k, 0.0);
  out.compute_energy_j.assign(k, 0.0);
  out.rsu_arrival_cycles.assign(k, 0.0);

  double latency = 0.0;
  bool any_active = false;

  const double d_loc = local_latency(split, task);
  if (split.local_ratio > kActiveEps) {
    any_active = true;
    out.local_energy_j = local_energy(d_loc, task.cpu_hz, cfg);
    out.local_latency_s = d_loc + delays.local_s;
    out.local_arrival_cycles = split.local_ratio * task.task_bits * task.task_intensity;
    latency = std::max(latency, out.local_latency_s);
    if (!std::isfinite(d_loc)) out.feasible = false;
  }

  double rsu_ratio_sum = 0.0;
  for (double r : split.rsu_ratios) rsu_ratio_sum += r;

  for (std::size_t j = 0; j < k; ++j) {
    const double ratio = split.rsu_ratios[j];
    if (ratio <= kActiveEps) continue;
    any_active = true;

    const double datat = data_upload_latency(ratio, task, rates_bps[j]);
    const double cotra = cotra_latency(ratio, task, split.rsu_cpu_hz[j]);
    UploadChoice up = effective_upload(datat, cotra);

    const double instr_share = task.instr_bits * ratio / rsu_ratio_sum;
    if (up.instr_mode == 1 && cfg.instr_includes_transmit) {
      const double instr = instr_upload_latency(instr_share, rates_bps[j]);
      up.latency_s = cotra + instr;
      // Re-examine the choice with the instruction airtime included.
      if (!(up.latency_s < datat)) up = {datat, 0};
    }

    const double compute = rsu_compute_latency(ratio, task, split.rsu_cpu_hz[j]);

    out.upload_latency_s[j] = up.latency_s;
    out.instr_mode[j] = up.instr_mode;
    out.rsu_latency_s[j] = up.latency_s + compute + delays.rsu_s[j];

    if (up.instr_mode == 1) {
      out.upload_energy_j[j] = cotra_energy(cotra, split.rsu_cpu_hz[j], cfg);
      if (cfg.instr_includes_transmit)
        out.upload_energy_j[j] += upload_energy(instr_upload_latency(instr_share, rates_bps[j]), cfg);
    } else {
      out.upload_energy_j[j] = upload_energy(datat, cfg);
    }
    out.compute_energy_j[j] = rsu_compute_energy(compute, split.rsu_cpu_hz[j], cfg);

    out.rsu_arrival_cycles[j] =
        ratio * task.task_bits *
        (task.task_intensity + (up.instr_mode == 1 ? task.cotra_intensity : 0.0));

    latency = std::max(latency, out.rsu_latency_s[j]);
    if (!std::isfinite(out.rsu_latency_s[j])) out.feasible = false;
  }

  out.task_latency_s = any_active ? latency : 0.0;
  out.task_energy_j = out.local_energy_j;
  for (std::size_t j = 0; j < k; ++j)
    out.task_energy_j += out.upload_energy_j[j] + out.compute_energy_j[j];
  out.deadline_met = out.feasible && out.task_latency_s <= task.t_max_s;
  return out;
}

}  // namespace veo
