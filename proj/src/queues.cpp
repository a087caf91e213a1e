#include "veo/queues.hpp"

#include <algorithm>

namespace veo {

void DelayWindow::push(double backlog, double arrival) {
  entries_.emplace_back(backlog, arrival);
  while (entries_.size() > static_cast<std::size_t>(capacity_)) entries_.pop_front();
}

double DelayWindow::mean_backlog() const {
  if (entries_.empty()) return 0.0;
  double s = 0.0;
  for (const auto& [q, a] : entries_) s += q;
  return s / static_cast<double>(entries_.size());
}

double DelayWindow::mean_arrival() const {
  if (entries_.empty()) return 0.0;
  double s = 0.0;
  for (const auto& [q, a] : entries_) s += a;
  return s / static_cast<double>(entries_.size());
}

double little_delay(const DelayWindow& history) {
  const double arrival = history.mean_arrival();
  if (arrival <= 0.0) return 0.0;
  return history.mean_backlog() / arrival;
}

double step_local_queue(double q, double arrivals, double cpu_hz, const ScenarioConfig& cfg) {
  return std::max(q - cpu_hz * cfg.slot_duration_s + arrivals, 0.0);
}

double step_rsu_queue(double q, std::span<const double> arrivals_per_cv, double service_hz,
                      const ScenarioConfig& cfg) {
  double arrivals = 0.0;
  for (double a : arrivals_per_cv) arrivals += a;
  return std::max(q - service_hz * cfg.slot_duration_s + arrivals, 0.0);
}

double step_virtual_queue(double v, double e_total, const ScenarioConfig& cfg) {
  return std::max(v - cfg.energy_budget_w + e_total, 0.0);
}

QueueState QueueState::make(const ScenarioConfig& cfg) {
  QueueState z;
  z.local_backlog.assign(cfg.num_cvs, 0.0);
  z.rsu_backlog.assign(cfg.num_rsus, 0.0);
  z.virtual_energy = 0.0;
  z.local_hist.assign(cfg.num_cvs, DelayWindow(cfg.window_m));
  z.rsu_hist.assign(cfg.num_rsus, DelayWindow(cfg.window_m));
  z.branch_hist.assign(static_cast<std::size_t>(cfg.num_cvs) * cfg.num_rsus,
                       DelayWindow(cfg.window_m));
  return z;
}

}  // namespace veo
