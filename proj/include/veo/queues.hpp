#pragma once

#include <deque>
#include <span>
#include <vector>

#include "veo/config.hpp"

namespace veo {

// Fixed-depth window of (backlog, arrival) pairs for delay estimation.
class DelayWindow {
 public:
  DelayWindow() = default;
  explicit DelayWindow(int capacity) : capacity_(capacity) {}

  void push(double backlog, double arrival);
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  double mean_backlog() const;
  double mean_arrival() const;

 private:
  int capacity_ = 1;
  std::deque<std::pair<double, double>> entries_;
};

// Windowed-average backlog over windowed-average arrival; 0 on an idle window.
double little_delay(const DelayWindow& history);

double step_local_queue(double q, double arrivals, double cpu_hz, const ScenarioConfig& cfg);
double step_rsu_queue(double q, std::span<const double> arrivals_per_cv, double service_hz,
                      const ScenarioConfig& cfg);
double step_virtual_queue(double v, double e_total, const ScenarioConfig& cfg);

// Backlogs in cycles; one virtual energy queue stands in for the per-vehicle
// replicas, which all evolve identically.
struct QueueState {
  std::vector<double> local_backlog;  // per CV
  std::vector<double> rsu_backlog;    // per RSU
  double virtual_energy = 0.0;

  std::vector<DelayWindow> local_hist;   // per CV
  std::vector<DelayWindow> rsu_hist;     // per RSU, pooled arrivals
  std::vector<DelayWindow> branch_hist;  // per (CV, RSU): shared backlog, own arrivals

  int num_cvs() const { return static_cast<int>(local_backlog.size()); }
  int num_rsus() const { return static_cast<int>(rsu_backlog.size()); }
  DelayWindow& branch(int cv, int rsu) { return branch_hist[cv * num_rsus() + rsu]; }
  const DelayWindow& branch(int cv, int rsu) const { return branch_hist[cv * num_rsus() + rsu]; }

  static QueueState make(const ScenarioConfig& cfg);
};

}  // namespace veo
