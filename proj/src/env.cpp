#include "veo/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace veo {

std::vector<double> Observation::flat() const {
  std::vector<double> v;
  v.reserve(dim(static_cast<int>(rsus.size())));
  v.insert(v.end(), {task_bits, instr_bits, cpu_hz, pos_x, pos_y, speed});
  for (const auto& r : rsus) v.insert(v.end(), {r.x, r.lateral, r.cpu_hz});
  v.push_back(local_backlog);
  v.insert(v.end(), rsu_backlogs.begin(), rsu_backlogs.end());
  v.push_back(virtual_energy);
  v.insert(v.end(), dt_aggregation.begin(), dt_aggregation.end());
  return v;
}

namespace {

// Smallest power of two at or above the bound (at least 1).
double pow2_at_least(double bound) {
  double s = 1.0;
  while (s < bound) s *= 2.0;
  return s;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void softmax(std::span<const double> logits, std::span<double> out) {
  double m = logits[0];
  for (double v : logits) m = std::max(m, v);
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - m);
    sum += out[i];
  }
  for (std::size_t i = 0; i < logits.size(); ++i) out[i] /= sum;
}

}  // namespace

ObservationScaler::ObservationScaler(const ScenarioConfig& cfg) {
  const double bits = pow2_at_least(std::max(cfg.task_bits_range.hi, 1.0));
  const double instr = pow2_at_least(std::max(cfg.instr_bits_range.hi, 1.0));
  const double cv_cpu = pow2_at_least(cfg.cv_cpu_range_hz.hi);
  const double rsu_extent = cfg.road_length_m / 2.0 + cfg.num_rsus * cfg.rsu_spacing_m / 2.0;
  const double x = pow2_at_least(std::max(cfg.road_length_m, rsu_extent));
  const double y = pow2_at_least(std::max(cfg.num_lanes * cfg.lane_width_m, cfg.rsu_lateral_offset_m));
  const double speed = pow2_at_least(cfg.speed_range_mps.hi);
  const double rsu_cpu = pow2_at_least(cfg.rsu_cpu_hz);
  // Backlogs have no hard bound; a few slots of full service is the yardstick.
  const double local_q = pow2_at_least(4.0 * cfg.cv_cpu_range_hz.hi * cfg.slot_duration_s);
  const double rsu_q = pow2_at_least(4.0 * cfg.rsu_cpu_hz * cfg.slot_duration_s);
  const double virt = pow2_at_least(4.0 * cfg.energy_budget_w);

  scale_.clear();
  scale_.insert(scale_.end(), {bits, instr, cv_cpu, x, y, speed});
  for (int k = 0; k < cfg.num_rsus; ++k) scale_.insert(scale_.end(), {x, y, rsu_cpu});
  scale_.push_back(local_q);
  for (int k = 0; k < cfg.num_rsus; ++k) scale_.push_back(rsu_q);
  scale_.push_back(virt);
  scale_.insert(scale_.end(), {rsu_q, rsu_q, rsu_q});
}

std::vector<double> ObservationScaler::apply(const Observation& obs) const {
  std::vector<double> v = obs.flat();
  if (v.size() != scale_.size()) throw std::invalid_argument("scaler: observation dim mismatch");
  for (std::size_t i = 0; i < v.size(); ++i) v[i] /= scale_[i];
  return v;
}

std::vector<double> ObservationScaler::invert(std::span<const double> scaled) const {
  if (scaled.size() != scale_.size()) throw std::invalid_argument("scaler: vector dim mismatch");
  std::vector<double> v(scaled.begin(), scaled.end());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= scale_[i];
  return v;
}

SplitDecision project_action(const RawAction& raw, const ScenarioConfig& cfg) {
  const int k = cfg.num_rsus;
  if (static_cast<int>(raw.logits.size()) != RawAction::dim(k))
    throw std::invalid_argument("project_action: logit count mismatch");
  for (double v : raw.logits)
    if (!std::isfinite(v)) throw std::invalid_argument("project_action: non-finite logit");

  SplitDecision d;
  std::vector<double> probs(static_cast<std::size_t>(k) + 1);
  softmax(std::span(raw.logits).subspan(0, k + 1), probs);
  d.local_ratio = probs[0];
  d.rsu_ratios.assign(probs.begin() + 1, probs.end());

  d.bandwidth.resize(k);
  softmax(std::span(raw.logits).subspan(k + 1, k), d.bandwidth);

  d.rsu_cpu_hz.resize(k);
  for (int j = 0; j < k; ++j)
    d.rsu_cpu_hz[j] = sigmoid(raw.logits[1 + 2 * k + j]) * cfg.rsu_usable_hz();
  return d;
}

std::vector<SplitDecision> project_profile(std::span<const RawAction> raws,
                                           const ScenarioConfig& cfg) {
  std::vector<SplitDecision> profile;
  profile.reserve(raws.size());
  for (const auto& raw : raws) profile.push_back(project_action(raw, cfg));
  const double cap = cfg.rsu_usable_hz();
  for (int j = 0; j < cfg.num_rsus; ++j) {
    double total = 0.0;
    for (const auto& d : profile) total += d.rsu_cpu_hz[j];
    if (total > cap) {
      const double scale = cap / total;
      for (auto& d : profile) d.rsu_cpu_hz[j] *= scale;
    }
  }
  return profile;
}

Env::Env(const ScenarioConfig& cfg, bool dt_enabled)
    : cfg_(cfg), dt_(dt_enabled), scaler_(cfg) {
  cfg_.validate();
  rsus_ = make_rsus(cfg_);
}

void Env::draw_tasks() {
  tasks_.resize(cfg_.num_cvs);
  for (int i = 0; i < cfg_.num_cvs; ++i) tasks_[i] = spawn_task(fleet_[i], cfg_, task_streams_[i]);
}

std::vector<Observation> Env::reset() {
  ++episode_;
  slot_ = 0;
  const std::uint64_t ep_seed =
      derive_seed(cfg_.seed, Stream::episode, static_cast<std::uint64_t>(episode_));
  fleet_ = make_vehicles(cfg_, ep_seed);
  task_streams_.clear();
  for (int i = 0; i < cfg_.num_cvs; ++i)
    task_streams_.emplace_back(derive_seed(ep_seed, Stream::task, static_cast<std::uint64_t>(i)));
  channel_streams_.clear();
  for (int i = 0; i < cfg_.num_cvs; ++i)
    for (int k = 0; k < cfg_.num_rsus; ++k)
      channel_streams_.emplace_back(
          derive_seed(ep_seed, Stream::channel, static_cast<std::uint64_t>(i) * 4096 + k));
  queues_ = QueueState::make(cfg_);
  local_delay_.assign(cfg_.num_cvs, 0.0);
  branch_delay_.assign(static_cast<std::size_t>(cfg_.num_cvs) * cfg_.num_rsus, 0.0);
  draw_tasks();
  return observe_all();
}

void Env::inject_backlogs(std::span<const double> local, std::span<const double> rsu) {
  if (static_cast<int>(local.size()) != cfg_.num_cvs ||
      static_cast<int>(rsu.size()) != cfg_.num_rsus)
    throw std::invalid_argument("inject_backlogs: size mismatch");
  std::copy(local.begin(), local.end(), queues_.local_backlog.begin());
  std::copy(rsu.begin(), rsu.end(), queues_.rsu_backlog.begin());
}

Observation Env::observe(int agent) const {
  const auto& v = fleet_.at(agent);
  const auto& t = tasks_.at(agent);
  Observation obs;
  obs.task_bits = t.task_bits;
  obs.instr_bits = t.instr_bits;
  obs.cpu_hz = v.cpu_hz;
  obs.pos_x = v.x;
  obs.pos_y = v.y;
  obs.speed = v.speed_mps;
  obs.rsus.resize(cfg_.num_rsus);
  for (int k = 0; k < cfg_.num_rsus; ++k)
    obs.rsus[k] = {rsus_[k].x, rsus_[k].lateral_m, rsus_[k].cpu_hz};
  obs.local_backlog = queues_.local_backlog[agent];
  obs.rsu_backlogs = queues_.rsu_backlog;
  obs.virtual_energy = queues_.virtual_energy;
  if (dt_) {
    double sum = 0.0, mx = 0.0;
    for (double q : queues_.rsu_backlog) {
      sum += q;
      mx = std::max(mx, q);
    }
    obs.dt_aggregation = {sum, sum / cfg_.num_rsus, mx};
  }
  return obs;
}

std::vector<Observation> Env::observe_all() const {
  std::vector<Observation> all;
  all.reserve(cfg_.num_cvs);
  for (int i = 0; i < cfg_.num_cvs; ++i) all.push_back(observe(i));
  return all;
}

std::vector<double> Env::global_state() const {
  std::vector<double> g;
  g.reserve(global_dim());
  for (int i = 0; i < cfg_.num_cvs; ++i) {
    const auto s = scaler_.apply(observe(i));
    g.insert(g.end(), s.begin(), s.end());
  }
  return g;
}

Env::Step Env::step(std::span<const RawAction> actions) {
  if (episode_ < 0) throw std::logic_error("step before reset");
  if (static_cast<int>(actions.size()) != cfg_.num_cvs)
    throw std::invalid_argument("step: one action per agent required");
  const int num_cvs = cfg_.num_cvs;
  const int num_rsus = cfg_.num_rsus;

  SlotOutcome rec;
  rec.slot = slot_;
  rec.tasks = tasks_;
  rec.actions = project_profile(actions, cfg_);

  rec.rates_bps.assign(static_cast<std::size_t>(num_cvs) * num_rsus, 0.0);
  rec.distances_m.assign(static_cast<std::size_t>(num_cvs) * num_rsus, 0.0);
  for (int i = 0; i < num_cvs; ++i) {
    for (int k = 0; k < num_rsus; ++k) {
      const std::size_t idx = static_cast<std::size_t>(i) * num_rsus + k;
      const double dist = cv_rsu_distance(fleet_[i], rsus_[k], cfg_.static_distance);
      const double h2 = draw_channel_gain2(channel_streams_[idx]);
      rec.distances_m[idx] = dist;
      rec.rates_bps[idx] =
          dist <= cfg_.rsu_coverage_m
              ? v2i_rate(rec.actions[i].bandwidth[k], h2, pathloss_gain(dist), cfg_)
              : 0.0;
    }
  }

  rec.outcomes.resize(num_cvs);
  for (int i = 0; i < num_cvs; ++i) {
    QueueDelays delays;
    delays.local_s = local_delay_[i];
    delays.rsu_s.assign(branch_delay_.begin() + static_cast<std::ptrdiff_t>(i) * num_rsus,
                        branch_delay_.begin() + static_cast<std::ptrdiff_t>(i + 1) * num_rsus);
    const std::span<const double> rates(rec.rates_bps.data() +
                                            static_cast<std::size_t>(i) * num_rsus,
                                        static_cast<std::size_t>(num_rsus));
    rec.outcomes[i] = evaluate_task(rec.actions[i], tasks_[i], rates, delays, cfg_);
    if (!std::isfinite(rec.outcomes[i].task_latency_s)) {
      rec.outcomes[i].task_latency_s = 10.0 * cfg_.t_max_s;
      rec.outcomes[i].deadline_met = false;
    }
  }

  rec.flows.local_arrival_cycles.resize(num_cvs);
  rec.flows.local_service_hz.resize(num_cvs);
  rec.flows.rsu_arrival_cycles.assign(num_rsus, 0.0);
  rec.flows.rsu_service_hz.assign(num_rsus, 0.0);
  rec.flows.e_total_j = 0.0;
  for (int i = 0; i < num_cvs; ++i) {
    rec.flows.local_arrival_cycles[i] = rec.outcomes[i].local_arrival_cycles;
    rec.flows.local_service_hz[i] = fleet_[i].cpu_hz;
    rec.flows.e_total_j += rec.outcomes[i].task_energy_j;
    for (int k = 0; k < num_rsus; ++k) {
      rec.flows.rsu_arrival_cycles[k] += rec.outcomes[i].rsu_arrival_cycles[k];
      rec.flows.rsu_service_hz[k] += rec.actions[i].rsu_cpu_hz[k];
    }
  }

  rec.objective = evaluate_slot(queues_, rec.outcomes, rec.flows, cfg_);
  rec.reward = rec.objective.reward;

  // Queue updates, with pre-update backlogs entering the delay windows.
  for (int i = 0; i < num_cvs; ++i) {
    const double pre = queues_.local_backlog[i];
    const double arrival = rec.flows.local_arrival_cycles[i];
    queues_.local_hist[i].push(pre, arrival);
    queues_.local_backlog[i] = step_local_queue(pre, arrival, fleet_[i].cpu_hz, cfg_);
  }
  for (int k = 0; k < num_rsus; ++k) {
    const double pre = queues_.rsu_backlog[k];
    std::vector<double> per_cv(num_cvs);
    for (int i = 0; i < num_cvs; ++i) per_cv[i] = rec.outcomes[i].rsu_arrival_cycles[k];
    queues_.rsu_hist[k].push(pre, rec.flows.rsu_arrival_cycles[k]);
    for (int i = 0; i < num_cvs; ++i) queues_.branch(i, k).push(pre, per_cv[i]);
    queues_.rsu_backlog[k] = step_rsu_queue(pre, per_cv, rec.flows.rsu_service_hz[k], cfg_);
  }
  queues_.virtual_energy = step_virtual_queue(queues_.virtual_energy, rec.flows.e_total_j, cfg_);

  for (int i = 0; i < num_cvs; ++i) local_delay_[i] = little_delay(queues_.local_hist[i]);
  for (int i = 0; i < num_cvs; ++i)
    for (int k = 0; k < num_rsus; ++k)
      branch_delay_[static_cast<std::size_t>(i) * num_rsus + k] =
          little_delay(queues_.branch(i, k));

  for (auto& v : fleet_) advance_mobility(v, cfg_);

  ++slot_;
  Step out;
  out.done = slot_ >= cfg_.slots_per_episode;
  if (!out.done) draw_tasks();
  out.obs = observe_all();
  out.reward = rec.reward;
  out.outcome = std::move(rec);
  return out;
}

}  // namespace veo
