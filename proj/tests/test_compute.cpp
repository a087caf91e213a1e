#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "veo/compute.hpp"

using namespace veo;
using doctest::Approx;

namespace {

TaskSpec reference_task() {
  TaskSpec t;
  t.task_bits = 2e6;
  t.instr_bits = 2e4;
  t.cpu_hz = 2.5e9;
  t.task_intensity = 2000.0;
  t.cotra_intensity = 300.0;
  t.t_max_s = 3.0;
  return t;
}

}  // namespace

TEST_CASE("local execution latency and energy") {
  const TaskSpec task = reference_task();
  SplitDecision split;
  split.local_ratio = 1.0;
  const double d = local_latency(split, task);
  CHECK(d == Approx(1.0 * 2e6 * 2000.0 / 2.5e9).epsilon(1e-12));
  CHECK(d == Approx(1.6).epsilon(1e-12));
  ScenarioConfig cfg;
  CHECK(local_energy(d, task.cpu_hz, cfg) == Approx(250.0).epsilon(1e-12));

  split.local_ratio = 0.0;
  CHECK(local_latency(split, task) == 0.0);
  split.local_ratio = 0.5;
  TaskSpec dead = task;
  dead.cpu_hz = 0.0;
  CHECK(std::isinf(local_latency(split, dead)));
  CHECK(local_energy(local_latency(split, dead), 0.0, cfg) == 0.0);
}

TEST_CASE("raw data upload latency and energy") {
  const TaskSpec task = reference_task();
  ScenarioConfig cfg;
  const double d = data_upload_latency(0.5, task, 4.94e8);
  CHECK(d == Approx(1e6 / 4.94e8).epsilon(1e-12));
  CHECK(d == Approx(2.024e-3).epsilon(1e-3));
  CHECK(upload_energy(d, cfg) == Approx(d * cfg.tx_power_w).epsilon(1e-12));
  CHECK(data_upload_latency(0.0, task, 4.94e8) == 0.0);
  CHECK(std::isinf(data_upload_latency(0.5, task, 0.0)));
  CHECK(upload_energy(std::numeric_limits<double>::infinity(), cfg) == 0.0);
}

TEST_CASE("instruction upload latency") {
  CHECK(instr_upload_latency(2e4, 4.94e8) == Approx(2e4 / 4.94e8).epsilon(1e-12));
  CHECK(instr_upload_latency(2e4, 4.94e8) == Approx(4.05e-5).epsilon(1e-3));
  CHECK(instr_upload_latency(0.0, 4.94e8) == 0.0);
  CHECK(std::isinf(instr_upload_latency(2e4, 0.0)));
}

TEST_CASE("coordinate transformation latency and energy") {
  const TaskSpec task = reference_task();
  ScenarioConfig cfg;
  const double d = cotra_latency(0.5, task, 1e10);
  CHECK(d == Approx(0.5 * 2e6 * 300.0 / 1e10).epsilon(1e-12));
  CHECK(d == Approx(3e-2).epsilon(1e-12));
  CHECK(cotra_energy(d, 1e10, cfg) == Approx(3.0).epsilon(1e-12));
  CHECK(cotra_latency(0.0, task, 1e10) == 0.0);
  CHECK(std::isinf(cotra_latency(0.5, task, 0.0)));
}

TEST_CASE("upload mode selection favours raw data on ties") {
  const UploadChoice fast_data = effective_upload(2.024e-3, 3e-2);
  CHECK(fast_data.latency_s == 2.024e-3);
  CHECK(fast_data.instr_mode == 0);

  const UploadChoice tie = effective_upload(5e-3, 5e-3);
  CHECK(tie.latency_s == 5e-3);
  CHECK(tie.instr_mode == 0);

  const double inf = std::numeric_limits<double>::infinity();
  const UploadChoice no_radio = effective_upload(inf, 3e-2);
  CHECK(no_radio.latency_s == 3e-2);
  CHECK(no_radio.instr_mode == 1);
}

TEST_CASE("rsu execution latency and energy") {
  const TaskSpec task = reference_task();
  ScenarioConfig cfg;
  const double d = rsu_compute_latency(0.5, task, 1e10);
  CHECK(d == Approx(0.5 * 2e6 * 2000.0 / 1e10).epsilon(1e-12));
  CHECK(d == Approx(0.2).epsilon(1e-12));
  CHECK(rsu_compute_energy(d, 1e10, cfg) == Approx(20.0).epsilon(1e-12));
}

TEST_CASE("task evaluation composes local and rsu branches") {
  const TaskSpec task = reference_task();
  ScenarioConfig cfg;
  SplitDecision split;
  split.local_ratio = 0.5;
  split.rsu_ratios = {0.5};
  split.bandwidth = {1.0};
  split.rsu_cpu_hz = {1e10};
  const std::vector<double> rates = {4.94e8};
  QueueDelays delays;
  delays.rsu_s = {0.0};

  const TaskOutcome out = evaluate_task(split, task, rates, delays, cfg);
  const double upload = 1e6 / 4.94e8;
  CHECK(out.local_latency_s == Approx(0.8).epsilon(1e-12));
  CHECK(out.upload_latency_s[0] == Approx(upload).epsilon(1e-12));
  CHECK(out.instr_mode[0] == 0);
  CHECK(out.rsu_latency_s[0] == Approx(upload + 0.2).epsilon(1e-12));
  CHECK(out.task_latency_s == Approx(0.8).epsilon(1e-12));
  CHECK(out.local_energy_j == Approx(125.0).epsilon(1e-12));
  CHECK(out.upload_energy_j[0] == Approx(upload).epsilon(1e-12));
  CHECK(out.compute_energy_j[0] == Approx(20.0).epsilon(1e-12));
  CHECK(out.task_energy_j == Approx(125.0 + upload + 20.0).epsilon(1e-12));
  CHECK(out.task_energy_j == Approx(145.0).epsilon(1e-3));
  CHECK(out.local_arrival_cycles == Approx(2e9).epsilon(1e-12));
  CHECK(out.rsu_arrival_cycles[0] == Approx(2e9).epsilon(1e-12));
  CHECK(out.feasible);
  CHECK(out.deadline_met);
}

TEST_CASE("instruction mode charges transformation cycles to the queue") {
  const TaskSpec task = reference_task();
  ScenarioConfig cfg;
  SplitDecision split;
  split.local_ratio = 0.0;
  split.rsu_ratios = {0.5};
  split.bandwidth = {1.0};
  split.rsu_cpu_hz = {1e10};
  const std::vector<double> rates = {1e4};  // raw upload would take 100 s
  QueueDelays delays;
  delays.rsu_s = {0.0};

  const TaskOutcome out = evaluate_task(split, task, rates, delays, cfg);
  CHECK(out.instr_mode[0] == 1);
  CHECK(out.upload_latency_s[0] == Approx(3e-2).epsilon(1e-12));
  CHECK(out.upload_energy_j[0] == Approx(3.0).epsilon(1e-12));
  CHECK(out.rsu_arrival_cycles[0] == Approx(0.5 * 2e6 * 2300.0).epsilon(1e-12));
  CHECK(out.task_latency_s == Approx(3e-2 + 0.2).epsilon(1e-12));
}

TEST_CASE("instruction airtime is counted when enabled") {
  const TaskSpec task = reference_task();
  ScenarioConfig cfg;
  cfg.instr_includes_transmit = true;
  SplitDecision split;
  split.local_ratio = 0.0;
  split.rsu_ratios = {0.5};
  split.bandwidth = {1.0};
  split.rsu_cpu_hz = {1e10};
  QueueDelays delays;
  delays.rsu_s = {0.0};

  SUBCASE("instruction path still wins") {
    const std::vector<double> rates = {1e6};
    const TaskOutcome out = evaluate_task(split, task, rates, delays, cfg);
    const double airtime = 2e4 / 1e6;
    CHECK(out.instr_mode[0] == 1);
    CHECK(out.upload_latency_s[0] == Approx(3e-2 + airtime).epsilon(1e-12));
    CHECK(out.upload_energy_j[0] == Approx(3.0 + airtime * cfg.tx_power_w).epsilon(1e-12));
  }

  SUBCASE("airtime tips the choice back to raw data") {
    const std::vector<double> rates = {3.3e7};
    const TaskOutcome out = evaluate_task(split, task, rates, delays, cfg);
    CHECK(out.instr_mode[0] == 0);
    CHECK(out.upload_latency_s[0] == Approx(1e6 / 3.3e7).epsilon(1e-12));
    CHECK(out.upload_energy_j[0] == Approx(1e6 / 3.3e7).epsilon(1e-12));
    CHECK(out.rsu_arrival_cycles[0] == Approx(0.5 * 2e6 * 2000.0).epsilon(1e-12));
  }
}

TEST_CASE("instruction bits are apportioned by rsu split weight") {
  const TaskSpec task = reference_task();
  ScenarioConfig cfg;
  cfg.instr_includes_transmit = true;
  SplitDecision split;
  split.local_ratio = 0.5;
  split.rsu_ratios = {0.3, 0.2};
  split.bandwidth = {0.5, 0.5};
  split.rsu_cpu_hz = {1e10, 1e10};
  const std::vector<double> rates = {1e6, 1e6};
  QueueDelays delays;
  delays.rsu_s = {0.0, 0.0};

  const TaskOutcome out = evaluate_task(split, task, rates, delays, cfg);
  REQUIRE(out.instr_mode[0] == 1);
  REQUIRE(out.instr_mode[1] == 1);
  const double cotra0 = 0.3 * 2e6 * 300.0 / 1e10;
  const double cotra1 = 0.2 * 2e6 * 300.0 / 1e10;
  CHECK(out.upload_latency_s[0] == Approx(cotra0 + 2e4 * 0.6 / 1e6).epsilon(1e-12));
  CHECK(out.upload_latency_s[1] == Approx(cotra1 + 2e4 * 0.4 / 1e6).epsilon(1e-12));
}

TEST_CASE("queue delay estimates extend branch latencies") {
  const TaskSpec task = reference_task();
  ScenarioConfig cfg;
  SplitDecision split;
  split.local_ratio = 0.5;
  split.rsu_ratios = {0.5};
  split.bandwidth = {1.0};
  split.rsu_cpu_hz = {1e10};
  const std::vector<double> rates = {4.94e8};
  QueueDelays delays;
  delays.local_s = 0.3;
  delays.rsu_s = {0.7};

  const TaskOutcome out = evaluate_task(split, task, rates, delays, cfg);
  const double upload = 1e6 / 4.94e8;
  CHECK(out.local_latency_s == Approx(0.8 + 0.3).epsilon(1e-12));
  CHECK(out.rsu_latency_s[0] == Approx(upload + 0.2 + 0.7).epsilon(1e-12));
  CHECK(out.task_latency_s == Approx(1.1).epsilon(1e-12));
}

TEST_CASE("an unreachable active branch marks the task infeasible") {
  const TaskSpec task = reference_task();
  ScenarioConfig cfg;
  SplitDecision split;
  split.local_ratio = 0.5;
  split.rsu_ratios = {0.5};
  split.bandwidth = {1.0};
  split.rsu_cpu_hz = {0.0};  // no grant and no radio: branch cannot finish
  const std::vector<double> rates = {0.0};
  QueueDelays delays;
  delays.rsu_s = {0.0};

  const TaskOutcome out = evaluate_task(split, task, rates, delays, cfg);
  CHECK_FALSE(out.feasible);
  CHECK_FALSE(out.deadline_met);
  CHECK(std::isinf(out.task_latency_s));
  CHECK(out.upload_energy_j[0] == 0.0);
}

TEST_CASE("an idle task has zero latency and meets its deadline") {
  TaskSpec task = reference_task();
  ScenarioConfig cfg;
  SplitDecision split;
  split.local_ratio = 0.0;
  split.rsu_ratios = {0.0};
  split.bandwidth = {1.0};
  split.rsu_cpu_hz = {1e10};
  const std::vector<double> rates = {4.94e8};
  QueueDelays delays;
  delays.rsu_s = {0.0};

  const TaskOutcome out = evaluate_task(split, task, rates, delays, cfg);
  CHECK(out.task_latency_s == 0.0);
  CHECK(out.task_energy_j == 0.0);
  CHECK(out.local_arrival_cycles == 0.0);
  CHECK(out.rsu_arrival_cycles[0] == 0.0);
  CHECK(out.feasible);
  CHECK(out.deadline_met);
}

TEST_CASE("per-rsu vector size disagreement is rejected") {
  const TaskSpec task = reference_task();
  ScenarioConfig cfg;
  SplitDecision split;
  split.local_ratio = 1.0;
  split.rsu_ratios = {0.0, 0.0};
  split.bandwidth = {1.0};
  split.rsu_cpu_hz = {1e10, 1e10};
  const std::vector<double> rates = {4.94e8, 4.94e8};
  QueueDelays delays;
  delays.rsu_s = {0.0, 0.0};
  CHECK_THROWS_AS(evaluate_task(split, task, rates, delays, cfg), std::invalid_argument);
}
