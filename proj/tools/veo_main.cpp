#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "veo/veo.h"

namespace {

void check(veo_status status, const char* what) {
  if (status != VEO_OK) {
    std::fprintf(stderr, "error: %s: %s\n", what, veo_last_error());
    std::exit(1);
  }
}

struct CommonArgs {
  std::string config_path;
  std::string policy;
  std::string dt;
  std::string out;
  std::string seed;
  std::string seeds;
  std::string episodes;
  std::string workers;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "Scenario config file");
  cmd->add_option("--seed", args.seed, "Base seed");
  cmd->add_option("--seeds", args.seeds, "Number of seeds to run");
  cmd->add_option("--policy", args.policy,
                  "Policy: random, all_local, all_edge_nearest, uniform_split, greedy_grid, "
                  "or trained:<checkpoint>");
  cmd->add_option("--dt", args.dt, "Digital twin assistance: on or off");
  cmd->add_option("--out", args.out, "Output directory for artifacts");
  cmd->add_option("--episodes", args.episodes, "Episodes per run");
  cmd->add_option("--workers", args.workers, "Parallel worker count");
  cmd->add_option("--set", args.overrides, "Scenario config override key=value")
      ->take_all();
}

int run_mode(const std::string& mode, const CommonArgs& args, const std::string& sweep_axis,
             const std::string& sweep_values) {
  veo_config* cfg = nullptr;
  if (args.config_path.empty())
    check(veo_config_create(&cfg), "config");
  else
    check(veo_config_load(args.config_path.c_str(), &cfg), "config");
  for (const auto& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
      return 1;
    }
    check(veo_config_set(cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()), "--set");
  }

  veo_plan* plan = nullptr;
  check(veo_plan_create(&plan), "plan");
  check(veo_plan_set(plan, "mode", mode.c_str()), "mode");
  if (!args.policy.empty()) check(veo_plan_set(plan, "policy", args.policy.c_str()), "--policy");
  if (!args.dt.empty()) check(veo_plan_set(plan, "dt", args.dt.c_str()), "--dt");
  if (!args.seed.empty()) check(veo_plan_set(plan, "seed", args.seed.c_str()), "--seed");
  if (!args.seeds.empty()) check(veo_plan_set(plan, "seeds", args.seeds.c_str()), "--seeds");
  if (!args.episodes.empty())
    check(veo_plan_set(plan, "episodes", args.episodes.c_str()), "--episodes");
  if (!args.out.empty()) check(veo_plan_set(plan, "out", args.out.c_str()), "--out");
  if (!args.workers.empty())
    check(veo_plan_set(plan, "workers", args.workers.c_str()), "--workers");
  if (!sweep_axis.empty())
    check(veo_plan_set(plan, "sweep_axis", sweep_axis.c_str()), "--sweep-axis");
  if (!sweep_values.empty())
    check(veo_plan_set(plan, "sweep_values", sweep_values.c_str()), "--sweep-values");

  char out_dir[4096];
  check(veo_plan_run(plan, cfg, out_dir, sizeof out_dir), mode.c_str());
  std::printf("artifacts: %s\n", out_dir);

  veo_plan_free(plan);
  veo_config_free(cfg);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vehicular edge offloading simulator and trainer"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(veo_version()));

  CommonArgs sim_args, train_args, eval_args, sweep_args;
  std::string sweep_axis, sweep_values;

  CLI::App* simulate = app.add_subcommand("simulate", "Roll out a policy and record traces");
  add_common(simulate, sim_args);

  CLI::App* train = app.add_subcommand("train", "Train the multi-agent policy");
  add_common(train, train_args);

  CLI::App* evaluate = app.add_subcommand("evaluate", "Evaluate a policy without traces");
  add_common(evaluate, eval_args);

  CLI::App* sweep = app.add_subcommand("sweep", "Run a policy across a parameter sweep");
  add_common(sweep, sweep_args);
  sweep->add_option("--sweep-axis", sweep_axis, "Axis: num_cvs, lyapunov_v, or dt_enabled")
      ->required();
  sweep->add_option("--sweep-values", sweep_values, "Comma separated axis values")->required();

  CLI11_PARSE(app, argc, argv);

  if (simulate->parsed()) return run_mode("simulate", sim_args, "", "");
  if (train->parsed()) return run_mode("train", train_args, "", "");
  if (evaluate->parsed()) return run_mode("evaluate", eval_args, "", "");
  return run_mode("sweep", sweep_args, sweep_axis, sweep_values);
}
