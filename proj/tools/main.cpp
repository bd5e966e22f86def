#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/core.h>

#include "ntn/checkpoint.hpp"
#include "ntn/config.hpp"
#include "ntn/experiments.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<int> episodes;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "INI experiment config")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", c.seed, "override [run] seed");
  cmd->add_option("--out", c.out, "output directory (default: [run] out_dir)");
  cmd->add_option("--episodes-override", c.episodes, "override [marl] episodes")->check(CLI::PositiveNumber);
}

ntn::ExperimentConfig load(const Common& c) {
  ntn::ExperimentConfig cfg = ntn::load_config(c.config);
  if (c.seed) {
    cfg.train.seed = *c.seed;
    cfg.seeds = {*c.seed};
  }
  if (c.episodes) cfg.train.episodes = *c.episodes;
  return cfg;
}

std::filesystem::path out_dir(const Common& c, const ntn::ExperimentConfig& cfg) {
  return c.out.empty() ? std::filesystem::path(cfg.out_dir) : std::filesystem::path(c.out);
}

void report(const std::vector<std::filesystem::path>& files) {
  for (const auto& f : files) fmt::print("wrote {}\n", f.string());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Satellite-UAV hybrid FSO/RF relay simulator and MARL trainer"};
  app.require_subcommand(1);

  Common train_opts;
  auto* train = app.add_subcommand("train", "train the multi-agent policy, write curve, checkpoint and evaluation");
  add_common(train, train_opts);
  std::optional<std::string> train_objective;
  train->add_option("--objective", train_objective, "ee_max | rate_max | energy_min");

  Common eval_opts;
  std::string checkpoint;
  auto* eval = app.add_subcommand("eval", "greedy rollout of a saved policy");
  add_common(eval, eval_opts);
  eval->add_option("--checkpoint", checkpoint, "checkpoint written by train")->required()->check(CLI::ExistingFile);

  Common base_opts;
  std::vector<std::string> schemes;
  auto* base = app.add_subcommand("baseline", "non-learned reference schemes");
  add_common(base, base_opts);
  base->add_option("--scheme", schemes, "direct, sat_only_1..3, sat_ground (default: [baseline] schemes or all)")
      ->delimiter(',');

  Common sweep_opts;
  std::vector<std::string> objectives;
  auto* sweep = app.add_subcommand("sweep", "train and evaluate every objective over the configured seeds");
  add_common(sweep, sweep_opts);
  sweep->add_option("--objective", objectives, "objectives to compare (default: all three)")->delimiter(',');

  Common cross_opts;
  auto* cross = app.add_subcommand("crossover", "FSO and RF rate versus distance");
  add_common(cross, cross_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*train) {
      ntn::ExperimentConfig cfg = load(train_opts);
      if (train_objective) cfg.objective = ntn::parse_objective(*train_objective);
      report(ntn::cmd_train(cfg, out_dir(train_opts, cfg)));
    } else if (*eval) {
      const ntn::ExperimentConfig cfg = load(eval_opts);
      report(ntn::cmd_eval(cfg, checkpoint, out_dir(eval_opts, cfg)));
    } else if (*base) {
      const ntn::ExperimentConfig cfg = load(base_opts);
      std::vector<std::string> list = schemes;
      if (list.empty()) list = cfg.baselines;
      if (list.empty()) list = {"direct", "sat_only_1", "sat_only_2", "sat_only_3", "sat_ground"};
      report(ntn::cmd_baseline(cfg, list, out_dir(base_opts, cfg)));
    } else if (*sweep) {
      const ntn::ExperimentConfig cfg = load(sweep_opts);
      std::vector<ntn::Objective> list;
      for (const std::string& o : objectives) list.push_back(ntn::parse_objective(o));
      if (list.empty()) list = {ntn::Objective::rate_max, ntn::Objective::energy_min, ntn::Objective::ee_max};
      report(ntn::cmd_sweep(cfg, list, out_dir(sweep_opts, cfg)));
    } else if (*cross) {
      const ntn::ExperimentConfig cfg = load(cross_opts);
      report(ntn::cmd_crossover(cfg, out_dir(cross_opts, cfg)));
    }
  } catch (const ntn::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kExitConfig;
  } catch (const ntn::DivergenceError& e) {
    fmt::print(stderr, "training diverged: {}\n", e.what());
    return kExitDivergence;
  } catch (const std::invalid_argument& e) {
    fmt::print(stderr, "invalid argument: {}\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
  return 0;
}
