#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "ntn/baselines.hpp"
#include "ntn/config.hpp"
#include "ntn/metrics_csv.hpp"
#include "ntn/trainer.hpp"

namespace ntn {

/// Worker cap from NTN_THREADS (default: hardware concurrency, at least 1).
int worker_count();

/// Runs fn(0..n-1) on up to `workers` threads. Results must be written to
/// per-index slots so the outcome does not depend on scheduling. The first
/// exception is rethrown after all workers stop.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

struct RunOutcome {
  std::uint64_t seed = 0;
  TrainResult train;
  EvalResult eval;
  BaselineSeries oracle;
  RunSummary summary;
};

/// Trains with `seed`, then evaluates the greedy policy and scores it
/// against the frozen-trajectory oracle.
RunOutcome train_and_evaluate(const ExperimentConfig& cfg, const RewardWeights& weights, std::uint64_t seed,
                              const std::string& run_id);

RunSummary evaluate_summary(const ExperimentConfig& cfg, const EvalResult& eval, const BaselineSeries& oracle,
                            const std::string& run_id, std::uint64_t seed);

/// Points where the FSO and RF rates cross within [lo, hi], ascending.
std::vector<double> crossover_points(const ChannelParams& params, double lo_m, double hi_m, int grid = 4000);

/// Training curve, checkpoint, greedy evaluation and summary of one run.
std::vector<std::filesystem::path> write_run_files(const ExperimentConfig& cfg, const RunOutcome& run,
                                                   const std::filesystem::path& out);

// Subcommands. Each writes its CSVs (and checkpoints) under `out` and
// returns the paths written.
std::vector<std::filesystem::path> cmd_train(const ExperimentConfig& cfg, const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_eval(const ExperimentConfig& cfg, const std::filesystem::path& checkpoint,
                                            const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_baseline(const ExperimentConfig& cfg, const std::vector<std::string>& schemes,
                                                const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_sweep(const ExperimentConfig& cfg, const std::vector<Objective>& objectives,
                                             const std::filesystem::path& out);
std::vector<std::filesystem::path> cmd_crossover(const ExperimentConfig& cfg, const std::filesystem::path& out);

}  // namespace ntn
