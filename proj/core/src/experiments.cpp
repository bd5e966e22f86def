#include "ntn/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

#include <fmt/core.h>

#include "ntn/checkpoint.hpp"

namespace ntn {

namespace fs = std::filesystem;

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NTN_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) n = v;
  }
  return std::max(1, n);
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  const auto count = static_cast<std::size_t>(std::max(1, workers));
  if (count == 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(count, n); ++w) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(n);
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

RunSummary evaluate_summary(const ExperimentConfig& cfg, const EvalResult& eval, const BaselineSeries& oracle,
                            const std::string& run_id, std::uint64_t seed) {
  RunSummary s = summarize(table_from_eval(eval, run_id), eval.summary.total_energy_j, cfg.scenario.dt_s);
  s.seed = seed;
  s.oracle_mean_bps = oracle.mean_bps();
  return s;
}

RunOutcome train_and_evaluate(const ExperimentConfig& cfg, const RewardWeights& weights, std::uint64_t seed,
                              const std::string& run_id) {
  TrainConfig tc = cfg.train;
  tc.seed = seed;
  RunOutcome out;
  out.seed = seed;
  out.train = train(cfg.scenario, weights, tc);
  out.eval = evaluate_greedy(cfg.scenario, weights, out.train.learners.actors);
  out.oracle = frozen_uav_oracle(cfg.scenario, out.eval.uavs_before);
  out.summary = evaluate_summary(cfg, out.eval, out.oracle, run_id, seed);
  return out;
}

std::vector<double> crossover_points(const ChannelParams& params, double lo_m, double hi_m, int grid) {
  if (!(lo_m > 0.0) || !(hi_m > lo_m) || grid < 2) throw std::invalid_argument("bad crossover search range");
  std::vector<double> out;
  const double ratio = std::log(hi_m / lo_m);
  auto diff = [&](double d) { return fso_rate(d, params) - rf_rate(d, params); };
  double prev_d = lo_m;
  double prev = diff(lo_m);
  for (int k = 1; k <= grid; ++k) {
    const double d = lo_m * std::exp(ratio * k / grid);
    const double cur = diff(d);
    if ((prev < 0.0) != (cur < 0.0)) out.push_back(crossover_distance(params, prev_d, d));
    prev_d = d;
    prev = cur;
  }
  return out;
}

namespace {

fs::path prepare(const fs::path& out) {
  fs::create_directories(out);
  return out;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  return os;
}

}  // namespace

std::vector<fs::path> write_run_files(const ExperimentConfig& cfg, const RunOutcome& r, const fs::path& out) {
  prepare(out);
  const std::uint64_t hash = config_hash(cfg);
  const std::uint64_t seed = r.seed;
  std::vector<fs::path> files;
  const fs::path curve = out / fmt::format("train_curve_seed{}.csv", seed);
  {
    auto os = open_out(curve);
    write_curve_csv(os, r.train.curve, CsvHeader{"train_curve", hash, seed});
  }
  files.push_back(curve);
  const fs::path ckpt = out / fmt::format("policy_seed{}.ckpt", seed);
  save_checkpoint(ckpt, r.train.learners, CheckpointMeta{seed, hash});
  files.push_back(ckpt);
  const fs::path eval = out / fmt::format("eval_seed{}.csv", seed);
  {
    auto os = open_out(eval);
    write_slot_csv(os, table_from_eval(r.eval, r.summary.run_id), CsvHeader{"eval", hash, seed});
  }
  files.push_back(eval);
  const fs::path summary = out / fmt::format("eval_summary_seed{}.csv", seed);
  {
    auto os = open_out(summary);
    write_summary_csv(os, std::span<const RunSummary>(&r.summary, 1), CsvHeader{"eval_summary", hash, seed});
  }
  files.push_back(summary);
  return files;
}

std::vector<fs::path> cmd_train(const ExperimentConfig& cfg, const fs::path& out) {
  return write_run_files(cfg, train_and_evaluate(cfg, reward_weights(cfg), cfg.train.seed, "marl"), out);
}

std::vector<fs::path> cmd_eval(const ExperimentConfig& cfg, const fs::path& checkpoint, const fs::path& out) {
  prepare(out);
  const RewardWeights w = reward_weights(cfg);
  const std::uint64_t hash = config_hash(cfg);
  const Environment env(cfg.scenario, w);
  const LoadedCheckpoint ck = load_checkpoint(checkpoint, env.observation_size(), env.heads(), env.agents());
  const EvalResult e = evaluate_greedy(cfg.scenario, w, ck.learners.actors);
  const BaselineSeries oracle = frozen_uav_oracle(cfg.scenario, e.uavs_before);
  const RunSummary s = evaluate_summary(cfg, e, oracle, "marl", ck.meta.seed);
  std::vector<fs::path> files;
  const fs::path eval = out / fmt::format("eval_seed{}.csv", ck.meta.seed);
  {
    auto os = open_out(eval);
    write_slot_csv(os, table_from_eval(e, "marl"), CsvHeader{"eval", hash, ck.meta.seed});
  }
  files.push_back(eval);
  const fs::path summary = out / fmt::format("eval_summary_seed{}.csv", ck.meta.seed);
  {
    auto os = open_out(summary);
    write_summary_csv(os, std::span<const RunSummary>(&s, 1), CsvHeader{"eval_summary", hash, ck.meta.seed});
  }
  files.push_back(summary);
  return files;
}

std::vector<fs::path> cmd_baseline(const ExperimentConfig& cfg, const std::vector<std::string>& schemes,
                                   const fs::path& out) {
  prepare(out);
  const std::uint64_t hash = config_hash(cfg);
  const Scenario& s = cfg.scenario;
  const std::vector<Vec3> ground = ground_relay_positions(s);
  std::vector<std::pair<BaselineSeries, std::vector<Vec3>>> runs;
  for (const std::string& name : schemes) {
    if (name == "direct") {
      runs.emplace_back(run_direct(s), std::vector<Vec3>{});
    } else if (name == "sat_only_1" || name == "sat_only_2" || name == "sat_only_3") {
      runs.emplace_back(run_sat_only(s, name.back() - '0'), std::vector<Vec3>{});
    } else if (name == "sat_ground") {
      runs.emplace_back(run_sat_ground(s, Cooperation::cooperative), ground);
      runs.emplace_back(run_sat_ground(s, Cooperation::non_cooperative), ground);
    } else {
      throw std::invalid_argument(fmt::format("unknown baseline scheme '{}'", name));
    }
  }
  std::vector<fs::path> files;
  std::vector<RunSummary> summaries;
  for (const auto& [series, relays] : runs) {
    const RunTable table = table_from_baseline(series, relays);
    const fs::path path = out / fmt::format("baseline_{}.csv", series.name);
    {
      auto os = open_out(path);
      write_slot_csv(os, table, CsvHeader{"baseline", hash, cfg.train.seed});
    }
    files.push_back(path);
    RunSummary sum = summarize(table, 0.0, s.dt_s);
    sum.seed = cfg.train.seed;
    summaries.push_back(sum);
  }
  const fs::path path = out / "baseline_summary.csv";
  {
    auto os = open_out(path);
    write_summary_csv(os, summaries, CsvHeader{"baseline_summary", hash, cfg.train.seed});
  }
  files.push_back(path);
  return files;
}

std::vector<fs::path> cmd_sweep(const ExperimentConfig& cfg, const std::vector<Objective>& objectives,
                                const fs::path& out) {
  prepare(out);
  struct Job {
    ExperimentConfig cfg;
    RewardWeights weights;
    std::uint64_t seed;
    std::string run_id;
  };
  std::vector<Job> jobs;
  for (Objective o : objectives) {
    ExperimentConfig c = cfg;
    c.objective = o;
    const RewardWeights w = reward_weights(c);
    for (std::uint64_t seed : cfg.seeds) jobs.push_back(Job{c, w, seed, to_string(o)});
  }
  std::vector<RunOutcome> results(jobs.size());
  parallel_for(jobs.size(), worker_count(), [&](std::size_t i) {
    results[i] = train_and_evaluate(jobs[i].cfg, jobs[i].weights, jobs[i].seed, jobs[i].run_id);
  });

  std::vector<fs::path> files;
  std::vector<RunSummary> summaries;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const std::uint64_t hash = config_hash(jobs[i].cfg);
    const fs::path path = out / fmt::format("sweep_{}_seed{}.csv", jobs[i].run_id, jobs[i].seed);
    {
      auto os = open_out(path);
      write_slot_csv(os, table_from_eval(results[i].eval, jobs[i].run_id), CsvHeader{"sweep_eval", hash, jobs[i].seed});
    }
    files.push_back(path);
    summaries.push_back(results[i].summary);
  }
  const fs::path path = out / "sweep_summary.csv";
  {
    auto os = open_out(path);
    write_summary_csv(os, summaries, CsvHeader{"sweep_summary", config_hash(cfg), cfg.train.seed});
  }
  files.push_back(path);
  return files;
}

std::vector<fs::path> cmd_crossover(const ExperimentConfig& cfg, const fs::path& out) {
  prepare(out);
  const ChannelParams& ch = cfg.scenario.channel;
  const std::uint64_t hash = config_hash(cfg);
  const fs::path path = out / "crossover.csv";
  auto os = open_out(path);
  write_header(os, CsvHeader{"crossover", hash, cfg.train.seed});
  const std::vector<double> points = crossover_points(ch, 1.0, km(6000.0));
  std::string list;
  for (double p : points) list += (list.empty() ? "" : ";") + format_number(p / kMetersPerKm);
  os << "# crossover_km=" << (list.empty() ? "none" : list) << '\n';
  os << "distance_km,rf_bps,fso_bps,hybrid_bps,link\n";
  for (int k = 0; k <= 600; ++k) {
    const double d = km(10.0 * k > 0 ? 10.0 * k : 1.0);
    const HybridRate h = hybrid_rate(d, ch);
    os << format_number(d / kMetersPerKm) << ',' << format_number(rf_rate(d, ch)) << ','
       << format_number(fso_rate(d, ch)) << ',' << format_number(h.rate_bps) << ',' << to_string(h.link) << '\n';
  }
  return {path};
}

}  // namespace ntn
