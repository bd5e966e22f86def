#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ntn/a2c.hpp"
#include "ntn/baselines.hpp"
#include "ntn/channel.hpp"
#include "ntn/mlp.hpp"
#include "ntn/network.hpp"

using namespace ntn;

static void BM_HybridRate(benchmark::State& state) {
  const ChannelParams params;
  double d = 1e3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hybrid_rate(d, params));
    d = d < 3e6 ? d * 1.01 : 1e3;
  }
}
BENCHMARK(BM_HybridRate);

static void BM_SlotSearch(benchmark::State& state) {
  const Scenario s = default_scenario();
  long n = 0;
  for (auto _ : state) {
    const SlotLinkTable table(slot_geometry(s, n, s.uav_initial_positions), s.channel);
    benchmark::DoNotOptimize(best_joint_association(table));
    n = (n + 1) % s.slots;
  }
}
BENCHMARK(BM_SlotSearch);

static void BM_EnvEpisode(benchmark::State& state) {
  Scenario s = default_scenario();
  s.slots = 100;
  const RewardWeights w = derive_reward_weights(s, RewardMode::best_effort, Objective::ee_max);
  Environment env(s, w);
  const std::vector<AgentAction> idle(2, AgentAction{0, 0, 5, 5});
  for (auto _ : state) {
    env.reset();
    while (!env.done()) benchmark::DoNotOptimize(env.step(idle));
  }
}
BENCHMARK(BM_EnvEpisode)->Unit(benchmark::kMillisecond);

static void BM_MlpForwardBackward(benchmark::State& state) {
  const int hidden = static_cast<int>(state.range(0));
  Mlp net({116, hidden, hidden, 1});
  std::mt19937_64 rng(1);
  net.init_uniform(rng);
  std::vector<double> x(116, 0.3);
  std::vector<double> grad(net.parameter_count(), 0.0);
  const double dy = 1.0;
  Mlp::Cache cache;
  for (auto _ : state) {
    net.forward(x, cache);
    net.backward(cache, std::span<const double>(&dy, 1), grad);
  }
  benchmark::DoNotOptimize(grad.data());
}
BENCHMARK(BM_MlpForwardBackward)->Arg(32)->Arg(128);

BENCHMARK_MAIN();
