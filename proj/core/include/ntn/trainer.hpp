#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "ntn/a2c.hpp"
#include "ntn/env.hpp"
#include "ntn/rmsprop.hpp"

namespace ntn {

/// Which advantage the actors receive.
///   td:              kappa = r + gamma*Q(s',a') - Q(s,a), the critic's TD error.
///   policy_baseline: r + gamma*Q(s',a') - Q(s, a_-j, pi_j(s)); agent j's one-hot
///                    replaced by its own action probabilities.
///   counterfactual:  per head h of agent j, Q(s,a) - sum_k pi_h(k) Q(s, a with
///                    that head set to k); the other heads and agents stay fixed.
enum class AdvantageMode { td, policy_baseline, counterfactual };

const char* to_string(AdvantageMode mode);
AdvantageMode parse_advantage_mode(std::string_view text);

struct TrainConfig {
  int episodes = 50000;
  std::uint64_t seed = 1;
  double gamma = 0.99;
  double actor_lr = 1e-4;
  double critic_lr = 1e-4;
  double rms_decay = 0.99;
  double rms_epsilon = 1e-8;
  int batch_size = 1072;     // transitions collected per update
  int minibatch_size = 1;    // transitions per critic step within an update
  int actor_minibatch_size = 0;  // transitions per actor step; 0 for the whole batch
  int hidden = kDefaultHidden;
  double entropy_coef = 0.0;
  AdvantageMode advantage = AdvantageMode::td;
  // Critic learns returns divided by a running scale; its output layer is
  // rescaled whenever the scale changes so predictions are preserved.
  bool normalize_values = true;
  double value_scale_decay = 0.9;  // running average of the batch return scale
};

void validate_train_config(const TrainConfig& c);

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Transition {
  std::vector<std::vector<double>> obs;
  std::vector<AgentAction> actions;
  double reward = 0.0;
  bool terminal = false;
  std::vector<std::vector<double>> next_obs;
  std::vector<AgentAction> next_actions;  // empty when terminal
};

/// Networks and optimizer state of every agent plus the shared critic.
struct Learners {
  std::vector<Actor> actors;
  CentralCritic critic;
  std::vector<Rmsprop> actor_opt;
  Rmsprop critic_opt;
  double value_scale = 1.0;  // critic output unit, in reward units
  bool value_scale_set = false;  // false until the first batch sets the unit
};

/// Root mean square of the discounted reward-to-go within a batch of
/// consecutive transitions, cut at terminals and at the batch end.
double batch_return_scale(std::span<const Transition> batch, double gamma);

/// Sets the critic's output unit to `scale`, multiplying the output layer by
/// old/new so every critic prediction in reward units is unchanged.
void rescale_critic(Learners& learners, double scale);

Learners make_learners(const Environment& env, const TrainConfig& c);

/// Per-head counterfactual advantage of `agent` in critic units:
/// Q(s,a) - sum_k pi_h(k) Q(s, a with head h of `agent` set to k).
std::array<double, 4> counterfactual_advantages(const Learners& learners, const Transition& tr, std::size_t agent);

struct UpdateStats {
  double critic_loss = 0.0;  // mean kappa^2 before the critic steps
  double actor_loss = 0.0;   // mean -kappa*log pi over agents and transitions
};

/// One synchronous update from a batch: critic steps first, then kappa is
/// recomputed and every actor steps. Deterministic given (learners, batch,
/// rng state). Throws DivergenceError on non-finite parameters.
UpdateStats a2c_update(Learners& learners, std::span<const Transition> batch, const TrainConfig& c,
                       std::mt19937_64& rng);

struct EpisodeLog {
  int episode = 0;
  double cumulative_reward = 0.0;
  double mean_sum_throughput_bps = 0.0;
  double mean_power_w = 0.0;
  double energy_efficiency = 0.0;
  double critic_loss = 0.0;  // most recent update
  double actor_loss = 0.0;
  int updates = 0;
};

struct TrainResult {
  Learners learners;
  std::vector<EpisodeLog> curve;
};

using EpisodeCallback = std::function<void(const EpisodeLog&)>;

TrainResult train(const Scenario& scenario, const RewardWeights& weights, const TrainConfig& c,
                  const EpisodeCallback& on_episode = {});

struct EvalResult {
  std::vector<StepResult> steps;
  std::vector<std::vector<UavState>> uavs_before;  // relay states at the start of each slot
  std::vector<std::vector<UavState>> uavs_after;
  EpisodeSummary summary;
  double cumulative_reward = 0.0;
};

/// One episode with the argmax action of every head.
EvalResult evaluate_greedy(const Scenario& scenario, const RewardWeights& weights, std::span<const Actor> actors);

}  // namespace ntn
