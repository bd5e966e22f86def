#include "ntn/trainer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include <fmt/core.h>

namespace ntn {

const char* to_string(AdvantageMode mode) {
  switch (mode) {
    case AdvantageMode::td:
      return "td";
    case AdvantageMode::policy_baseline:
      return "policy_baseline";
    case AdvantageMode::counterfactual:
      return "counterfactual";
  }
  return "?";
}

AdvantageMode parse_advantage_mode(std::string_view text) {
  if (text == "td") return AdvantageMode::td;
  if (text == "policy_baseline") return AdvantageMode::policy_baseline;
  if (text == "counterfactual") return AdvantageMode::counterfactual;
  throw std::invalid_argument(fmt::format("unknown advantage mode '{}'", text));
}

void validate_train_config(const TrainConfig& c) {
  if (c.episodes < 1) throw std::invalid_argument("episodes must be >= 1");
  if (!(c.gamma >= 0.0 && c.gamma <= 1.0)) throw std::invalid_argument("gamma must be in [0, 1]");
  if (!(c.actor_lr > 0.0) || !(c.critic_lr > 0.0)) throw std::invalid_argument("learning rates must be positive");
  if (c.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  if (c.minibatch_size < 1) throw std::invalid_argument("minibatch_size must be >= 1");
  if (c.actor_minibatch_size < 0) throw std::invalid_argument("actor_minibatch_size must be >= 0");
  if (!(c.value_scale_decay >= 0.0 && c.value_scale_decay < 1.0)) {
    throw std::invalid_argument("value_scale_decay must be in [0, 1)");
  }
  if (c.hidden < 1) throw std::invalid_argument("hidden width must be >= 1");
  if (!(c.entropy_coef >= 0.0)) throw std::invalid_argument("entropy coefficient must be >= 0");
}

namespace {

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

std::vector<double> encode(const Learners& l, std::span<const std::vector<double>> obs,
                           std::span<const AgentAction> actions) {
  std::vector<std::vector<double>> enc;
  enc.reserve(actions.size());
  for (std::size_t j = 0; j < actions.size(); ++j) enc.push_back(one_hot(actions[j], l.actors[j].heads()));
  return joint_input(obs, enc);
}

void check_finite(std::span<const double> params, const char* what) {
  if (!all_finite(params)) throw DivergenceError(fmt::format("non-finite parameter in {} after update", what));
}

// `in` is the joint critic input of the taken actions; it is restored on return.
std::array<double, 4> head_advantages(const Learners& l, std::vector<double>& in, std::size_t offset,
                                      std::span<const double> probs, const AgentAction& action) {
  const ActionHeads& heads = l.actors.front().heads();
  const std::array<int, 4> sizes{heads.lane1, heads.lane2, heads.accel_x, heads.accel_y};
  const std::array<int, 4> taken{action.lane1, action.lane2, action.accel_x, action.accel_y};
  const double q = l.critic.value(in);
  std::array<double, 4> out{};
  std::size_t off = offset;
  std::size_t poff = 0;
  for (std::size_t h = 0; h < 4; ++h) {
    const auto n = static_cast<std::size_t>(sizes[h]);
    const std::size_t a = off + static_cast<std::size_t>(taken[h]);
    double baseline = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (off + k == a) {
        baseline += probs[poff + k] * q;
        continue;
      }
      in[a] = 0.0;
      in[off + k] = 1.0;
      baseline += probs[poff + k] * l.critic.value(in);
      in[off + k] = 0.0;
      in[a] = 1.0;
    }
    out[h] = q - baseline;
    off += n;
    poff += n;
  }
  return out;
}

}  // namespace

std::array<double, 4> counterfactual_advantages(const Learners& learners, const Transition& tr, std::size_t agent) {
  std::vector<double> in = encode(learners, tr.obs, tr.actions);
  std::size_t offset = 0;
  for (std::size_t j = 0; j < agent; ++j) offset += tr.obs[j].size() + static_cast<std::size_t>(learners.actors[j].heads().total());
  offset += tr.obs[agent].size();
  return head_advantages(learners, in, offset, learners.actors[agent].probabilities(tr.obs[agent]), tr.actions[agent]);
}

Learners make_learners(const Environment& env, const TrainConfig& c) {
  std::mt19937_64 rng = stream_rng(c.seed, 0);
  Learners l;
  for (int j = 0; j < env.agents(); ++j) {
    l.actors.emplace_back(env.observation_size(), env.heads(), c.hidden, rng);
    l.actor_opt.emplace_back(l.actors.back().network().parameter_count(),
                             RmspropConfig{c.actor_lr, c.rms_decay, c.rms_epsilon});
  }
  l.critic = CentralCritic(env.observation_size(), env.heads(), env.agents(), c.hidden, rng);
  l.critic_opt = Rmsprop(l.critic.network().parameter_count(), RmspropConfig{c.critic_lr, c.rms_decay, c.rms_epsilon});
  return l;
}

double batch_return_scale(std::span<const Transition> batch, double gamma) {
  double acc = 0.0;
  double sq = 0.0;
  for (std::size_t t = batch.size(); t-- > 0;) {
    const bool cut = batch[t].terminal || t + 1 == batch.size();
    acc = batch[t].reward + (cut ? 0.0 : gamma * acc);
    sq += acc * acc;
  }
  return batch.empty() ? 0.0 : std::sqrt(sq / static_cast<double>(batch.size()));
}

void rescale_critic(Learners& l, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("value scale must be positive and finite");
  const Mlp& net = l.critic.network();
  const auto& sizes = net.layer_sizes();
  const auto last = static_cast<std::size_t>(sizes[sizes.size() - 2]) * net.output_size() + net.output_size();
  const double ratio = l.value_scale / scale;
  auto params = l.critic.network().parameters();
  for (std::size_t k = params.size() - last; k < params.size(); ++k) params[k] *= ratio;
  l.value_scale = scale;
}

UpdateStats a2c_update(Learners& l, std::span<const Transition> batch, const TrainConfig& c, std::mt19937_64& rng) {
  UpdateStats stats;
  const std::size_t n = batch.size();
  if (n == 0) return stats;
  const std::size_t agents = l.actors.size();

  if (c.normalize_values) {
    const double scale = batch_return_scale(batch, c.gamma);
    if (scale > 0.0) {
      const double d = c.value_scale_decay;
      rescale_critic(l, l.value_scale_set ? d * l.value_scale + (1.0 - d) * scale : scale);
      l.value_scale_set = true;
    }
  }
  const double unit = l.value_scale;

  std::vector<std::vector<double>> in(n);
  std::vector<std::vector<double>> next_in(n);
  for (std::size_t t = 0; t < n; ++t) {
    const Transition& tr = batch[t];
    in[t] = encode(l, tr.obs, tr.actions);
    if (!tr.terminal) {
      if (tr.next_actions.size() != agents) throw std::invalid_argument("non-terminal transition without next actions");
      next_in[t] = encode(l, tr.next_obs, tr.next_actions);
    }
  }
  auto bootstrap = [&](std::size_t t) {
    return batch[t].terminal ? 0.0 : c.gamma * l.critic.value(next_in[t]);
  };

  // Critic: regress Q(s,a) onto targets frozen at the start of the update.
  std::vector<double> target(n);
  for (std::size_t t = 0; t < n; ++t) {
    target[t] = batch[t].reward / unit + bootstrap(t);
    const double k = target[t] - l.critic.value(in[t]);
    stats.critic_loss += k * k;
  }
  stats.critic_loss /= static_cast<double>(n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::shuffle(order.begin(), order.end(), rng);
  const auto mb = static_cast<std::size_t>(c.minibatch_size);
  std::vector<double> grad(l.critic.network().parameter_count());
  for (std::size_t start = 0; start < n; start += mb) {
    const std::size_t end = std::min(n, start + mb);
    std::fill(grad.begin(), grad.end(), 0.0);
    for (std::size_t k = start; k < end; ++k) l.critic.accumulate_gradient(in[order[k]], target[order[k]], grad);
    const double scale = 1.0 / static_cast<double>(end - start);
    for (double& g : grad) g *= scale;
    l.critic_opt.step(l.critic.network().parameters(), grad);
  }
  check_finite(l.critic.network().parameters(), "critic");

  // Advantages from the updated critic, shared with every actor.
  std::vector<std::vector<std::array<double, 4>>> kappa(agents, std::vector<std::array<double, 4>>(n));
  for (std::size_t t = 0; t < n; ++t) {
    const Transition& tr = batch[t];
    const double ahead = tr.reward / unit + bootstrap(t);
    if (c.advantage == AdvantageMode::td) {
      const double k = ahead - l.critic.value(in[t]);
      for (std::size_t j = 0; j < agents; ++j) kappa[j][t].fill(k);
    } else if (c.advantage == AdvantageMode::counterfactual) {
      std::size_t offset = 0;
      for (std::size_t j = 0; j < agents; ++j) {
        offset += tr.obs[j].size();
        kappa[j][t] = head_advantages(l, in[t], offset, l.actors[j].probabilities(tr.obs[j]), tr.actions[j]);
        offset += static_cast<std::size_t>(l.actors[j].heads().total());
      }
    } else {
      for (std::size_t j = 0; j < agents; ++j) {
        std::vector<std::vector<double>> enc;
        for (std::size_t i = 0; i < agents; ++i) {
          enc.push_back(i == j ? l.actors[i].probabilities(tr.obs[i]) : one_hot(tr.actions[i], l.actors[i].heads()));
        }
        kappa[j][t].fill(ahead - l.critic.value(joint_input(tr.obs, enc)));
      }
    }
  }

  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t amb = c.actor_minibatch_size > 0 ? static_cast<std::size_t>(c.actor_minibatch_size) : n;
  for (std::size_t j = 0; j < agents; ++j) {
    Actor& actor = l.actors[j];
    std::vector<double> agrad(actor.network().parameter_count());
    for (std::size_t start = 0; start < n; start += amb) {
      const std::size_t end = std::min(n, start + amb);
      std::fill(agrad.begin(), agrad.end(), 0.0);
      for (std::size_t k = start; k < end; ++k) {
        const std::size_t t = order[k];
        stats.actor_loss +=
            actor.accumulate_gradient(batch[t].obs[j], batch[t].actions[j], kappa[j][t], c.entropy_coef, agrad);
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      for (double& g : agrad) g *= scale;
      l.actor_opt[j].step(actor.network().parameters(), agrad);
    }
    check_finite(actor.network().parameters(), "actor");
  }
  stats.actor_loss /= static_cast<double>(n * agents);
  return stats;
}

TrainResult train(const Scenario& scenario, const RewardWeights& weights, const TrainConfig& c,
                  const EpisodeCallback& on_episode) {
  validate_train_config(c);
  Environment env(scenario, weights);
  TrainResult result;
  result.learners = make_learners(env, c);
  Learners& l = result.learners;
  std::mt19937_64 act_rng = stream_rng(c.seed, 1);
  std::mt19937_64 upd_rng = stream_rng(c.seed, 2);
  const int agents = env.agents();

  std::vector<Transition> buffer;
  buffer.reserve(static_cast<std::size_t>(c.batch_size) + 1);
  UpdateStats last;
  int updates = 0;
  auto sample_all = [&](const std::vector<std::vector<double>>& obs) {
    std::vector<AgentAction> a;
    a.reserve(obs.size());
    for (int j = 0; j < agents; ++j) a.push_back(l.actors[static_cast<std::size_t>(j)].sample(obs[static_cast<std::size_t>(j)], act_rng));
    return a;
  };
  auto maybe_update = [&](std::size_t threshold) {
    if (!buffer.empty() && buffer.size() >= threshold) {
      last = a2c_update(l, buffer, c, upd_rng);
      ++updates;
      buffer.clear();
    }
  };

  result.curve.reserve(static_cast<std::size_t>(c.episodes));
  for (int ep = 0; ep < c.episodes; ++ep) {
    env.reset();
    std::vector<std::vector<double>> obs;
    for (int j = 0; j < agents; ++j) obs.push_back(env.observe(j));
    std::vector<AgentAction> actions = sample_all(obs);
    double ret = 0.0;
    while (true) {
      if (!buffer.empty() && !buffer.back().terminal && buffer.back().next_actions.empty()) {
        buffer.back().next_actions = actions;
      }
      maybe_update(static_cast<std::size_t>(c.batch_size));
      StepResult step = env.step(actions);
      ret += step.reward;
      Transition tr;
      tr.obs = std::move(obs);
      tr.actions = actions;
      tr.reward = step.reward;
      tr.terminal = step.done;
      tr.next_obs = step.observations;
      buffer.push_back(std::move(tr));
      if (step.done) break;
      obs = std::move(step.observations);
      actions = sample_all(obs);
    }
    maybe_update(static_cast<std::size_t>(c.batch_size));
    if (ep + 1 == c.episodes) maybe_update(1);

    const EpisodeSummary s = env.summary();
    EpisodeLog log;
    log.episode = ep + 1;
    log.cumulative_reward = ret;
    log.mean_sum_throughput_bps = s.mean_sum_throughput_bps;
    log.mean_power_w = s.mean_power_w;
    log.energy_efficiency = s.energy_efficiency;
    log.critic_loss = last.critic_loss;
    log.actor_loss = last.actor_loss;
    log.updates = updates;
    result.curve.push_back(log);
    if (on_episode) on_episode(log);
  }
  return result;
}

EvalResult evaluate_greedy(const Scenario& scenario, const RewardWeights& weights, std::span<const Actor> actors) {
  Environment env(scenario, weights);
  if (static_cast<int>(actors.size()) != env.agents()) {
    throw std::invalid_argument(fmt::format("{} actors for {} agents", actors.size(), env.agents()));
  }
  for (const Actor& a : actors) {
    if (a.network().input_size() != env.observation_size() || a.network().output_size() !=
                                                                  static_cast<std::size_t>(env.heads().total())) {
      throw std::invalid_argument("actor shape does not match the scenario");
    }
  }
  EvalResult out;
  while (!env.done()) {
    std::vector<AgentAction> actions;
    for (int j = 0; j < env.agents(); ++j) actions.push_back(actors[static_cast<std::size_t>(j)].greedy(env.observe(j)));
    out.uavs_before.push_back(env.uavs());
    StepResult step = env.step(actions);
    out.cumulative_reward += step.reward;
    out.uavs_after.push_back(env.uavs());
    out.steps.push_back(std::move(step));
  }
  out.summary = env.summary();
  return out;
}

}  // namespace ntn
