#include "ntn/a2c.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace ntn {

namespace {

std::array<int, 4> head_sizes(const ActionHeads& h) { return {h.lane1, h.lane2, h.accel_x, h.accel_y}; }

std::array<int, 4> head_indices(const AgentAction& a) { return {a.lane1, a.lane2, a.accel_x, a.accel_y}; }

AgentAction from_indices(const std::array<int, 4>& idx) { return AgentAction{idx[0], idx[1], idx[2], idx[3]}; }

}  // namespace

void softmax_heads(std::span<double> logits, const ActionHeads& heads) {
  if (logits.size() != static_cast<std::size_t>(heads.total())) throw std::invalid_argument("logit size mismatch");
  std::size_t off = 0;
  for (int n : head_sizes(heads)) {
    const auto sz = static_cast<std::size_t>(n);
    auto head = logits.subspan(off, sz);
    const double m = *std::max_element(head.begin(), head.end());
    double sum = 0.0;
    for (double& v : head) {
      v = std::exp(v - m);
      sum += v;
    }
    for (double& v : head) v /= sum;
    off += sz;
  }
}

std::vector<double> one_hot(const AgentAction& action, const ActionHeads& heads) {
  std::vector<double> out(static_cast<std::size_t>(heads.total()), 0.0);
  const auto sizes = head_sizes(heads);
  const auto idx = head_indices(action);
  std::size_t off = 0;
  for (std::size_t h = 0; h < 4; ++h) {
    if (idx[h] < 0 || idx[h] >= sizes[h]) throw std::out_of_range(fmt::format("action head {} index {} out of range", h, idx[h]));
    out[off + static_cast<std::size_t>(idx[h])] = 1.0;
    off += static_cast<std::size_t>(sizes[h]);
  }
  return out;
}

Actor::Actor(std::size_t observation_size, ActionHeads heads, int hidden, std::mt19937_64& rng)
    : heads_(heads), net_({static_cast<int>(observation_size), hidden, hidden, heads.total()}) {
  net_.init_uniform(rng);
}

Actor::Actor(Mlp network, ActionHeads heads) : heads_(heads), net_(std::move(network)) {
  if (net_.output_size() != static_cast<std::size_t>(heads.total())) {
    throw std::invalid_argument(fmt::format("actor network has {} outputs, heads need {}", net_.output_size(), heads.total()));
  }
}

std::vector<double> Actor::probabilities(std::span<const double> observation) const {
  std::vector<double> p = net_.forward(observation);
  softmax_heads(p, heads_);
  return p;
}

AgentAction Actor::sample(std::span<const double> observation, std::mt19937_64& rng) const {
  const std::vector<double> p = probabilities(observation);
  std::array<int, 4> idx{};
  std::size_t off = 0;
  const auto sizes = head_sizes(heads_);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t h = 0; h < 4; ++h) {
    const double u = unit(rng);
    double c = 0.0;
    int pick = sizes[h] - 1;
    for (int k = 0; k < sizes[h]; ++k) {
      c += p[off + static_cast<std::size_t>(k)];
      if (u < c) {
        pick = k;
        break;
      }
    }
    idx[h] = pick;
    off += static_cast<std::size_t>(sizes[h]);
  }
  return from_indices(idx);
}

AgentAction Actor::greedy(std::span<const double> observation) const {
  const std::vector<double> logits = net_.forward(observation);
  std::array<int, 4> idx{};
  std::size_t off = 0;
  const auto sizes = head_sizes(heads_);
  for (std::size_t h = 0; h < 4; ++h) {
    const auto first = logits.begin() + static_cast<std::ptrdiff_t>(off);
    idx[h] = static_cast<int>(std::max_element(first, first + sizes[h]) - first);
    off += static_cast<std::size_t>(sizes[h]);
  }
  return from_indices(idx);
}

double Actor::log_prob(std::span<const double> observation, const AgentAction& action) const {
  const std::vector<double> p = probabilities(observation);
  const auto sizes = head_sizes(heads_);
  const auto idx = head_indices(action);
  double lp = 0.0;
  std::size_t off = 0;
  for (std::size_t h = 0; h < 4; ++h) {
    lp += std::log(p[off + static_cast<std::size_t>(idx[h])]);
    off += static_cast<std::size_t>(sizes[h]);
  }
  return lp;
}

double Actor::accumulate_gradient(std::span<const double> observation, const AgentAction& action, double kappa,
                                  double entropy_coef, std::span<double> grad) const {
  return accumulate_gradient(observation, action, std::array<double, 4>{kappa, kappa, kappa, kappa}, entropy_coef,
                             grad);
}

double Actor::accumulate_gradient(std::span<const double> observation, const AgentAction& action,
                                  const std::array<double, 4>& kappas, double entropy_coef,
                                  std::span<double> grad) const {
  Mlp::Cache cache;
  const auto logits = net_.forward(observation, cache);
  std::vector<double> p(logits.begin(), logits.end());
  softmax_heads(p, heads_);
  const auto sizes = head_sizes(heads_);
  const auto idx = head_indices(action);
  std::vector<double> g(p.size(), 0.0);
  double loss = 0.0;
  std::size_t off = 0;
  for (std::size_t h = 0; h < 4; ++h) {
    const auto n = static_cast<std::size_t>(sizes[h]);
    const auto taken = off + static_cast<std::size_t>(idx[h]);
    const double kappa = kappas[h];
    loss -= kappa * std::log(p[taken]);
    // d(-log p_a)/dz_i = p_i - [i == a]
    for (std::size_t k = off; k < off + n; ++k) g[k] = kappa * p[k];
    g[taken] -= kappa;
    if (entropy_coef != 0.0) {
      double entropy = 0.0;
      for (std::size_t k = off; k < off + n; ++k) {
        if (p[k] > 0.0) entropy -= p[k] * std::log(p[k]);
      }
      loss -= entropy_coef * entropy;
      // dH/dz_i = -p_i (log p_i + H)
      for (std::size_t k = off; k < off + n; ++k) {
        const double lp = p[k] > 0.0 ? std::log(p[k]) : 0.0;
        g[k] += entropy_coef * p[k] * (lp + entropy);
      }
    }
    off += n;
  }
  net_.backward(cache, g, grad);
  return loss;
}

std::vector<double> joint_input(std::span<const std::vector<double>> observations,
                                std::span<const std::vector<double>> action_encodings) {
  if (observations.size() != action_encodings.size()) {
    throw std::invalid_argument(fmt::format("{} observations but {} action encodings", observations.size(),
                                            action_encodings.size()));
  }
  std::vector<double> in;
  for (std::size_t j = 0; j < observations.size(); ++j) {
    in.insert(in.end(), observations[j].begin(), observations[j].end());
    in.insert(in.end(), action_encodings[j].begin(), action_encodings[j].end());
  }
  return in;
}

CentralCritic::CentralCritic(std::size_t observation_size, ActionHeads heads, int agents, int hidden,
                             std::mt19937_64& rng)
    : heads_(heads),
      agents_(agents),
      net_({agents * (static_cast<int>(observation_size) + heads.total()), hidden, hidden, 1}) {
  if (agents < 1) throw std::invalid_argument("critic needs at least one agent");
  net_.init_uniform(rng);
}

CentralCritic::CentralCritic(Mlp network, ActionHeads heads, int agents)
    : heads_(heads), agents_(agents), net_(std::move(network)) {
  if (agents < 1 || net_.output_size() != 1 || net_.input_size() % static_cast<std::size_t>(agents) != 0) {
    throw std::invalid_argument("critic network shape does not match the agent count");
  }
}

double CentralCritic::value(std::span<const double> input) const { return net_.forward(input)[0]; }

double CentralCritic::evaluate(std::span<const std::vector<double>> observations,
                               std::span<const AgentAction> actions) const {
  if (static_cast<int>(observations.size()) != agents_ || static_cast<int>(actions.size()) != agents_) {
    throw std::invalid_argument(fmt::format("critic expects {} agents", agents_));
  }
  std::vector<std::vector<double>> enc;
  enc.reserve(actions.size());
  for (const AgentAction& a : actions) enc.push_back(one_hot(a, heads_));
  return value(joint_input(observations, enc));
}

double CentralCritic::accumulate_gradient(std::span<const double> input, double target, std::span<double> grad) const {
  Mlp::Cache cache;
  const double v = net_.forward(input, cache)[0];
  const double kappa = target - v;
  const double dv = -2.0 * kappa;
  net_.backward(cache, std::span<const double>(&dv, 1), grad);
  return kappa * kappa;
}

CriticLoss critic_loss(double reward, double value, double next_value, bool terminal, double gamma) {
  CriticLoss out;
  out.kappa = reward + (terminal ? 0.0 : gamma * next_value) - value;
  out.loss = out.kappa * out.kappa;
  out.value_grad = -2.0 * out.kappa;
  return out;
}

}  // namespace ntn
