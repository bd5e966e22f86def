#pragma once

#include <array>
#include <random>
#include <span>
#include <vector>

#include "ntn/env.hpp"
#include "ntn/mlp.hpp"

namespace ntn {

inline constexpr int kDefaultHidden = 128;

/// In-place softmax over each head's slice of `logits`.
void softmax_heads(std::span<double> logits, const ActionHeads& heads);

/// One-hot encoding of an action, laid out head by head.
std::vector<double> one_hot(const AgentAction& action, const ActionHeads& heads);

/// Per-agent policy: one MLP whose output is the four concatenated heads.
class Actor {
 public:
  Actor() = default;
  Actor(std::size_t observation_size, ActionHeads heads, int hidden, std::mt19937_64& rng);
  /// Wraps an existing network; throws if its output does not match the heads.
  Actor(Mlp network, ActionHeads heads);

  const ActionHeads& heads() const { return heads_; }
  Mlp& network() { return net_; }
  const Mlp& network() const { return net_; }

  /// Concatenated head probabilities.
  std::vector<double> probabilities(std::span<const double> observation) const;

  AgentAction sample(std::span<const double> observation, std::mt19937_64& rng) const;
  AgentAction greedy(std::span<const double> observation) const;

  /// Sum of the per-head log-probabilities of `action`.
  double log_prob(std::span<const double> observation, const AgentAction& action) const;

  /// Adds the gradient of -kappa*log pi(a|s) - entropy_coef*H(pi(.|s)) to
  /// `grad` and returns that loss value.
  double accumulate_gradient(std::span<const double> observation, const AgentAction& action, double kappa,
                             double entropy_coef, std::span<double> grad) const;
  /// Same with one kappa per head.
  double accumulate_gradient(std::span<const double> observation, const AgentAction& action,
                             const std::array<double, 4>& kappa, double entropy_coef, std::span<double> grad) const;

 private:
  ActionHeads heads_{};
  Mlp net_;
};

/// Critic input: per agent, the observation followed by its action
/// encoding (a one-hot, or any probability vector of the same layout).
std::vector<double> joint_input(std::span<const std::vector<double>> observations,
                                std::span<const std::vector<double>> action_encodings);

/// Centralized value network over all agents' observations and actions.
class CentralCritic {
 public:
  CentralCritic() = default;
  CentralCritic(std::size_t observation_size, ActionHeads heads, int agents, int hidden, std::mt19937_64& rng);
  CentralCritic(Mlp network, ActionHeads heads, int agents);

  std::size_t input_size() const { return net_.input_size(); }
  int agents() const { return agents_; }
  Mlp& network() { return net_; }
  const Mlp& network() const { return net_; }

  double value(std::span<const double> input) const;
  double evaluate(std::span<const std::vector<double>> observations, std::span<const AgentAction> actions) const;

  /// Adds the gradient of (target - V(input))^2 with the target held
  /// fixed and returns the loss.
  double accumulate_gradient(std::span<const double> input, double target, std::span<double> grad) const;

 private:
  ActionHeads heads_{};
  int agents_ = 0;
  Mlp net_;
};

struct CriticLoss {
  double kappa = 0.0;
  double loss = 0.0;
  double value_grad = 0.0;  // d(loss)/dV(s)
};

/// kappa = r + gamma*(1-terminal)*V(s') - V(s); loss = kappa^2.
CriticLoss critic_loss(double reward, double value, double next_value, bool terminal, double gamma);

}  // namespace ntn
