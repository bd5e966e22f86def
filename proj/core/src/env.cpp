#include "ntn/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace ntn {

const char* to_string(RewardMode mode) { return mode == RewardMode::fairness ? "fairness" : "best_effort"; }

const char* to_string(Objective objective) {
  switch (objective) {
    case Objective::rate_max:
      return "rate_max";
    case Objective::energy_min:
      return "energy_min";
    case Objective::ee_max:
      break;
  }
  return "ee_max";
}

RewardMode parse_reward_mode(std::string_view text) {
  if (text == "best_effort") return RewardMode::best_effort;
  if (text == "fairness") return RewardMode::fairness;
  throw std::invalid_argument(fmt::format("unknown reward mode '{}'", text));
}

Objective parse_objective(std::string_view text) {
  if (text == "ee_max") return Objective::ee_max;
  if (text == "rate_max") return Objective::rate_max;
  if (text == "energy_min") return Objective::energy_min;
  throw std::invalid_argument(fmt::format("unknown objective '{}'", text));
}

void validate_reward_weights(const RewardWeights& w) {
  if (!(w.sigma_r > 0.0) || !(w.sigma_e > 0.0) || !(w.sigma_d_m > 0.0)) {
    throw std::invalid_argument("reward normalizers sigma_R, sigma_E, sigma_D must be positive");
  }
  if (!(w.d_max_m > 0.0)) throw std::invalid_argument("d_max must be positive");
  if (!std::isfinite(w.mu_r) || !std::isfinite(w.mu_e)) throw std::invalid_argument("reward means must be finite");
}

namespace {

double distance_penalty(double d, const RewardWeights& w) { return std::max(0.0, normalize(d, w.d_max_m, w.sigma_d_m)); }

double energy_term(double sum_energy_j, const RewardWeights& w) {
  return w.objective == Objective::rate_max ? 0.0 : normalize(sum_energy_j, w.mu_e, w.sigma_e);
}

}  // namespace

double reward_best_effort(double sum_rate_bps, double sum_energy_j, double pair_distance_sum_m, const RewardWeights& w) {
  double r = 0.0;
  if (w.objective != Objective::energy_min) r += normalize(sum_rate_bps, w.mu_r, w.sigma_r);
  r -= energy_term(sum_energy_j, w);
  r -= distance_penalty(pair_distance_sum_m, w);
  return r;
}

double reward_fairness(std::span<const double> path_rates_bps, std::span<const double> energies_j,
                       double pair_distance_m, const RewardWeights& w) {
  if (path_rates_bps.size() != 2) {
    throw std::invalid_argument(fmt::format("fairness reward is defined for two paths, got {}", path_rates_bps.size()));
  }
  double energy = 0.0;
  for (double e : energies_j) energy += e;
  double r = 0.0;
  if (w.objective != Objective::energy_min) {
    const double x = normalize(path_rates_bps[0] + path_rates_bps[1], w.mu_r, w.sigma_r);
    r += 1.0 / (1.0 + std::exp(-x));
  }
  r -= energy_term(energy, w);
  r -= distance_penalty(pair_distance_m, w);
  return r;
}

double accel_level(int index, int levels_d, double max_accel) {
  if (index < 0 || index > 2 * levels_d) {
    throw std::out_of_range(fmt::format("acceleration index {} outside 0..{}", index, 2 * levels_d));
  }
  return static_cast<double>(index - levels_d) * max_accel / levels_d;
}

DecodedAction decode_action(const AgentAction& action, int lane1_size, int lane2_size, int levels_d, double max_accel) {
  if (action.lane1 < 0 || action.lane1 >= lane1_size || action.lane2 < 0 || action.lane2 >= lane2_size) {
    throw std::out_of_range(fmt::format("association action ({}, {}) outside {}x{}", action.lane1, action.lane2,
                                        lane1_size, lane2_size));
  }
  DecodedAction out;
  out.assoc = Association{action.lane1, action.lane2};
  out.accel = Vec3{accel_level(action.accel_x, levels_d, max_accel), accel_level(action.accel_y, levels_d, max_accel), 0.0};
  const double a = norm(out.accel);
  if (a > max_accel) out.accel *= max_accel / a;
  return out;
}

ActionHeads action_heads(const Scenario& s) {
  const int grid = 2 * s.accel_levels + 1;
  return ActionHeads{s.lane1.visible_count, s.lane2.visible_count, grid, grid};
}

std::size_t observation_size(const Scenario& s) {
  return static_cast<std::size_t>(3 * (s.lane1.visible_count + s.lane2.visible_count) + 3 + 3 + kHops + 1 + 1);
}

double squash_feature(double x) {
  const double a = std::abs(x);
  if (a <= 1.0) return x;
  return std::copysign(1.0 + std::log(a), x);
}

double pair_distance_sum(std::span<const UavState> uavs) {
  double total = 0.0;
  for (std::size_t a = 0; a < uavs.size(); ++a)
    for (std::size_t b = a + 1; b < uavs.size(); ++b) total += distance(uavs[a].position, uavs[b].position);
  return total;
}

Environment::Environment(Scenario scenario, RewardWeights weights)
    : scenario_(std::move(scenario)),
      weights_(weights),
      heads_(action_heads(scenario_)),
      obs_size_(ntn::observation_size(scenario_)) {
  validate_scenario(scenario_);
  validate_reward_weights(weights_);
  if (weights_.mode == RewardMode::fairness && scenario_.agents() != 2) {
    throw std::invalid_argument("fairness reward requires exactly two UAVs");
  }
  reset();
}

void Environment::reset() {
  const int j = agents();
  uavs_.clear();
  for (int i = 0; i < j; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    uavs_.push_back(UavState{scenario_.uav_initial_positions[ui], scenario_.uav_initial_velocities[ui], i});
  }
  slot_ = 0;
  last_assoc_.assign(static_cast<std::size_t>(j), Association{});
  last_energy_.assign(static_cast<std::size_t>(j), 0.0);
  acc_ = EpisodeAccumulator{};
  power_sum_w_ = 0.0;
}

std::vector<double> Environment::observe(int agent) const {
  if (agent < 0 || agent >= agents()) throw std::out_of_range("agent index out of range");
  const auto ai = static_cast<std::size_t>(agent);
  const long slot = std::min<long>(slot_, scenario_.slots);
  std::vector<double> obs;
  obs.reserve(obs_size_);
  const auto lane1 = visible_sats(scenario_.lane1, 1, slot, scenario_.dt_s);
  const auto lane2 = visible_sats(scenario_.lane2, 2, slot, scenario_.dt_s);
  auto push_position = [&](const Vec3& p) {
    obs.push_back(p.x / kObsPositionScale);
    obs.push_back(p.y / kObsPositionScale);
    obs.push_back(p.z / kObsPositionScale);
  };
  for (const SatSnapshot& s : lane1) push_position(s.position);
  for (const SatSnapshot& s : lane2) push_position(s.position);
  const UavState& u = uavs_[ai];
  push_position(u.position);
  obs.push_back(u.velocity.x / kObsVelocityScale);
  obs.push_back(u.velocity.y / kObsVelocityScale);
  obs.push_back(u.velocity.z / kObsVelocityScale);
  const Association& a = last_assoc_[ai];
  const HopArray d = link_distances(scenario_.src, scenario_.dst, lane1[static_cast<std::size_t>(a.lane1)].position,
                                    lane2[static_cast<std::size_t>(a.lane2)].position, u.position);
  for (double v : d) obs.push_back(v / kObsDistanceScale);
  obs.push_back(last_energy_[ai] / (weights_.mu_e > 0.0 ? weights_.mu_e : weights_.sigma_e));
  obs.push_back(static_cast<double>(slot) / scenario_.slots);
  for (double& v : obs) v = squash_feature(v);
  return obs;
}

StepResult Environment::step(std::span<const AgentAction> actions) {
  if (done()) throw std::logic_error("episode is over; call reset()");
  const int j = agents();
  if (static_cast<int>(actions.size()) != j) {
    throw std::invalid_argument(fmt::format("joint action has {} entries for {} agents", actions.size(), j));
  }
  StepResult out;
  out.assoc.reserve(actions.size());
  out.accel.reserve(actions.size());
  for (const AgentAction& act : actions) {
    const DecodedAction d =
        decode_action(act, heads_.lane1, heads_.lane2, scenario_.accel_levels, scenario_.max_accel);
    out.assoc.push_back(d.assoc);
    out.accel.push_back(d.accel);
  }

  std::vector<Vec3> relays;
  relays.reserve(uavs_.size());
  for (const UavState& u : uavs_) relays.push_back(u.position);
  const SlotLinkTable table(slot_geometry(scenario_, slot_, relays), scenario_.channel);
  out.paths = table.evaluate(out.assoc);

  out.power_w.resize(uavs_.size());
  out.energy_j.resize(uavs_.size());
  for (std::size_t i = 0; i < uavs_.size(); ++i) {
    out.power_w[i] = uav_power(uavs_[i].velocity, out.accel[i], scenario_.power);
    out.energy_j[i] = slot_energy(out.power_w[i], scenario_.dt_s);
    power_sum_w_ += out.power_w[i];
  }
  out.metrics = system_step_metrics(out.paths, out.energy_j, 1.0 / weights_.sigma_r, 1.0 / weights_.sigma_e);

  const double pair_d = pair_distance_sum(uavs_);
  if (weights_.mode == RewardMode::fairness) {
    const double rates[2] = {out.paths[0].e2e_bps, out.paths[1].e2e_bps};
    out.reward = reward_fairness(rates, out.energy_j, pair_d, weights_);
  } else {
    out.reward = reward_best_effort(out.metrics.sum_throughput_bps, out.metrics.sum_energy_j, pair_d, weights_);
  }

  for (std::size_t i = 0; i < uavs_.size(); ++i) {
    uavs_[i] = step_uav(uavs_[i], out.accel[i], scenario_.dt_s, scenario_.max_accel);
  }
  acc_.add_slot(out.metrics, scenario_.dt_s);
  last_assoc_ = out.assoc;
  last_energy_ = out.energy_j;
  ++slot_;

  if (done()) {
    for (std::size_t i = 0; i < uavs_.size(); ++i) {
      acc_.add_energy(episode_kinetic_correction(scenario_.uav_initial_velocities[i], uavs_[i].velocity,
                                                 scenario_.power.mass_kg));
    }
  }
  out.done = done();
  out.observations.reserve(uavs_.size());
  for (int a = 0; a < j; ++a) out.observations.push_back(observe(a));
  return out;
}

EpisodeSummary Environment::summary() const {
  EpisodeSummary s;
  s.total_bits = acc_.bits();
  s.total_energy_j = acc_.energy_j();
  if (acc_.slots() > 0) {
    s.mean_sum_throughput_bps = acc_.bits() / (acc_.slots() * scenario_.dt_s);
    s.mean_power_w = power_sum_w_ / (static_cast<double>(acc_.slots()) * agents());
  }
  s.energy_efficiency = acc_.energy_efficiency();
  return s;
}

}  // namespace ntn
