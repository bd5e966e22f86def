#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "ntn/network.hpp"
#include "ntn/scenario.hpp"

namespace ntn {

enum class RewardMode { best_effort, fairness };
enum class Objective { ee_max, rate_max, energy_min };

const char* to_string(RewardMode mode);
const char* to_string(Objective objective);
RewardMode parse_reward_mode(std::string_view text);
Objective parse_objective(std::string_view text);

/// Normalizers of the per-slot reward. Throughput in bps, energy in joules
/// summed over UAVs, distance in meters.
struct RewardWeights {
  double mu_r = 0.0;
  double sigma_r = 1.0;
  double mu_e = 0.0;
  double sigma_e = 1.0;
  double d_max_m = km(1500.0);
  double sigma_d_m = km(1500.0);
  RewardMode mode = RewardMode::best_effort;
  Objective objective = Objective::ee_max;
};

void validate_reward_weights(const RewardWeights& w);

inline double normalize(double x, double mu, double sigma) { return (x - mu) / sigma; }

/// g(R) - g(E) - h(D); the objective drops the energy term (rate_max) or the
/// throughput term (energy_min). h is zero while D <= d_max.
double reward_best_effort(double sum_rate_bps, double sum_energy_j, double pair_distance_sum_m, const RewardWeights& w);

/// sigmoid(g(R1 + R2)) - g(E) - h(d12). Defined for exactly two paths;
/// throws std::invalid_argument otherwise.
double reward_fairness(std::span<const double> path_rates_bps, std::span<const double> energies_j,
                       double pair_distance_m, const RewardWeights& w);

/// Raw per-agent action: head indices.
struct AgentAction {
  int lane1 = 0;
  int lane2 = 0;
  int accel_x = 0;
  int accel_y = 0;
  friend bool operator==(const AgentAction&, const AgentAction&) = default;
};

struct DecodedAction {
  Association assoc;
  Vec3 accel;
};

/// Grid value of acceleration index `index` in 0..2D.
double accel_level(int index, int levels_d, double max_accel);

/// Maps head indices to an association and a horizontal acceleration. The
/// per-axis grid is scaled back onto the disc |a| <= A_max when a diagonal
/// choice would exceed it. Throws std::out_of_range on bad indices.
DecodedAction decode_action(const AgentAction& action, int lane1_size, int lane2_size, int levels_d, double max_accel);

/// Sizes of the four categorical action heads.
struct ActionHeads {
  int lane1;
  int lane2;
  int accel_x;
  int accel_y;
  int total() const { return lane1 + lane2 + accel_x + accel_y; }
};

ActionHeads action_heads(const Scenario& s);

/// Observation normalizers.
inline constexpr double kObsPositionScale = km(6000.0);
inline constexpr double kObsVelocityScale = 100.0;
inline constexpr double kObsDistanceScale = km(6000.0);

/// Identity on [-1, 1], sign(x) * (1 + ln|x|) outside. Applied to every
/// normalized feature so a runaway speed or energy stays O(1).
double squash_feature(double x);

std::size_t observation_size(const Scenario& s);

struct StepResult {
  double reward = 0.0;
  bool done = false;
  SystemMetrics metrics;
  std::vector<PathRates> paths;
  std::vector<double> power_w;
  std::vector<double> energy_j;
  AssociationMatrix assoc;
  std::vector<Vec3> accel;
  std::vector<std::vector<double>> observations;  // after the step
};

struct EpisodeSummary {
  double total_bits = 0.0;
  double total_energy_j = 0.0;  // includes the kinetic correction
  double mean_sum_throughput_bps = 0.0;
  double mean_power_w = 0.0;  // per UAV, per slot
  double energy_efficiency = 0.0;  // bits / J
};

/// Multi-agent MDP over one orbital period. Single-threaded; independent
/// instances may run on different threads.
class Environment {
 public:
  Environment(Scenario scenario, RewardWeights weights);

  void reset();

  int agents() const { return scenario_.agents(); }
  long slot() const { return slot_; }
  bool done() const { return slot_ >= scenario_.slots; }
  std::size_t observation_size() const { return obs_size_; }
  ActionHeads heads() const { return heads_; }

  /// Observation of `agent` at the current slot:
  /// [lane-1 sats xyz, lane-2 sats xyz, own position, own velocity,
  ///  four hop distances of the last association, last slot energy, n/N].
  std::vector<double> observe(int agent) const;

  /// Throws std::logic_error once the episode is over and
  /// std::invalid_argument / std::out_of_range on a malformed joint action.
  StepResult step(std::span<const AgentAction> actions);

  const Scenario& scenario() const { return scenario_; }
  const RewardWeights& weights() const { return weights_; }
  const std::vector<UavState>& uavs() const { return uavs_; }
  const AssociationMatrix& last_association() const { return last_assoc_; }

  EpisodeSummary summary() const;

 private:
  Scenario scenario_;
  RewardWeights weights_;
  ActionHeads heads_;
  std::size_t obs_size_;
  std::vector<UavState> uavs_;
  long slot_ = 0;
  AssociationMatrix last_assoc_;
  std::vector<double> last_energy_;
  EpisodeAccumulator acc_;
  double power_sum_w_ = 0.0;
};

/// Sum of distances over unordered UAV pairs.
double pair_distance_sum(std::span<const UavState> uavs);

}  // namespace ntn
