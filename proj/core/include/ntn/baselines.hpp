#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ntn/env.hpp"
#include "ntn/scenario.hpp"

namespace ntn {

enum class Cooperation { cooperative, non_cooperative };

const char* to_string(Cooperation mode);

/// One slot of a non-learned scheme. Paths are listed in relay order; each
/// carries the 0-based satellite index used on every lane it crosses and the
/// carrier of every hop.
struct BaselineSlot {
  double sum_bps = 0.0;
  std::vector<double> path_bps;
  std::vector<std::vector<int>> sats;
  std::vector<std::vector<LinkType>> links;
};

struct BaselineSeries {
  std::string name;
  std::vector<BaselineSlot> slots;
  double mean_bps() const;
  /// Minimum over paths of the per-path mean rate.
  double min_path_mean_bps() const;
};

/// Src talks to Dst over one hybrid link; constant over slots.
BaselineSeries run_direct(const Scenario& s);

/// Src -> lane1 [-> lane_mid] [-> lane2] -> Dst, best satellite chain per
/// slot. k = 1 uses lane 1, k = 2 lanes 1 and 2, k = 3 adds the middle lane.
/// Throws std::invalid_argument for other k or a missing middle lane.
BaselineSeries run_sat_only(const Scenario& s, int k);

/// Fixed relays (ground relays at the UAV starting xy by default).
BaselineSeries run_sat_ground(const Scenario& s, Cooperation mode);
BaselineSeries run_fixed_relays(const Scenario& s, std::span<const Vec3> relays, Cooperation mode, std::string name);

/// Per-slot exhaustive association search on a recorded relay trajectory;
/// trajectory[n] holds every relay's state at the start of slot n.
BaselineSeries frozen_uav_oracle(const Scenario& s, std::span<const std::vector<UavState>> trajectory);

/// Reward normalizers for a scenario: throughput mean and spread from the
/// cooperative SAT-Ground pre-pass, energy mean from the minimum
/// steady-flight power.
RewardWeights derive_reward_weights(const Scenario& s, RewardMode mode, Objective objective);

}  // namespace ntn
