#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ntn/channel.hpp"
#include "ntn/dynamics.hpp"
#include "ntn/energy.hpp"
#include "ntn/network.hpp"
#include "ntn/vec3.hpp"

namespace ntn {

/// Everything that fixes the physical world of an experiment. SI units.
struct Scenario {
  Vec3 src;
  Vec3 dst;
  OrbitalLane lane1;  // serves Src
  OrbitalLane lane2;  // serves Dst
  std::optional<OrbitalLane> lane_mid;  // only used by the three-lane SAT-only baseline
  std::vector<Vec3> uav_initial_positions;
  std::vector<Vec3> uav_initial_velocities;
  double uav_altitude_m = km(50.0);
  double dt_s = 10.0;
  int slots = 572;
  double max_accel = 5.0;
  int accel_levels = 5;  // D: 2D+1 grid points per axis
  ChannelParams channel;
  PowerParams power;

  int agents() const { return static_cast<int>(uav_initial_positions.size()); }
};

/// The reference parameter set: two counter-rotating lanes over Src and Dst,
/// two UAVs between them, 572 slots of 10 s.
Scenario default_scenario();

/// Throws std::invalid_argument on the first inconsistency found.
void validate_scenario(const Scenario& s);

/// Node positions at `slot` with the given relay positions.
SlotGeometry slot_geometry(const Scenario& s, long slot, std::span<const Vec3> relays);

/// Fixed ground relays at the UAV starting xy.
std::vector<Vec3> ground_relay_positions(const Scenario& s);

}  // namespace ntn
