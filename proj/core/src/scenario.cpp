#include "ntn/scenario.hpp"

#include <stdexcept>

#include <fmt/core.h>

namespace ntn {

namespace {

OrbitalLane reference_lane(double x_km, double speed_mps) {
  OrbitalLane lane;
  lane.x_m = km(x_km);
  lane.y_min_m = km(-1000.0);
  lane.altitude_m = km(550.0);
  lane.speed_mps = speed_mps;
  lane.segment_m = km(6000.0);
  lane.circumference_m = km(43486.0);
  lane.spacing_m = km(1977.0);
  lane.visible_count = 3;
  return lane;
}

}  // namespace

Scenario default_scenario() {
  Scenario s;
  s.src = Vec3{0.0, 0.0, 0.0};
  s.dst = Vec3{km(4000.0), km(4000.0), 0.0};
  s.lane1 = reference_lane(0.0, 7590.0);
  s.lane2 = reference_lane(4000.0, -7590.0);
  s.lane_mid = reference_lane(2000.0, 7590.0);
  s.uav_altitude_m = km(50.0);
  s.uav_initial_positions = {Vec3{km(2000.0), km(2667.0), km(50.0)}, Vec3{km(2000.0), km(1333.0), km(50.0)}};
  s.uav_initial_velocities = {Vec3{}, Vec3{}};
  return s;
}

void validate_scenario(const Scenario& s) {
  validate_lane(s.lane1);
  validate_lane(s.lane2);
  if (s.lane_mid) validate_lane(*s.lane_mid);
  validate_power_params(s.power);
  if (s.agents() < 1) throw std::invalid_argument("scenario needs at least one UAV");
  if (s.uav_initial_velocities.size() != s.uav_initial_positions.size()) {
    throw std::invalid_argument("one initial velocity per UAV is required");
  }
  for (const Vec3& p : s.uav_initial_positions) {
    if (!is_finite(p)) throw std::invalid_argument("UAV initial position must be finite");
    if (p.z != s.uav_altitude_m) {
      throw std::invalid_argument(fmt::format("UAV initial altitude {} m differs from H_U = {} m", p.z, s.uav_altitude_m));
    }
  }
  for (const Vec3& v : s.uav_initial_velocities) {
    if (v.z != 0.0) throw std::invalid_argument("UAV initial velocity must be horizontal");
  }
  if (!(s.dt_s > 0.0)) throw std::invalid_argument("slot length must be positive");
  if (s.slots < 1) throw std::invalid_argument("episode needs at least one slot");
  if (!(s.max_accel > 0.0)) throw std::invalid_argument("A_max must be positive");
  if (s.accel_levels < 1) throw std::invalid_argument("acceleration discretization D must be >= 1");
}

SlotGeometry slot_geometry(const Scenario& s, long slot, std::span<const Vec3> relays) {
  SlotGeometry g;
  g.src = s.src;
  g.dst = s.dst;
  for (const SatSnapshot& sat : visible_sats(s.lane1, 1, slot, s.dt_s)) g.lane1.push_back(sat.position);
  for (const SatSnapshot& sat : visible_sats(s.lane2, 2, slot, s.dt_s)) g.lane2.push_back(sat.position);
  g.relays.assign(relays.begin(), relays.end());
  return g;
}

std::vector<Vec3> ground_relay_positions(const Scenario& s) {
  std::vector<Vec3> relays = s.uav_initial_positions;
  for (Vec3& r : relays) r.z = 0.0;
  return relays;
}

}  // namespace ntn
