#include "ntn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace ntn {

namespace {

// Relative slack on the acceleration bound so that a vector scaled onto the
// bound by floating point arithmetic is still accepted.
constexpr double kAccelSlack = 1e-12;

double wrap(double value, double period) {
  double r = std::fmod(value, period);
  if (r < 0.0) r += period;
  // fmod of a tiny negative value can round up to exactly `period`
  if (r >= period) r = 0.0;
  return r;
}

}  // namespace

UavState step_uav(const UavState& state, const Vec3& accel, double dt, double max_accel) {
  if (accel.z != 0.0) {
    throw std::invalid_argument(fmt::format("UAV acceleration must be horizontal (a.z = {})", accel.z));
  }
  const double a = norm(accel);
  if (a > max_accel * (1.0 + kAccelSlack)) {
    throw std::invalid_argument(fmt::format("UAV acceleration {} m/s^2 exceeds A_max = {}", a, max_accel));
  }
  UavState next = state;
  next.position = state.position + state.velocity * dt + accel * (0.5 * dt * dt);
  next.velocity = state.velocity + accel * dt;
  return next;
}

int satellites_per_segment(double segment_m, double spacing_m) {
  if (!(spacing_m > 0.0)) return 0;
  return static_cast<int>(std::floor(segment_m / spacing_m + 1e-9));
}

void validate_lane(const OrbitalLane& lane) {
  if (!(lane.spacing_m > 0.0)) throw std::invalid_argument("lane spacing must be positive");
  if (!(lane.segment_m > 0.0)) throw std::invalid_argument("lane segment length must be positive");
  if (lane.segment_m > lane.circumference_m) {
    throw std::invalid_argument(fmt::format("lane segment {} m longer than circumference {} m", lane.segment_m,
                                            lane.circumference_m));
  }
  if (!(lane.altitude_m >= 0.0)) throw std::invalid_argument("lane altitude must be non-negative");
  const int fit = satellites_per_segment(lane.segment_m, lane.spacing_m);
  if (lane.visible_count != fit) {
    throw std::invalid_argument(fmt::format("lane tracks {} satellites but segment {} m / spacing {} m holds {}",
                                            lane.visible_count, lane.segment_m, lane.spacing_m, fit));
  }
}

SatSnapshot propagate_sat(const OrbitalLane& lane, int lane_id, int local_index, long slot, double dt) {
  if (slot < 0) throw std::invalid_argument("slot must be non-negative");
  if (local_index < 0 || local_index >= lane.visible_count) {
    throw std::out_of_range(fmt::format("satellite index {} outside 0..{}", local_index, lane.visible_count - 1));
  }
  const double start = lane.phase_m + local_index * lane.spacing_m;
  const double travelled = lane.speed_mps * dt * static_cast<double>(slot);
  const double s = wrap(start + travelled, lane.segment_m);
  return SatSnapshot{lane_id, local_index, s, Vec3{lane.x_m, lane.y_min_m + s, lane.altitude_m}};
}

std::vector<SatSnapshot> visible_sats(const OrbitalLane& lane, int lane_id, long slot, double dt) {
  std::vector<SatSnapshot> sats;
  sats.reserve(static_cast<std::size_t>(lane.visible_count));
  for (int i = 0; i < lane.visible_count; ++i) sats.push_back(propagate_sat(lane, lane_id, i, slot, dt));
  std::stable_sort(sats.begin(), sats.end(),
                   [](const SatSnapshot& a, const SatSnapshot& b) { return a.along_track_m < b.along_track_m; });
  for (int i = 0; i < lane.visible_count; ++i) sats[static_cast<std::size_t>(i)].local_index = i;
  return sats;
}

}  // namespace ntn
