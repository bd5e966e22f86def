#pragma once

#include <vector>

#include "ntn/vec3.hpp"

namespace ntn {

struct UavState {
  Vec3 position;
  Vec3 velocity;
  int id = 0;
};

/// Advances one UAV by one slot under constant acceleration.
///
/// Throws std::invalid_argument if the acceleration has a vertical component
/// or its Euclidean norm exceeds `max_accel`.
UavState step_uav(const UavState& state, const Vec3& accel, double dt, double max_accel);

/// A straight orbital line segment parallel to the y-axis.
///
/// Satellites circulate on the segment: the along-track coordinate of a
/// satellite wraps modulo `segment_m`, so only `visible_count` satellites
/// are ever tracked. `speed_mps` is signed: positive moves toward +y.
struct OrbitalLane {
  double x_m = 0.0;
  double y_min_m = 0.0;
  double altitude_m = 0.0;
  double speed_mps = 0.0;
  double segment_m = 0.0;
  double circumference_m = 0.0;
  double spacing_m = 0.0;
  int visible_count = 0;
  double phase_m = 0.0;
};

/// Number of satellites that fit on a segment with the given spacing.
int satellites_per_segment(double segment_m, double spacing_m);

/// Throws std::invalid_argument describing the first violated lane invariant.
void validate_lane(const OrbitalLane& lane);

struct SatSnapshot {
  int lane = 0;
  int local_index = 0;  // 0-based
  double along_track_m = 0.0;
  Vec3 position;
};

/// Position of satellite `local_index` (0-based initial identity) at `slot`.
SatSnapshot propagate_sat(const OrbitalLane& lane, int lane_id, int local_index, long slot, double dt);

/// All tracked satellites of a lane at `slot`, sorted by along-track
/// coordinate and renumbered 0..visible_count-1 in that order.
std::vector<SatSnapshot> visible_sats(const OrbitalLane& lane, int lane_id, long slot, double dt);

}  // namespace ntn
