#include "ntn/energy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ntn {

void validate_power_params(const PowerParams& p) {
  if (!(p.c1 > 0.0) || !(p.c2 > 0.0)) throw std::invalid_argument("power coefficients c1, c2 must be positive");
  if (!(p.mass_kg > 0.0)) throw std::invalid_argument("UAV mass must be positive");
  if (!(p.v_min_mps > 0.0)) throw std::invalid_argument("minimum speed clamp must be positive");
  if (!(p.gravity > 0.0)) throw std::invalid_argument("gravity must be positive");
}

double uav_power(const Vec3& velocity, const Vec3& accel, const PowerParams& p) {
  const double speed_sq = dot(velocity, velocity);
  const double speed = std::max(std::sqrt(speed_sq), p.v_min_mps);
  // component of a perpendicular to v; with v = 0 all of a counts
  double lateral_sq = dot(accel, accel);
  if (speed_sq > 0.0) {
    const double along = dot(accel, velocity);
    lateral_sq = std::max(0.0, lateral_sq - along * along / speed_sq);
  }
  const double g2 = p.gravity * p.gravity;
  return p.c1 * speed * speed * speed + (p.c2 / speed) * (1.0 + lateral_sq / g2);
}

double slot_energy(double power_w, double dt) {
  if (power_w < 0.0) throw std::invalid_argument("power must be non-negative");
  return power_w * dt;
}

double episode_kinetic_correction(const Vec3& v_start, const Vec3& v_end, double mass_kg) {
  return 0.5 * mass_kg * (dot(v_end, v_end) - dot(v_start, v_start));
}

double min_power_speed(const PowerParams& p) { return std::pow(p.c2 / (3.0 * p.c1), 0.25); }

double min_steady_power(const PowerParams& p) {
  const double v = std::max(min_power_speed(p), p.v_min_mps);
  return p.c1 * v * v * v + p.c2 / v;
}

}  // namespace ntn
