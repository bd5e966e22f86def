#pragma once

#include "ntn/vec3.hpp"

namespace ntn {

/// Fixed-wing propulsion model coefficients.
struct PowerParams {
  double c1 = 9.26e-4;
  double c2 = 2250.0;
  double gravity = 9.8;
  double mass_kg = 10.0;
  double v_min_mps = 3.0;  // speeds below this are clamped (no hovering)
};

void validate_power_params(const PowerParams& p);

/// Propulsion power in watts, excluding the kinetic-energy term that is
/// applied once per episode by episode_kinetic_correction().
double uav_power(const Vec3& velocity, const Vec3& accel, const PowerParams& p);

double slot_energy(double power_w, double dt);

/// (m/2)(|v_end|^2 - |v_start|^2) in joules.
double episode_kinetic_correction(const Vec3& v_start, const Vec3& v_end, double mass_kg);

/// Speed minimizing level steady-flight power, (c2 / (3 c1))^(1/4).
double min_power_speed(const PowerParams& p);

/// Level steady-flight power at min_power_speed().
double min_steady_power(const PowerParams& p);

}  // namespace ntn
