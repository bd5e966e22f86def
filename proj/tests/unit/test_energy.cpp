#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "ntn/energy.hpp"

using namespace ntn;

TEST_SUITE("energy") {
  TEST_CASE("straight level flight at 30 m/s") {
    const PowerParams p;
    CHECK(uav_power(Vec3{30.0, 0.0, 0.0}, Vec3{}, p) == doctest::Approx(100.002).epsilon(1e-9));
    // acceleration along the velocity does not add induced power
    CHECK(uav_power(Vec3{30.0, 0.0, 0.0}, Vec3{2.0, 0.0, 0.0}, p) == doctest::Approx(100.002).epsilon(1e-9));
  }

  TEST_CASE("lateral acceleration adds the centripetal term") {
    const PowerParams p;
    const double base = 9.26e-4 * 27000.0;
    const double expected = base + 75.0 * (1.0 + 9.0 / (9.8 * 9.8));
    CHECK(uav_power(Vec3{30.0, 0.0, 0.0}, Vec3{0.0, 3.0, 0.0}, p) == doctest::Approx(expected).epsilon(1e-12));
  }

  TEST_CASE("speed below the clamp uses the clamp") {
    const PowerParams p;
    const double at_clamp = uav_power(Vec3{3.0, 0.0, 0.0}, Vec3{}, p);
    CHECK(uav_power(Vec3{}, Vec3{}, p) == doctest::Approx(at_clamp));
    CHECK(uav_power(Vec3{1.0, 0.0, 0.0}, Vec3{}, p) == doctest::Approx(at_clamp));
    CHECK(std::isfinite(uav_power(Vec3{}, Vec3{3.0, 4.0, 0.0}, p)));
    CHECK(uav_power(Vec3{}, Vec3{3.0, 4.0, 0.0}, p) > at_clamp);
  }

  TEST_CASE("minimum power speed") {
    const PowerParams p;
    CHECK(min_power_speed(p) == doctest::Approx(29.9994).epsilon(1e-5));
    CHECK(min_steady_power(p) == doctest::Approx(100.002).epsilon(1e-5));
    CHECK(2.0 * 10.0 * min_steady_power(p) == doctest::Approx(2000.04).epsilon(1e-5));
  }

  TEST_CASE("steady power is minimized at v*") {
    const PowerParams p;
    const double pmin = min_steady_power(p);
    for (double v = 3.0; v < 200.0; v += 0.25) CHECK(uav_power(Vec3{v, 0.0, 0.0}, Vec3{}, p) >= pmin - 1e-9);
  }

  TEST_CASE("power is positive and finite on random inputs") {
    const PowerParams p;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> v(-200.0, 200.0);
    std::uniform_real_distribution<double> a(-5.0, 5.0);
    for (int i = 0; i < 1000; ++i) {
      const double w = uav_power(Vec3{v(rng), v(rng), 0.0}, Vec3{a(rng), a(rng), 0.0}, p);
      CHECK(std::isfinite(w));
      CHECK(w > 0.0);
    }
  }

  TEST_CASE("slot energy and kinetic correction") {
    CHECK(slot_energy(100.0, 10.0) == 1000.0);
    CHECK_THROWS_AS(slot_energy(-1.0, 10.0), std::invalid_argument);
    CHECK(episode_kinetic_correction(Vec3{}, Vec3{3.0, 4.0, 0.0}, 10.0) == doctest::Approx(125.0));
    CHECK(episode_kinetic_correction(Vec3{3.0, 4.0, 0.0}, Vec3{}, 10.0) == doctest::Approx(-125.0));
  }

  TEST_CASE("parameter validation") {
    PowerParams p;
    CHECK_NOTHROW(validate_power_params(p));
    p.v_min_mps = 0.0;
    CHECK_THROWS_AS(validate_power_params(p), std::invalid_argument);
    p = PowerParams{};
    p.c1 = -1.0;
    CHECK_THROWS_AS(validate_power_params(p), std::invalid_argument);
  }
}
