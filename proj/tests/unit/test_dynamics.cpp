#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "ntn/dynamics.hpp"
#include "ntn/scenario.hpp"

using namespace ntn;

TEST_SUITE("dynamics") {
  TEST_CASE("uav at rest without acceleration stays put") {
    const UavState s{Vec3{1.0, 2.0, 3.0}, Vec3{}, 0};
    const UavState n = step_uav(s, Vec3{}, 10.0, 5.0);
    CHECK(n.position == s.position);
    CHECK(n.velocity == s.velocity);
  }

  TEST_CASE("uniform motion") {
    const UavState n = step_uav(UavState{Vec3{}, Vec3{1.0, 0.0, 0.0}, 0}, Vec3{}, 10.0, 5.0);
    CHECK(n.position == Vec3{10.0, 0.0, 0.0});
  }

  TEST_CASE("constant acceleration from rest") {
    const UavState n = step_uav(UavState{}, Vec3{0.5, 0.0, 0.0}, 10.0, 5.0);
    CHECK(n.velocity == Vec3{5.0, 0.0, 0.0});
    CHECK(n.position == Vec3{25.0, 0.0, 0.0});
  }

  TEST_CASE("rejects vertical or oversized acceleration") {
    CHECK_THROWS_AS(step_uav(UavState{}, Vec3{0.0, 0.0, 1.0}, 10.0, 5.0), std::invalid_argument);
    CHECK_THROWS_AS(step_uav(UavState{}, Vec3{4.0, 4.0, 0.0}, 10.0, 5.0), std::invalid_argument);
    CHECK_NOTHROW(step_uav(UavState{}, Vec3{3.0, 4.0, 0.0}, 10.0, 5.0));
  }

  TEST_CASE("kinematic residual vanishes on random trajectories") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    UavState s{Vec3{km(2000.0), km(1333.0), km(50.0)}, Vec3{20.0, -5.0, 0.0}, 0};
    for (int n = 0; n < 200; ++n) {
      const Vec3 a{u(rng), u(rng), 0.0};
      const UavState next = step_uav(s, a, 10.0, 5.0);
      const Vec3 r = next.position - s.position - s.velocity * 10.0 - a * 50.0;
      CHECK(norm(r) <= 1e-9 * (1.0 + norm(s.position)));
      CHECK(next.position.z == s.position.z);
      s = next;
    }
  }

  TEST_CASE("satellite starts at its spacing offset") {
    const Scenario sc = default_scenario();
    for (int i = 0; i < 3; ++i) {
      const SatSnapshot s = propagate_sat(sc.lane1, 1, i, 0, 10.0);
      CHECK(s.position.x == doctest::Approx(0.0));
      CHECK(s.position.y == doctest::Approx(km(-1000.0) + i * km(1977.0)));
      CHECK(s.position.z == km(550.0));
    }
  }

  TEST_CASE("satellite advances 75.9 km per slot and wraps after 80 slots") {
    const Scenario sc = default_scenario();
    const double y0 = propagate_sat(sc.lane1, 1, 0, 0, 10.0).along_track_m;
    const double y1 = propagate_sat(sc.lane1, 1, 0, 1, 10.0).along_track_m;
    CHECK(y1 - y0 == doctest::Approx(km(75.9)));
    const double y80 = propagate_sat(sc.lane1, 1, 0, 80, 10.0).along_track_m;
    CHECK(std::abs(y80 - y0) < km(75.9));
    const double y79 = propagate_sat(sc.lane1, 1, 0, 79, 10.0).along_track_m;
    CHECK(y79 > y0 + km(5900.0));
  }

  TEST_CASE("one orbital period covers roughly the circumference") {
    const double travelled = 572 * km(75.9);
    CHECK(std::abs(travelled - km(43486.0)) < km(1977.0));
  }

  TEST_CASE("exact periodicity on synthetic lane") {
    OrbitalLane lane;
    lane.segment_m = 1000.0;
    lane.circumference_m = 5000.0;
    lane.spacing_m = 250.0;
    lane.visible_count = 4;
    lane.speed_mps = 5.0;
    lane.altitude_m = 100.0;
    // 1000 m / (5 m/s * 10 s) = 20 slots
    for (int i = 0; i < 4; ++i) {
      for (long n = 0; n < 30; ++n) {
        CHECK(propagate_sat(lane, 1, i, n + 20, 10.0).along_track_m ==
              doctest::Approx(propagate_sat(lane, 1, i, n, 10.0).along_track_m));
      }
    }
  }

  TEST_CASE("visible satellites: count, bounds and ordering") {
    const Scenario sc = default_scenario();
    for (long n = 0; n < 572; ++n) {
      for (const OrbitalLane* lane : {&sc.lane1, &sc.lane2}) {
        const auto sats = visible_sats(*lane, 1, n, 10.0);
        REQUIRE(sats.size() == 3);
        for (std::size_t k = 0; k < sats.size(); ++k) {
          CHECK(sats[k].local_index == static_cast<int>(k));
          CHECK(sats[k].along_track_m >= 0.0);
          CHECK(sats[k].along_track_m < lane->segment_m);
          CHECK(sats[k].position.y >= lane->y_min_m);
          CHECK(sats[k].position.y < lane->y_min_m + lane->segment_m);
          CHECK(sats[k].position.z == lane->altitude_m);
          if (k > 0) CHECK(sats[k - 1].along_track_m <= sats[k].along_track_m);
        }
      }
    }
  }

  TEST_CASE("segment equal to spacing leaves one satellite") {
    CHECK(satellites_per_segment(km(1977.0), km(1977.0)) == 1);
    CHECK(satellites_per_segment(km(6000.0), km(1977.0)) == 3);
  }

  TEST_CASE("lane validation") {
    OrbitalLane lane = default_scenario().lane1;
    CHECK_NOTHROW(validate_lane(lane));
    lane.visible_count = 4;
    CHECK_THROWS_AS(validate_lane(lane), std::invalid_argument);
    lane = default_scenario().lane1;
    lane.spacing_m = 0.0;
    CHECK_THROWS_AS(validate_lane(lane), std::invalid_argument);
    lane = default_scenario().lane1;
    lane.segment_m = lane.circumference_m * 2.0;
    CHECK_THROWS_AS(validate_lane(lane), std::invalid_argument);
  }
}
