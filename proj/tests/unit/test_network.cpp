#include <doctest.h>

#include <algorithm>
#include <random>
#include <stdexcept>

#include "ntn/network.hpp"
#include "ntn/scenario.hpp"

using namespace ntn;

namespace {

SlotGeometry default_geometry(long slot) {
  const Scenario s = default_scenario();
  return slot_geometry(s, slot, s.uav_initial_positions);
}

}  // namespace

TEST_SUITE("network") {
  TEST_CASE("direct link distance and rate") {
    const Scenario s = default_scenario();
    const double d = distance(s.src, s.dst);
    CHECK(d == doctest::Approx(5656854.24949238).epsilon(1e-12));
    const HybridRate r = hybrid_rate(d, s.channel);
    CHECK(r.link == LinkType::rf);
    CHECK(r.rate_bps == doctest::Approx(45083.5156014126).epsilon(1e-9));
  }

  TEST_CASE("hop distances follow the chain") {
    const Vec3 src{0, 0, 0}, s1{0, 0, 10}, r{3, 4, 10}, s2{3, 4, 20}, dst{3, 4, 0};
    const HopArray d = link_distances(src, dst, s1, s2, r);
    CHECK(d[0] == 10.0);
    CHECK(d[1] == 5.0);
    CHECK(d[2] == 10.0);
    CHECK(d[3] == 20.0);
  }

  TEST_CASE("e2e is the minimum hop") {
    CHECK(e2e_throughput(HopArray{5.0, 3.0, 7.0, 4.0}) == 3.0);
  }

  TEST_CASE("shared satellites split capacity") {
    const SlotGeometry g = default_geometry(0);
    const SlotLinkTable table(g, ChannelParams{});
    const auto apart = table.evaluate({{0, 0}, {1, 1}});
    const auto shared = table.evaluate({{0, 0}, {0, 1}});
    CHECK(shared[0].share[0] == 0.5);
    CHECK(shared[0].share[1] == 0.5);
    CHECK(shared[0].share[2] == 1.0);
    CHECK(shared[1].share[0] == 0.5);
    CHECK(shared[0].capacity_bps[0] == doctest::Approx(0.5 * apart[0].capacity_bps[0]));
  }

  TEST_CASE("chain rates never exceed capacity and are non-increasing") {
    const Scenario s = default_scenario();
    const ChannelParams ch;
    for (long n = 0; n < 572; n += 13) {
      const SlotLinkTable table(slot_geometry(s, n, s.uav_initial_positions), ch);
      const long count = joint_association_count(2, 3, 3);
      for (long idx = 0; idx < count; ++idx) {
        const AssociationMatrix a = decode_joint_association(idx, 2, 3, 3);
        const auto paths = table.evaluate(a);
        double sum = 0.0;
        for (const PathRates& p : paths) {
          for (int h = 0; h < kHops; ++h) {
            CHECK(p.rate_bps[h] <= p.capacity_bps[h]);
            if (h > 0) CHECK(p.rate_bps[h] <= p.rate_bps[h - 1]);
          }
          CHECK(p.e2e_bps == p.rate_bps[kHops - 1]);
          CHECK(p.e2e_bps == *std::min_element(p.capacity_bps.begin(), p.capacity_bps.end()));
          sum += p.e2e_bps;
        }
        CHECK(table.sum_e2e(a) == doctest::Approx(sum).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("joint association codec is a bijection") {
    const long count = joint_association_count(2, 3, 3);
    CHECK(count == 81);
    std::vector<AssociationMatrix> seen;
    for (long idx = 0; idx < count; ++idx) {
      const AssociationMatrix a = decode_joint_association(idx, 2, 3, 3);
      CHECK(std::find(seen.begin(), seen.end(), a) == seen.end());
      seen.push_back(a);
    }
    CHECK(decode_joint_association(0, 2, 3, 3) == AssociationMatrix{{0, 0}, {0, 0}});
    CHECK(decode_joint_association(1, 2, 3, 3) == AssociationMatrix{{0, 0}, {0, 1}});
    CHECK_THROWS_AS(decode_joint_association(81, 2, 3, 3), std::out_of_range);
  }

  TEST_CASE("exhaustive search matches brute force") {
    const Scenario s = default_scenario();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, km(4000.0));
    for (int trial = 0; trial < 20; ++trial) {
      const std::vector<Vec3> relays = {Vec3{u(rng), u(rng), km(50.0)}, Vec3{u(rng), u(rng), km(50.0)}};
      const SlotLinkTable table(slot_geometry(s, trial * 29, relays), s.channel);
      const JointSearchResult best = best_joint_association(table);
      double brute = -1.0;
      for (long idx = 0; idx < 81; ++idx) {
        double sum = 0.0;
        for (const PathRates& p : table.evaluate(decode_joint_association(idx, 2, 3, 3))) sum += p.e2e_bps;
        brute = std::max(brute, sum);
      }
      CHECK(best.sum_bps == doctest::Approx(brute).epsilon(1e-12));
      CHECK(decode_joint_association(best.index, 2, 3, 3) == best.assoc);
    }
  }

  TEST_CASE("best unshared choice maximizes the single path") {
    const SlotGeometry g = default_geometry(40);
    const SlotLinkTable table(g, ChannelParams{});
    for (int r = 0; r < 2; ++r) {
      const Association b = table.best_unshared(r);
      SlotGeometry one = g;
      one.relays = {g.relays[static_cast<std::size_t>(r)]};
      const SlotLinkTable single(one, ChannelParams{});
      double best = -1.0;
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) best = std::max(best, single.sum_e2e({{i, k}}));
      CHECK(single.sum_e2e({b}) == doctest::Approx(best));
    }
  }

  TEST_CASE("invalid associations throw") {
    const SlotLinkTable table(default_geometry(0), ChannelParams{});
    CHECK_THROWS_AS(table.evaluate({{0, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(table.evaluate({{0, 3}, {0, 0}}), std::out_of_range);
    CHECK_THROWS_AS(table.evaluate({{-1, 0}, {0, 0}}), std::out_of_range);
  }

  TEST_CASE("system metrics and accumulator") {
    PathRates a, b;
    a.e2e_bps = 3.0;
    b.e2e_bps = 5.0;
    const std::vector<PathRates> paths = {a, b};
    const std::vector<double> e = {10.0, 20.0};
    const SystemMetrics m = system_step_metrics(paths, e, 2.0, 0.5);
    CHECK(m.sum_throughput_bps == 8.0);
    CHECK(m.sum_energy_j == 30.0);
    CHECK(m.scalarized == doctest::Approx(16.0 - 15.0));
    CHECK_THROWS_AS(system_step_metrics(paths, std::vector<double>{1.0}), std::invalid_argument);

    EpisodeAccumulator acc;
    acc.add_slot(m, 10.0);
    acc.add_slot(m, 10.0);
    acc.add_energy(-5.0);
    CHECK(acc.bits() == 160.0);
    CHECK(acc.energy_j() == 55.0);
    CHECK(acc.slots() == 2);
    CHECK(acc.energy_efficiency() == doctest::Approx(160.0 / 55.0));
  }

  TEST_CASE("ground relays sit at zero altitude") {
    const SlotGeometry g = default_geometry(0);
    const SystemMetrics m = ground_relay_metrics(g, {{0, 0}, {1, 1}}, ChannelParams{});
    SlotGeometry flat = g;
    for (Vec3& r : flat.relays) r.z = 0.0;
    const auto paths = effective_capacities(flat, {{0, 0}, {1, 1}}, ChannelParams{});
    CHECK(m.sum_throughput_bps == doctest::Approx(paths[0].e2e_bps + paths[1].e2e_bps));
  }
}
