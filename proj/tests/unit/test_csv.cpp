#include <doctest.h>

#include <sstream>

#include "ntn/metrics_csv.hpp"

using namespace ntn;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) out.push_back(line);
  return out;
}

RunTable two_slot_table() {
  RunTable t;
  t.run_id = "demo";
  for (int n = 0; n < 2; ++n) {
    SlotRecord r;
    r.slot = n;
    r.sum_bps = 3e5 + n;
    r.reward = 0.25 * n;
    r.path_bps = {1e5, 2e5 + n};
    r.power_w = {100.0, 120.0};
    r.sats = {{0, 2}, {1, 1}};
    r.links = {{LinkType::rf, LinkType::fso, LinkType::rf, LinkType::rf}, {LinkType::fso, LinkType::fso, LinkType::rf, LinkType::rf}};
    r.relay_position = {Vec3{km(2000.0), km(1333.0), km(50.0)}, Vec3{km(2000.5), km(2667.0), km(50.0)}};
    t.rows.push_back(r);
  }
  return t;
}

}  // namespace

TEST_SUITE("csv") {
  TEST_CASE("number format keeps nine significant digits") {
    CHECK(format_number(1.0) == "1");
    CHECK(format_number(123456789.123) == "123456789");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(2.0 / 3.0) == "0.666666667");
    CHECK(format_number(7.59814245254784e-17) == "7.59814245e-17");
  }

  TEST_CASE("header lines") {
    std::ostringstream os;
    write_header(os, CsvHeader{"eval", 0xabcull, 3});
    CHECK(os.str() == "# kind=eval\n# config_hash=0000000000000abc\n# seed=3\n");
  }

  TEST_CASE("slot csv layout with one-based indices") {
    std::ostringstream os;
    write_slot_csv(os, two_slot_table(), CsvHeader{"eval", 1, 2});
    const auto l = lines(os.str());
    REQUIRE(l.size() == 3 + 1 + 2);
    CHECK(l[3] ==
          "run_id,episode,slot,sum_bps,reward,e2e_bps_1,power_w_1,sats_1,links_1,x_km_1,y_km_1,"
          "e2e_bps_2,power_w_2,sats_2,links_2,x_km_2,y_km_2");
    CHECK(l[4] == "demo,0,1,300000,0,100000,100,1-3,RFRR,2000,1333,200000,120,2-2,FFRR,2000.5,2667");
    CHECK(l[5].rfind("demo,0,2,300001,0.25,", 0) == 0);
  }

  TEST_CASE("relay-free rows leave positions and reward empty") {
    RunTable t = two_slot_table();
    for (SlotRecord& r : t.rows) {
      r.relay_position.clear();
      r.reward.reset();
    }
    std::ostringstream os;
    write_slot_csv(os, t, CsvHeader{"baseline", 1, 2});
    const auto l = lines(os.str());
    CHECK(l[4] == "demo,0,1,300000,,100000,100,1-3,RFRR,,,200000,120,2-2,FFRR,,");
  }

  TEST_CASE("summary statistics") {
    const RunTable t = two_slot_table();
    const RunSummary s = summarize(t, 1000.0, 10.0);
    CHECK(s.mean_sum_bps == doctest::Approx(300000.5));
    CHECK(s.min_path_mean_bps == doctest::Approx(1e5));
    CHECK(s.mean_power_w == doctest::Approx(110.0));
    REQUIRE(s.fso_fraction.size() == 4);
    CHECK(s.fso_fraction[0] == doctest::Approx(0.5));
    CHECK(s.fso_fraction[1] == doctest::Approx(1.0));
    CHECK(s.fso_fraction[2] == 0.0);
    CHECK(s.energy_efficiency == doctest::Approx(300000.5 * 2 * 10.0 / 1000.0));
    CHECK(summarize(t, 0.0, 10.0).energy_efficiency == 0.0);
  }

  TEST_CASE("summary csv") {
    RunSummary s = summarize(two_slot_table(), 1000.0, 10.0);
    s.seed = 4;
    s.oracle_mean_bps = 4e5;
    std::ostringstream os;
    write_summary_csv(os, std::span<const RunSummary>(&s, 1), CsvHeader{"sum", 1, 4});
    const auto l = lines(os.str());
    REQUIRE(l.size() == 5);
    CHECK(l[3] == "run_id,seed,mean_sum_mbps,mean_power_w,ee_kbits_per_j,min_path_mbps,oracle_mean_mbps,"
                  "fso_pct_hop1,fso_pct_hop2,fso_pct_hop3,fso_pct_hop4");
    CHECK(l[4] == "demo,4,0.3000005,110,6.00001,0.1,0.4,50,100,0,0");
  }

  TEST_CASE("curve csv") {
    EpisodeLog e;
    e.episode = 1;
    e.cumulative_reward = -2.5;
    e.updates = 3;
    std::ostringstream os;
    write_curve_csv(os, std::span<const EpisodeLog>(&e, 1), CsvHeader{"train_curve", 1, 1});
    const auto l = lines(os.str());
    CHECK(l[3] == "episode,cumulative_reward,mean_sum_bps,mean_power_w,ee_bits_per_j,critic_loss,actor_loss,updates");
    CHECK(l[4] == "1,-2.5,0,0,0,0,0,3");
  }
}
