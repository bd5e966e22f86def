#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ntn/channel.hpp"
#include "ntn/experiments.hpp"

using namespace ntn;

// Reference values below were computed offline with scipy (brentq on the
// APR root equation, log1p for the rates) and are frozen here.

TEST_SUITE("channel") {
  TEST_CASE("rf rate at reference distances") {
    const ChannelParams p;
    CHECK(rf_rate(1.0, p) == doctest::Approx(29897352855.429).epsilon(1e-12));
    CHECK(rf_rate(1000.0, p) == doctest::Approx(9967226258.83599).epsilon(1e-12));
  }

  TEST_CASE("rf rate follows inverse-square snr") {
    const ChannelParams p;
    for (double d : {10.0, 1e3, 1e5, 2e6}) {
      const double snr = 1e9 / (d * d);
      CHECK(rf_rate(d, p) == doctest::Approx(1e9 * std::log2(1.0 + snr)).epsilon(1e-12));
    }
  }

  TEST_CASE("kim attenuation at 15 km visibility and 1550 nm") {
    CHECK(kim_exponent(15.0) == 1.3);
    CHECK(kim_exponent(60.0) == 1.6);
    CHECK(kim_exponent(3.0) == doctest::Approx(0.82));
    CHECK(kim_exponent(0.8) == doctest::Approx(0.3));
    CHECK(kim_exponent(0.2) == 0.0);
    const Attenuation a = kim_attenuation(15.0, 1550.0);
    CHECK(a.beta_db_per_km == doctest::Approx(0.0677837805014088).epsilon(1e-12));
    CHECK(a.beta_per_m == doctest::Approx(1.56077922529324e-05).epsilon(1e-12));
    const ChannelParams p;
    CHECK(p.k2() == doctest::Approx(3.12155845058649e-05).epsilon(1e-12));
  }

  TEST_CASE("apr root and k1") {
    const double mu = solve_mu_star(0.1);
    CHECK(mu == doctest::Approx(9.9954411338148415).epsilon(1e-10));
    CHECK(std::abs(apr_equation_rhs(mu) - 0.1) < 1e-10);
    const ChannelParams p;
    CHECK(p.asnr_squared() == doctest::Approx(std::pow(10.0, 2.5)));
    CHECK(p.k1() == doctest::Approx(136.79653243126785).epsilon(1e-10));
    CHECK(fso_k1(0.75, 10.0) == doctest::Approx(1.04088589376567).epsilon(1e-12));
  }

  TEST_CASE("apr rhs is continuous across the series switch") {
    const double a = apr_equation_rhs(0.99999e-4);
    const double b = apr_equation_rhs(1.00001e-4);
    CHECK(a == doctest::Approx(b).epsilon(1e-9));
    CHECK(apr_equation_rhs(1e-12) == doctest::Approx(0.5));
  }

  TEST_CASE("apr rhs is strictly decreasing") {
    double prev = apr_equation_rhs(1e-6);
    for (double mu = 1e-3; mu < 500.0; mu *= 1.3) {
      const double cur = apr_equation_rhs(mu);
      CHECK(cur < prev);
      prev = cur;
    }
  }

  TEST_CASE("alpha one half is rejected") {
    CHECK_THROWS_AS(fso_k1(0.5, 10.0), std::invalid_argument);
    ChannelConfig c;
    c.apr_alpha = 0.5;
    CHECK_THROWS_AS(ChannelParams{c}, std::invalid_argument);
    CHECK_THROWS_AS(solve_mu_star(0.6), std::invalid_argument);
  }

  TEST_CASE("fso rate stays finite and positive at orbital distances") {
    const ChannelParams p;
    CHECK(fso_rate(km(2000.0), p) == doctest::Approx(7.59814245254784e-17).epsilon(1e-9));
    CHECK(fso_rate(km(3000.0), p) == doctest::Approx(2.10839186230587e-30).epsilon(1e-9));
    CHECK(fso_rate(km(3000.0), p) > 0.0);
  }

  TEST_CASE("linear asnr convention squares the ratio") {
    ChannelConfig c;
    c.asnr_convention = AsnrConvention::linear_power;
    const ChannelParams p{c};
    CHECK(p.asnr_squared() == doctest::Approx(std::pow(10.0, 5.0)));
  }

  TEST_CASE("rates decrease with distance") {
    const ChannelParams p;
    double prev_rf = rf_rate(1.0, p);
    double prev_fso = fso_rate(1.0, p);
    double prev_h = hybrid_rate(1.0, p).rate_bps;
    for (double d = 2.0; d < km(6000.0); d *= 1.1) {
      const double rf = rf_rate(d, p);
      const double fso = fso_rate(d, p);
      const double h = hybrid_rate(d, p).rate_bps;
      CHECK(rf < prev_rf);
      CHECK(fso <= prev_fso);
      CHECK(h <= prev_h);
      CHECK(h == std::max(rf, fso));
      prev_rf = rf;
      prev_fso = fso;
      prev_h = h;
    }
  }

  TEST_CASE("hybrid picks the larger and prefers fso on ties") {
    const ChannelParams p;
    const HybridRate near = hybrid_rate(km(50.0), p);
    CHECK(near.link == LinkType::fso);
    const HybridRate far = hybrid_rate(km(2000.0), p);
    CHECK(far.link == LinkType::rf);
    CHECK(far.rate_bps == rf_rate(km(2000.0), p));
  }

  TEST_CASE("crossover points for the default channel") {
    const ChannelParams p;
    const auto pts = crossover_points(p, 1.0, km(6000.0));
    REQUIRE(pts.size() == 2);
    CHECK(pts[0] / 1000.0 == doctest::Approx(10.559).epsilon(1e-4));
    CHECK(pts[1] / 1000.0 == doctest::Approx(273.335).epsilon(1e-4));
    for (double d : pts) CHECK(fso_rate(d, p) == doctest::Approx(rf_rate(d, p)).epsilon(1e-6));
  }

  TEST_CASE("crossover points with a stronger rf reference snr") {
    ChannelConfig c;
    c.gamma0 = 1e10;
    const ChannelParams p{c};
    const auto pts = crossover_points(p, 1.0, km(6000.0));
    REQUIRE(pts.size() == 2);
    CHECK(pts[0] / 1000.0 == doctest::Approx(45.4568).epsilon(1e-4));
    CHECK(pts[1] / 1000.0 == doctest::Approx(159.5467).epsilon(1e-4));
  }

  TEST_CASE("crossover bracket without a sign change throws") {
    const ChannelParams p;
    CHECK_THROWS_AS(crossover_distance(p, km(1000.0), km(2000.0)), std::domain_error);
  }

  TEST_CASE("non-positive distance is rejected") {
    const ChannelParams p;
    CHECK_THROWS_AS(rf_rate(0.0, p), std::invalid_argument);
    CHECK_THROWS_AS(fso_rate(-1.0, p), std::invalid_argument);
  }
}
