#include "ntn/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <fmt/core.h>

namespace ntn {

namespace {

constexpr double kMuLo = 1e-9;
constexpr double kMuHi = 1e3;
constexpr double kMuResidualTol = 1e-10;

double log2_1p(double x) { return std::log1p(x) / std::numbers::ln2; }

}  // namespace

const char* to_string(LinkType type) { return type == LinkType::fso ? "FSO" : "RF"; }

ChannelParams::ChannelParams(const ChannelConfig& config) : config_(config) {
  if (!(config.rf_bandwidth_hz > 0.0) || !(config.fso_bandwidth_hz > 0.0)) {
    throw std::invalid_argument("channel bandwidths must be positive");
  }
  if (!(config.gamma0 > 0.0)) throw std::invalid_argument("reference SNR gamma0 must be positive");
  if (!(config.visibility_km > 0.0)) throw std::invalid_argument("visibility must be positive");
  if (!(config.wavelength_nm > 0.0)) throw std::invalid_argument("wavelength must be positive");
  if (!(config.apr_alpha > 0.0 && config.apr_alpha < 1.0) || config.apr_alpha == 0.5) {
    throw std::invalid_argument(fmt::format("APR alpha = {} must lie in (0, 1) and differ from 1/2", config.apr_alpha));
  }

  const double ratio = std::pow(10.0, config.asnr_db / 10.0);
  asnr_squared_ = config.asnr_convention == AsnrConvention::squared_power ? ratio : ratio * ratio;

  const Attenuation att = kim_attenuation(config.visibility_km, config.wavelength_nm);
  beta_db_per_km_ = att.beta_db_per_km;
  beta_per_m_ = att.beta_per_m;
  k1_ = fso_k1(config.apr_alpha, asnr_squared_);
  k2_ = 2.0 * beta_per_m_;
}

double rf_rate(double distance_m, const ChannelParams& params) {
  if (!(distance_m > 0.0)) throw std::invalid_argument(fmt::format("RF link distance {} m must be positive", distance_m));
  return params.rf_bandwidth_hz() * log2_1p(params.gamma0() / (distance_m * distance_m));
}

double kim_exponent(double visibility_km) {
  const double v = visibility_km;
  if (v > 50.0) return 1.6;
  if (v > 6.0) return 1.3;
  if (v > 1.0) return 0.16 * v + 0.34;
  if (v > 0.5) return v - 0.5;
  return 0.0;
}

Attenuation kim_attenuation(double visibility_km, double wavelength_nm) {
  if (!(visibility_km > 0.0)) throw std::invalid_argument("visibility must be positive");
  const double p = kim_exponent(visibility_km);
  const double beta_db = (3.91 / visibility_km) * std::pow(wavelength_nm / 550.0, -p);
  // dB/km -> 1/m
  const double beta = beta_db / (1e4 * std::log10(std::numbers::e));
  return {beta_db, beta};
}

double apr_equation_rhs(double mu) {
  if (mu < 1e-4) {
    // series about 0: 1/2 - mu/12 + mu^3/720
    return 0.5 - mu / 12.0 + mu * mu * mu / 720.0;
  }
  return 1.0 / mu - std::exp(-mu) / (-std::expm1(-mu));
}

double solve_mu_star(double alpha) {
  if (!(alpha > 0.0 && alpha < 0.5)) {
    throw std::invalid_argument(fmt::format("mu* is defined for alpha in (0, 1/2), got {}", alpha));
  }
  // rhs is strictly decreasing from 1/2 (mu -> 0) to 0 (mu -> inf)
  double lo = kMuLo;
  double hi = kMuHi;
  if (apr_equation_rhs(lo) - alpha < 0.0 || apr_equation_rhs(hi) - alpha > 0.0) {
    throw std::runtime_error(fmt::format("mu* for alpha = {} lies outside ({}, {})", alpha, kMuLo, kMuHi));
  }
  for (int it = 0; it < 300 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (apr_equation_rhs(mid) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double mu = 0.5 * (lo + hi);
  if (std::abs(apr_equation_rhs(mu) - alpha) >= kMuResidualTol) {
    throw std::runtime_error(fmt::format("mu* bisection did not converge for alpha = {}", alpha));
  }
  return mu;
}

double fso_k1(double alpha, double asnr_squared) {
  if (!(alpha > 0.0 && alpha < 1.0) || alpha == 0.5) {
    throw std::invalid_argument(fmt::format("k1 undefined for alpha = {}", alpha));
  }
  const double two_pi_e = 2.0 * std::numbers::pi * std::numbers::e;
  if (alpha > 0.5) return asnr_squared / (two_pi_e * alpha * alpha);
  const double mu = solve_mu_star(alpha);
  const double shape = -std::expm1(-mu) / mu;
  return std::exp(2.0 * alpha * mu) / two_pi_e * shape * shape * asnr_squared / (alpha * alpha);
}

double fso_rate(double distance_m, const ChannelParams& params) {
  if (!(distance_m > 0.0)) throw std::invalid_argument(fmt::format("FSO link distance {} m must be positive", distance_m));
  return 0.5 * params.fso_bandwidth_hz() * log2_1p(params.k1() * std::exp(-params.k2() * distance_m));
}

HybridRate hybrid_rate(double distance_m, const ChannelParams& params) {
  const double fso = fso_rate(distance_m, params);
  const double rf = rf_rate(distance_m, params);
  if (fso >= rf) return {fso, LinkType::fso};
  return {rf, LinkType::rf};
}

double crossover_distance(const ChannelParams& params, double lo_m, double hi_m) {
  if (!(lo_m > 0.0 && hi_m > lo_m)) throw std::invalid_argument("crossover bracket must satisfy 0 < lo < hi");
  auto gap = [&](double d) { return fso_rate(d, params) - rf_rate(d, params); };
  double g_lo = gap(lo_m);
  const double g_hi = gap(hi_m);
  if (g_lo == 0.0) return lo_m;
  if (g_hi == 0.0) return hi_m;
  if ((g_lo > 0.0) == (g_hi > 0.0)) {
    throw std::domain_error(fmt::format("FSO and RF rates do not cross between {} m and {} m", lo_m, hi_m));
  }
  double lo = lo_m;
  double hi = hi_m;
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g = gap(mid);
    if (g == 0.0) return mid;
    if ((g > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = g;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace ntn
