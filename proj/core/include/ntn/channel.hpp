#pragma once

#include <utility>

namespace ntn {

enum class LinkType { rf, fso };

const char* to_string(LinkType type);

/// How a dB-valued optical ASNR maps onto the squared ASNR used by the FSO
/// capacity bound.
enum class AsnrConvention {
  squared_power,  // gamma_fso^2 = 10^(dB/10)
  linear_power,   // gamma_fso   = 10^(dB/10)
};

struct ChannelConfig {
  double rf_bandwidth_hz = 1e9;
  double fso_bandwidth_hz = 1e9;
  double gamma0 = 1e9;  // linear reference SNR at 1 m
  double visibility_km = 15.0;
  double wavelength_nm = 1550.0;
  double asnr_db = 25.0;
  AsnrConvention asnr_convention = AsnrConvention::squared_power;
  double apr_alpha = 0.1;
};

/// Channel constants with the FSO coefficients derived on construction.
class ChannelParams {
 public:
  /// Throws std::invalid_argument on non-positive inputs or alpha outside
  /// (0,1) / equal to 1/2.
  explicit ChannelParams(const ChannelConfig& config = {});

  const ChannelConfig& config() const { return config_; }
  double rf_bandwidth_hz() const { return config_.rf_bandwidth_hz; }
  double fso_bandwidth_hz() const { return config_.fso_bandwidth_hz; }
  double gamma0() const { return config_.gamma0; }
  double asnr_squared() const { return asnr_squared_; }
  double beta_db_per_km() const { return beta_db_per_km_; }
  double beta_per_m() const { return beta_per_m_; }
  double k1() const { return k1_; }
  double k2() const { return k2_; }

 private:
  ChannelConfig config_;
  double asnr_squared_ = 0.0;
  double beta_db_per_km_ = 0.0;
  double beta_per_m_ = 0.0;
  double k1_ = 0.0;
  double k2_ = 0.0;
};

/// B_RF * log2(1 + gamma0 / d^2), d in meters.
double rf_rate(double distance_m, const ChannelParams& params);

/// Kim-model size distribution exponent for a visibility in km.
double kim_exponent(double visibility_km);

struct Attenuation {
  double beta_db_per_km;
  double beta_per_m;
};

Attenuation kim_attenuation(double visibility_km, double wavelength_nm);

/// Right-hand side of the APR equation, 1/mu - e^-mu / (1 - e^-mu).
double apr_equation_rhs(double mu);

/// Root mu* > 0 of alpha = 1/mu - e^-mu/(1 - e^-mu) for alpha in (0, 1/2).
double solve_mu_star(double alpha);

double fso_k1(double alpha, double asnr_squared);

/// (B_FSO / 2) * log2(1 + k1 * exp(-k2 d)), d in meters.
double fso_rate(double distance_m, const ChannelParams& params);

struct HybridRate {
  double rate_bps;
  LinkType link;
};

/// Better of the two carriers; ties go to FSO.
HybridRate hybrid_rate(double distance_m, const ChannelParams& params);

/// Distance where FSO and RF rates cross inside [lo, hi] meters.
///
/// Throws std::domain_error if fso - rf does not change sign on the bracket.
double crossover_distance(const ChannelParams& params, double lo_m, double hi_m);

}  // namespace ntn
