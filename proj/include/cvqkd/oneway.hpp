#pragma once

#include "cvqkd/gaussian.hpp"

namespace cvqkd {

enum class Detection { homodyne, heterodyne };
enum class Direction { direct, reverse };

// One-way Gaussian protocol: coherent (v_th = 0) or thermal preparation,
// signal quadrature variance fixed to 1.
struct OneWaySpec {
  Detection detection = Detection::homodyne;
  Direction direction = Direction::reverse;
  double v_mod = 1.0;   // Gaussian modulation variance V_M >= 0
  double v_th = 0.0;    // trusted preparation-noise variance >= 0
  double xi = 1.0;      // reconciliation efficiency in [0, 1]

  void validate() const;
};

// Thermal-loss channel: transmissivity tau in (0, 1], thermal variance
// omega >= 1.
struct LossyChannel {
  double tau = 1.0;
  double omega = 1.0;

  // Excess noise referred to the input, eps = (1 - tau)(omega - 1) / tau.
  double excess_noise() const;
  // Excess-noise variance V_eps = tau * eps = (1 - tau)(omega - 1).
  double excess_variance() const;

  static LossyChannel from_excess_noise(double tau, double eps);
  static LossyChannel from_excess_variance(double tau, double v_eps);
  static LossyChannel from_db(double db, double omega);

  void validate() const;
};

struct KeyRateBreakdown {
  double rate = 0.0;  // xi * i_ab - i_e, may be negative
  double i_ab = 0.0;
  double i_e = 0.0;
  SymplecticSpectrum spectrum_avg;
  SymplecticSpectrum spectrum_cond;

  double clamped() const { return rate > 0.0 ? rate : 0.0; }
};

// Alice/Bob mutual information in bits per use.
double mutual_info_oneway(const OneWaySpec& spec, const LossyChannel& ch);

// Eve's average and conditional CMs (two modes each); the conditional
// depends on (detection, direction).
struct EveCms {
  CovMatrix average;
  CovMatrix conditional;
};
EveCms eve_cms_oneway(const OneWaySpec& spec, const LossyChannel& ch);

// Holevo bound chi = S(average) - S(conditional), bits per use.
double holevo_oneway(const OneWaySpec& spec, const LossyChannel& ch);

KeyRateBreakdown keyrate_oneway(const OneWaySpec& spec, const LossyChannel& ch);

enum class OneWayVariant { dr_hom, dr_het, rr_hom, rr_het };

// Closed-form rate in the infinite-modulation limit, coherent states,
// xi = 1. tau at {0, 1} is handled as the analytic limit.
double keyrate_infinite_modulation(OneWayVariant variant, double tau, double omega);

// Largest tolerable excess noise at fixed tau: root of rate(eps) = 0 on
// [0, eps_hi] by bisection.
struct ThresholdResult {
  double eps_max = 0.0;
  bool bracketed = true;  // false: rate did not change sign on the bracket
};
ThresholdResult security_threshold(const OneWaySpec& spec, double tau, double eps_hi = 1.0);

// Bose occupation nbar(f) = 1 / (exp(h f / kB T) - 1); callers apply
// v_th = 2 nbar. Overflow-safe (returns 0 for large f).
double thermal_photons_from_frequency(double f_hz, double t_kelvin);

}  // namespace cvqkd
