#include "cvqkd/oneway.hpp"

#include "cvqkd/optimize.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cvqkd {

namespace {

// 2019 SI values.
constexpr double kPlanck = 6.62607015e-34;     // J s
constexpr double kBoltzmann = 1.380649e-23;    // J / K

// Two-mode CM with 2x2 diagonal blocks: mode 1 diag(aq, ap), mode 2
// diag(bq, bp), cross diag(cq, cp).
CovMatrix two_mode_diag_cm(double aq, double ap, double bq, double bp, double cq, double cp) {
  MatrixXd m = MatrixXd::Zero(4, 4);
  m(0, 0) = aq;
  m(1, 1) = ap;
  m(2, 2) = bq;
  m(3, 3) = bp;
  m(0, 2) = m(2, 0) = cq;
  m(1, 3) = m(3, 1) = cp;
  return CovMatrix(m);
}

SymplecticSpectrum spectrum_of_diag_two_mode(const CovMatrix& v) {
  MatrixXd vq(2, 2), vp(2, 2);
  vq << v(0, 0), v(0, 2), v(2, 0), v(2, 2);
  vp << v(1, 1), v(1, 3), v(3, 1), v(3, 3);
  return spectrum_qp(vq, vp);
}

}  // namespace

void OneWaySpec::validate() const {
  if (v_mod < 0.0) throw std::invalid_argument("OneWaySpec: v_mod < 0");
  if (v_th < 0.0) throw std::invalid_argument("OneWaySpec: v_th < 0");
  if (xi < 0.0 || xi > 1.0) throw std::invalid_argument("OneWaySpec: xi outside [0, 1]");
}

double LossyChannel::excess_noise() const {
  return (1.0 - tau) * (omega - 1.0) / tau;
}

double LossyChannel::excess_variance() const {
  return (1.0 - tau) * (omega - 1.0);
}

LossyChannel LossyChannel::from_excess_noise(double tau, double eps) {
  LossyChannel ch;
  ch.tau = tau;
  ch.omega = (tau >= 1.0) ? 1.0 : 1.0 + tau * eps / (1.0 - tau);
  ch.validate();
  return ch;
}

LossyChannel LossyChannel::from_excess_variance(double tau, double v_eps) {
  LossyChannel ch;
  ch.tau = tau;
  ch.omega = (tau >= 1.0) ? 1.0 : 1.0 + v_eps / (1.0 - tau);
  ch.validate();
  return ch;
}

LossyChannel LossyChannel::from_db(double db, double omega) {
  LossyChannel ch;
  ch.tau = std::pow(10.0, -db / 10.0);
  ch.omega = omega;
  ch.validate();
  return ch;
}

void LossyChannel::validate() const {
  if (!(tau > 0.0 && tau <= 1.0)) throw std::invalid_argument("LossyChannel: tau outside (0, 1]");
  if (omega < 1.0) throw std::invalid_argument("LossyChannel: omega < 1");
}

double mutual_info_oneway(const OneWaySpec& spec, const LossyChannel& ch) {
  spec.validate();
  ch.validate();
  const double tau = ch.tau, w = ch.omega;
  const double sig = tau * (spec.v_mod + spec.v_th + 1.0) + (1.0 - tau) * w;
  const double noi = tau * (spec.v_th + 1.0) + (1.0 - tau) * w;
  if (spec.detection == Detection::homodyne) return 0.5 * std::log2(sig / noi);
  return std::log2((sig + 1.0) / (noi + 1.0));
}

EveCms eve_cms_oneway(const OneWaySpec& spec, const LossyChannel& ch) {
  spec.validate();
  ch.validate();
  const double tau = ch.tau, w = ch.omega;
  const double mu_t = spec.v_mod + spec.v_th + 1.0;  // Alice output variance
  const double v_out = (1.0 - tau) * mu_t + tau * w;  // Eve's transmitted mode
  const double c_avg = std::sqrt(tau * (w * w - 1.0));

  CovMatrix average = two_mode_diag_cm(v_out, v_out, w, w, c_avg, -c_avg);

  CovMatrix conditional = average;  // overwritten below
  if (spec.direction == Direction::direct) {
    // Condition on Alice's modulation: measured quadratures drop v_mod.
    const double v_cond = (1.0 - tau) * (spec.v_th + 1.0) + tau * w;
    if (spec.detection == Detection::homodyne)
      conditional = two_mode_diag_cm(v_cond, v_out, w, w, c_avg, -c_avg);
    else
      conditional = two_mode_diag_cm(v_cond, v_cond, w, w, c_avg, -c_avg);
  } else {
    // Condition on Bob's measurement of the channel output mode.
    const double v_b = tau * mu_t + (1.0 - tau) * w;
    if (spec.detection == Detection::homodyne) {
      const double aq = mu_t * w / (tau * mu_t + (1.0 - tau) * w);
      const double ap = v_out;
      const double bq = (tau * mu_t * w + 1.0 - tau) / v_b;
      const double bp = w;
      const double cq = std::sqrt(tau * (w * w - 1.0)) * mu_t / v_b;
      const double cp = -std::sqrt(tau * (w * w - 1.0));
      conditional = two_mode_diag_cm(aq, ap, bq, bp, cq, cp);
    } else {
      const double den = 1.0 + tau * mu_t + (1.0 - tau) * w;
      const double a = ((1.0 - tau) * mu_t + (tau + mu_t) * w) / den;
      const double b = ((1.0 - tau) + (1.0 + tau * mu_t) * w) / den;
      const double c = std::sqrt(tau * (w * w - 1.0)) * (mu_t + 1.0) / den;
      conditional = two_mode_diag_cm(a, a, b, b, c, -c);
    }
  }
  if (!conditional.is_physical(1e-6))
    throw std::runtime_error("eve_cms_oneway: conditional CM unphysical");
  return {std::move(average), std::move(conditional)};
}

double holevo_oneway(const OneWaySpec& spec, const LossyChannel& ch) {
  if (ch.tau >= 1.0) return 0.0;  // Eve decoupled at unit transmissivity
  const EveCms cms = eve_cms_oneway(spec, ch);
  const SymplecticSpectrum avg = spectrum_of_diag_two_mode(cms.average);
  const SymplecticSpectrum cond = spectrum_of_diag_two_mode(cms.conditional);
  return von_neumann_entropy(avg) - von_neumann_entropy(cond);
}

KeyRateBreakdown keyrate_oneway(const OneWaySpec& spec, const LossyChannel& ch) {
  KeyRateBreakdown out;
  out.i_ab = mutual_info_oneway(spec, ch);
  if (ch.tau >= 1.0) {
    out.i_e = 0.0;
    out.spectrum_avg.values = {1.0, 1.0};
    out.spectrum_cond.values = {1.0, 1.0};
  } else {
    const EveCms cms = eve_cms_oneway(spec, ch);
    out.spectrum_avg = spectrum_of_diag_two_mode(cms.average);
    out.spectrum_cond = spectrum_of_diag_two_mode(cms.conditional);
    out.i_e = von_neumann_entropy(out.spectrum_avg) - von_neumann_entropy(out.spectrum_cond);
  }
  out.rate = spec.xi * out.i_ab - out.i_e;
  return out;
}

double keyrate_infinite_modulation(OneWayVariant variant, double tau, double omega) {
  if (omega < 1.0) throw std::invalid_argument("keyrate_infinite_modulation: omega < 1");
  if (tau <= 0.0) return -std::numeric_limits<double>::infinity();
  if (tau >= 1.0) return std::numeric_limits<double>::infinity();
  const double w = omega;
  const double bnoise = tau + (1.0 - tau) * w;       // Bob's noise, homodyne
  const double enoise = 1.0 - tau + tau * w;         // Eve's conditioned mode
  switch (variant) {
    case OneWayVariant::dr_hom:
      return 0.5 * std::log2(tau * enoise / ((1.0 - tau) * bnoise)) +
             entropy_h(std::sqrt(w * bnoise / enoise)) - entropy_h(w);
    case OneWayVariant::dr_het:
      return std::log2(2.0 * tau / (M_E * (1.0 - tau) * (bnoise + 1.0))) +
             entropy_h(bnoise) - entropy_h(w);
    case OneWayVariant::rr_hom:
      return 0.5 * std::log2(w / ((1.0 - tau) * bnoise)) - entropy_h(w);
    case OneWayVariant::rr_het:
      return std::log2(2.0 * tau / (M_E * (1.0 - tau) * (bnoise + 1.0))) +
             entropy_h((1.0 + (1.0 - tau) * w) / tau) - entropy_h(w);
  }
  throw std::logic_error("keyrate_infinite_modulation: bad variant");
}

ThresholdResult security_threshold(const OneWaySpec& spec, double tau, double eps_hi) {
  auto rate_at = [&](double eps) {
    return keyrate_oneway(spec, LossyChannel::from_excess_noise(tau, eps)).rate;
  };
  if (rate_at(0.0) <= 0.0) return {0.0, true};  // insecure already at zero excess noise
  RootResult r = bisect_root(rate_at, 0.0, eps_hi, 1e-12);
  return {r.root, r.bracketed};
}

double thermal_photons_from_frequency(double f_hz, double t_kelvin) {
  if (!(f_hz > 0.0) || !(t_kelvin > 0.0))
    throw std::invalid_argument("thermal_photons_from_frequency: need f, T > 0");
  const double x = kPlanck * f_hz / (kBoltzmann * t_kelvin);
  if (x > 700.0) return 0.0;
  return 1.0 / std::expm1(x);
}

}  // namespace cvqkd
