#include "cvqkd/estimation.hpp"

#include "cvqkd/optimize.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqkd {

double inverse_normal_cdf(double p) {
  // Wichura, Applied Statistics 37 (1988), algorithm AS241 (PPND16).
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("inverse_normal_cdf: p outside (0, 1)");
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) *
                    r +
                4.5921953931549871457e+4) *
                   r +
               1.3731693765509461125e+4) *
                  r +
              1.9715909503065514427e+3) *
                 r +
             1.3314166789178437745e+2) *
                r +
            3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) *
                    r +
                2.1213794301586595867e+4) *
                   r +
               5.3941960214247511077e+3) *
                  r +
              6.8718700749205790830e+2) *
                 r +
             4.2313330701600911252e+1) *
                r +
            1.0);
  }
  double r = (q < 0.0) ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) *
                   r +
               1.27045825245236838258e+0) *
                  r +
              3.64784832476320460504e+0) *
                 r +
             5.76949722146069140550e+0) *
                r +
            4.63033784615654529590e+0) *
               r +
           1.42343711074968357734e+0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) *
                   r +
               1.48103976427480074590e-1) *
                  r +
              6.89767334985100004550e-1) *
                 r +
             1.67638483018380384940e+0) *
                r +
            2.05319162663775882187e+0) *
               r +
           1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) *
                   r +
               2.65321895265761230930e-2) *
                  r +
              2.96560571828504891230e-1) *
                 r +
             1.78482653991729133580e+0) *
                r +
            5.46378491116411436990e+0) *
               r +
           6.65790464350110377720e+0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                1.84631831751005468180e-5) *
                   r +
               7.86869131145613259100e-4) *
                  r +
              1.48753612908506148525e-2) *
                 r +
             1.36929880922735805310e-1) *
                r +
            5.99832206555887937690e-1) *
               r +
           1.0);
  }
  return (q < 0.0) ? -val : val;
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double zscore(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::domain_error("zscore: eps outside (0, 0.5)");
  return inverse_normal_cdf(1.0 - 0.5 * eps);
}

void EstimationSetup::validate() const {
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("EstimationSetup: ratio");
  if (!(eps_pe > 0.0 && eps_pe < 0.5)) throw std::invalid_argument("EstimationSetup: eps_pe");
  if (!(eps_sm > 0.0 && eps_sm < 1.0)) throw std::invalid_argument("EstimationSetup: eps_sm");
  if (d_bits < 1) throw std::invalid_argument("EstimationSetup: d_bits");
}

OneWayVariances estimator_variances_oneway(double tau, double v_mod, double v_th, double omega,
                                           double m) {
  if (m < 2.0) throw std::invalid_argument("estimator_variances_oneway: m < 2");
  const double v_n = tau * (v_th + 1.0) + (1.0 - tau) * omega;
  OneWayVariances out;
  out.var_tau = (4.0 / m) * tau * tau * (2.0 + v_n / (tau * v_mod));
  out.var_veps = 2.0 * v_n * v_n / m + v_th * v_th * out.var_tau;
  return out;
}

MdiVariances estimator_variances_mdi(const MdiAttack& attack, double v_mod, double m) {
  if (m < 2.0) throw std::invalid_argument("estimator_variances_mdi: m < 2");
  const double v_qn = 1.0 + attack.v_eps_q();
  const double v_pn = 1.0 + attack.v_eps_p();
  auto var_tau = [&](double t_this, double t_other, double v_noise) {
    const double t_sum = t_this + 0.5 * t_other;
    return (8.0 * t_this / m) * t_sum * (1.0 + v_noise / (t_sum * v_mod));
  };
  MdiVariances out;
  out.var_tau_a_q = var_tau(attack.tau_a, attack.tau_b, v_qn);
  out.var_tau_a_p = var_tau(attack.tau_a, attack.tau_b, v_pn);
  out.var_tau_b_q = var_tau(attack.tau_b, attack.tau_a, v_qn);
  out.var_tau_b_p = var_tau(attack.tau_b, attack.tau_a, v_pn);
  out.var_tau_a = out.var_tau_a_q * out.var_tau_a_p / (out.var_tau_a_q + out.var_tau_a_p);
  out.var_tau_b = out.var_tau_b_q * out.var_tau_b_p / (out.var_tau_b_q + out.var_tau_b_p);
  out.var_veps_q = 2.0 * v_qn * v_qn / m;
  out.var_veps_p = 2.0 * v_pn * v_pn / m;
  return out;
}

double delta_fs(double n, int d_bits, double eps_sm) {
  if (n < 1.0) throw std::invalid_argument("delta_fs: n < 1");
  return (2.0 * std::pow(2.0, d_bits) + 3.0) * std::sqrt(std::log2(2.0 / eps_sm) / n);
}

WorstCaseParams worst_case(double tau, double v_eps, double sd_tau, double sd_veps, double eps_pe,
                           bool paper_exact_z) {
  if (sd_tau < 0.0 || sd_veps < 0.0) throw std::invalid_argument("worst_case: negative sd");
  const double z = paper_exact_z ? 6.5 : zscore(eps_pe);
  WorstCaseParams out;
  out.tau_low = tau - z * sd_tau;
  out.v_eps_up = v_eps + z * sd_veps;
  if (out.tau_low <= 0.0) {
    out.tau_low = 1e-12;  // keeps downstream logs finite; rate is 0 here anyway
    out.too_noisy = true;
  }
  return out;
}

double keyrate_finite_oneway(const OneWaySpec& spec, const LossyChannel& ch, double n_total,
                             const EstimationSetup& setup) {
  spec.validate();
  ch.validate();
  setup.validate();
  const double m = setup.ratio * n_total;
  const double n_key = n_total - m;
  if (m < 2.0 || n_key < 1.0) return 0.0;
  const OneWayVariances var =
      estimator_variances_oneway(ch.tau, spec.v_mod, spec.v_th, ch.omega, m);
  const WorstCaseParams wc = worst_case(ch.tau, ch.excess_variance(), std::sqrt(var.var_tau),
                                        std::sqrt(var.var_veps), setup.eps_pe,
                                        setup.paper_exact_z);
  if (wc.too_noisy) return 0.0;
  const double tau_low = std::min(wc.tau_low, 1.0);
  const LossyChannel worst = LossyChannel::from_excess_variance(tau_low, wc.v_eps_up);
  const double r_tilde = keyrate_oneway(spec, worst).rate;
  const double k = (1.0 - setup.ratio) * (r_tilde - delta_fs(n_key, setup.d_bits, setup.eps_sm));
  return k > 0.0 ? k : 0.0;
}

double keyrate_finite_mdi(double xi, double mu, const MdiAttack& attack, double n_total,
                          const EstimationSetup& setup) {
  attack.validate();
  setup.validate();
  const double m = setup.ratio * n_total;
  const double n_key = n_total - m;
  if (m < 2.0 || n_key < 1.0) return 0.0;
  const double v_mod = mu - 1.0;
  const MdiVariances var = estimator_variances_mdi(attack, v_mod, m);
  // Pairing is plumbing only: link-A tau with the q-quadrature noise, link-B
  // tau with the p-quadrature noise; the four bounds are independent.
  const WorstCaseParams wc_a = worst_case(attack.tau_a, attack.v_eps_q(), std::sqrt(var.var_tau_a),
                                          std::sqrt(var.var_veps_q), setup.eps_pe,
                                          setup.paper_exact_z);
  const WorstCaseParams wc_b = worst_case(attack.tau_b, attack.v_eps_p(), std::sqrt(var.var_tau_b),
                                          std::sqrt(var.var_veps_p), setup.eps_pe,
                                          setup.paper_exact_z);
  if (wc_a.too_noisy || wc_b.too_noisy) return 0.0;
  const MdiEffective eff = MdiEffective::from_excess_variances(
      std::min(wc_a.tau_low, 1.0), std::min(wc_b.tau_low, 1.0), wc_a.v_eps_up, wc_b.v_eps_up);
  const double r_tilde = keyrate_mdi(xi, mu, eff).rate;
  const double k = (n_key / n_total) * (r_tilde - delta_fs(n_key, setup.d_bits, setup.eps_sm));
  return k > 0.0 ? k : 0.0;
}

FiniteOpt optimize_finite(const std::function<double(double, double)>& rate_fn, double v_mod_lo,
                          double v_mod_hi, double ratio_lo, double ratio_hi) {
  FiniteOpt out;
  auto best_over_ratio = [&](double v_mod) {
    return golden_max([&](double r) { return rate_fn(v_mod, r); }, ratio_lo, ratio_hi, 1e-4,
                      1e-10);
  };
  OptResult outer = golden_max_log(
      [&](double v_mod) { return best_over_ratio(v_mod).value; }, v_mod_lo, v_mod_hi, 1e-4, 1e-8);
  OptResult inner = best_over_ratio(outer.arg);
  out.best_v_mod = outer.arg;
  out.best_ratio = inner.arg;
  out.best_rate = inner.value;
  return out;
}

}  // namespace cvqkd
