#pragma once

#include "cvqkd/mdi.hpp"
#include "cvqkd/oneway.hpp"

#include <functional>

namespace cvqkd {

// Two-sided confidence z-score: Phi^-1(1 - eps/2), so that a Gaussian
// estimate misses its +/- z sigma interval with probability eps. About 6.5
// at eps = 1e-10.
double zscore(double eps);

// Inverse standard-normal CDF (Wichura's AS241, ~1e-15 accurate).
double inverse_normal_cdf(double p);

// Standard normal CDF.
double normal_cdf(double x);

struct EstimationSetup {
  double ratio = 0.1;      // r = m / N, PE fraction in (0, 1)
  double eps_pe = 1e-10;   // parameter-estimation error
  double eps_sm = 1e-10;   // smoothing parameter
  int d_bits = 1;          // discretization bits (1 coherent/MDI, 4 thermal)
  bool paper_exact_z = false;  // force z = 6.5 as in the reference analysis

  double z() const { return paper_exact_z ? 6.5 : zscore(eps_pe); }
  void validate() const;
};

// Leading-order estimator variances for the one-way protocol:
// Var(tau~) = (4/m) tau^2 (2 + V_N / (tau V_M)),
// Var(Veps~) = 2 V_N^2 / m + V_th^2 Var(tau~),
// with V_N = tau (V_th + 1) + (1 - tau) omega.
struct OneWayVariances {
  double var_tau = 0.0;
  double var_veps = 0.0;
};
OneWayVariances estimator_variances_oneway(double tau, double v_mod, double v_th, double omega,
                                           double m);

// MDI link variances: per-quadrature transmissivity estimators combined by
// inverse-variance weighting, plus excess-noise variance estimators.
struct MdiVariances {
  double var_tau_a = 0.0;  // combined over both quadratures
  double var_tau_b = 0.0;
  double var_veps_q = 0.0;
  double var_veps_p = 0.0;
  double var_tau_a_q = 0.0, var_tau_a_p = 0.0;
  double var_tau_b_q = 0.0, var_tau_b_p = 0.0;
};
MdiVariances estimator_variances_mdi(const MdiAttack& attack, double v_mod, double m);

// Finite-size Holevo penalty Delta(n) = (2 * 2^d + 3) sqrt(log2(2/eps_sm)/n).
double delta_fs(double n, int d_bits, double eps_sm);

// Pessimistic channel parameters tau_low = tau - z * sd_tau (clamped to
// stay positive), v_eps_up = v_eps + z * sd_veps. Inputs are standard
// deviations.
struct WorstCaseParams {
  double tau_low = 0.0;
  double v_eps_up = 0.0;
  bool too_noisy = false;  // tau_low hit the clamp; the rate will be 0
};
WorstCaseParams worst_case(double tau, double v_eps, double sd_tau, double sd_veps, double eps_pe,
                           bool paper_exact_z = false);

// Finite-size one-way rate, Eq.-(1-r)[R(worst case) - Delta((1-r)N)] style;
// negative results are reported as 0.
double keyrate_finite_oneway(const OneWaySpec& spec, const LossyChannel& ch, double n_total,
                             const EstimationSetup& setup);

// Finite-size MDI rate with per-quadrature worst-case excess noises.
double keyrate_finite_mdi(double xi, double mu, const MdiAttack& attack, double n_total,
                          const EstimationSetup& setup);

// Nested golden-section maximization over (v_mod, ratio).
struct FiniteOpt {
  double best_v_mod = 0.0;
  double best_ratio = 0.0;
  double best_rate = 0.0;
};
FiniteOpt optimize_finite(const std::function<double(double v_mod, double ratio)>& rate_fn,
                          double v_mod_lo = 0.01, double v_mod_hi = 1e6, double ratio_lo = 1e-4,
                          double ratio_hi = 0.99);

}  // namespace cvqkd
