#pragma once

#include "cvqkd/gaussian.hpp"
#include "cvqkd/oneway.hpp"

namespace cvqkd {

// Correlated two-mode Gaussian attack on the two relay links.
struct MdiAttack {
  double tau_a = 1.0;
  double tau_b = 1.0;
  double omega_a = 1.0;
  double omega_b = 1.0;
  double g = 0.0;   // q-quadrature cross correlation of the injected modes
  double gp = 0.0;  // p-quadrature cross correlation

  void validate() const;  // ranges + physicality of the attack CM

  CovMatrix attack_cm() const;  // [[wa I, G], [G, wb I]], G = diag(g, g')

  double u() const { return std::sqrt((1.0 - tau_a) * (1.0 - tau_b)); }
  // Relay noise terms lambda = (1-ta) wa + (1-tb) wb -/+ 2 g u per quadrature.
  double lambda_q() const;
  double lambda_p() const;
  // Per-quadrature excess-noise variances V_eps = k -/+ g u,
  // k = [(1-tb)(wb-1) + (1-ta)(wa-1)] / 2.
  double k() const;
  double v_eps_q() const { return k() - g * u(); }
  double v_eps_p() const { return k() + gp * u(); }

  // Two-mode attack at the physicality boundary, g = -g' with magnitude
  // min[sqrt((wa-1)(wb+1)), sqrt((wb-1)(wa+1))]. The default follows the
  // reference formula (g > 0); eve_optimal mirrors the signs, which is the
  // assignment that actually minimizes the key rate.
  static MdiAttack optimal_two_mode(double tau_a, double tau_b, double omega_a, double omega_b,
                                    bool eve_optimal = false);
};

// Parameters the relay CMs actually depend on. Worst-case estimation feeds
// per-quadrature excess noises here without reconstructing a literal attack.
struct MdiEffective {
  double tau_a = 1.0;
  double tau_b = 1.0;
  double lambda_q = 0.0;
  double lambda_p = 0.0;

  static MdiEffective from_attack(const MdiAttack& a);
  static MdiEffective from_excess_variances(double tau_a, double tau_b, double v_eps_q,
                                            double v_eps_p);
};

// CM of the parties' retained modes conditioned on the relay outcome,
// closed form. mu = V_M + 1 >= 1.
CovMatrix cm_ab_given_gamma(double mu, const MdiEffective& eff);
CovMatrix cm_ab_given_gamma(double mu, const MdiAttack& attack);

// Same CM by explicit circuit simulation (channels, relay beamsplitter,
// conjugate homodynes); test oracle for the closed form.
CovMatrix cm_ab_given_gamma_circuit(double mu, const MdiAttack& attack);

// Bob's mode conditioned additionally on Alice's heterodyne outcome.
CovMatrix cm_b_given_gamma_alpha(double mu, const MdiEffective& eff);
CovMatrix cm_b_given_gamma_alpha(double mu, const MdiAttack& attack);

double mutual_info_mdi(double mu, const MdiEffective& eff);
double mutual_info_mdi(double mu, const MdiAttack& attack);

double holevo_mdi(double mu, const MdiEffective& eff);
double holevo_mdi(double mu, const MdiAttack& attack);

KeyRateBreakdown keyrate_mdi(double xi, double mu, const MdiEffective& eff);
KeyRateBreakdown keyrate_mdi(double xi, double mu, const MdiAttack& attack);

// Rate maximized over mu (golden section on log mu).
KeyRateBreakdown keyrate_mdi_optimized(double xi, const MdiEffective& eff,
                                       double mu_lo = 1.01, double mu_hi = 1e6,
                                       double* best_mu = nullptr);

// Full circuit with Eve's (purified) modes retained, for the purification
// identity S(parties) = S(eve side) after each rank-one measurement.
struct MdiPurificationCms {
  CovMatrix parties_given_gamma;      // modes (a, b)
  CovMatrix eve_given_gamma;          // Eve's four modes
  CovMatrix bob_given_gamma_alpha;    // mode b
  CovMatrix eve_given_gamma_alpha;    // Eve's four modes
};
MdiPurificationCms mdi_purification_cms(double mu, const MdiAttack& attack);

// Symmetric three-user star: common transmissivity eta, common noise omega,
// uncorrelated attack. mu = V_M + 1.
struct StarAttack {
  double eta = 1.0;
  double omega = 1.0;

  void validate() const;
};

struct StarBreakdown {
  double rate = 0.0;  // xi * i_min - i_e
  double i_ab = 0.0;
  double i_ac = 0.0;
  double i_min = 0.0;
  double i_e = 0.0;

  double clamped() const { return rate > 0.0 ? rate : 0.0; }
};

StarBreakdown keyrate_star3(double xi, double mu, const StarAttack& attack);

// Star rate maximized over mu on [mu_lo, mu_hi].
StarBreakdown keyrate_star3_optimized(double xi, const StarAttack& attack, double mu_lo = 2.0,
                                      double mu_hi = 20.0, double* best_mu = nullptr);

// Holevo term of the star network alone (used by fading averages); etas may
// differ per link while omega is common.
double holevo_star3(double mu, double omega, double eta_a, double eta_b, double eta_c);

}  // namespace cvqkd
