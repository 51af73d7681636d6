#pragma once

#include "cvqkd/gaussian.hpp"

namespace cvqkd {

// Failure-probability budget of the composable MDI analysis. The overall
// parameter is eps_total = eps + eps_s + eps_ec + eps_pe for collective
// attacks, and (K^4/50) times that for coherent attacks.
struct EpsilonBudget {
  double eps = 2.5e-21;
  double eps_s = 2.5e-21;
  double eps_ec = 2.5e-21;
  double eps_pe = 2.5e-21;
  double p_ec = 0.99;  // error-correction success probability
  int d_bits = 1;

  double total() const { return eps + eps_s + eps_ec + eps_pe; }
  void validate() const;

  // Equal components with eps_total slightly below `target`.
  static EpsilonBudget collective_target(double target, double p_ec = 0.99, int d_bits = 1);
  // Components solved so that eps'' = (K^4/50) eps' is slightly below
  // `target` with K ~ n.
  static EpsilonBudget coherent_target(double target, double big_k, double p_ec = 0.99,
                                       int d_bits = 1);
};

// Second moments of the displaced variables and the relay broadcast.
struct MomentSet {
  double qa_sq = 0.0, pa_sq = 0.0;  // <Q_A^2>, <P_A^2> (post-displacement)
  double qb_sq = 0.0, pb_sq = 0.0;
  double qz_sq = 0.0, pz_sq = 0.0, qz_pz = 0.0;
  // cross moments of the raw modulations with the relay output
  double qa_qz = 0.0, qa_pz = 0.0, pa_qz = 0.0, pa_pz = 0.0;
  double qb_qz = 0.0, qb_pz = 0.0, pb_qz = 0.0, pb_pz = 0.0;
};

// Optimal affine displacement coefficients g(gamma) = u Qz + v Pz for each
// modulation variable.
struct DisplacementCoeffs {
  double u_qa = 0.0, v_qa = 0.0;
  double u_pa = 0.0, v_pa = 0.0;
  double u_qb = 0.0, v_qb = 0.0;
  double u_pb = 0.0, v_pb = 0.0;

  // z = w1 <Qz^2> + w2 <Pz^2> + w3 <Qz Pz>
  double w1() const { return 0.5 * (u_qa * u_qb + u_pa * u_pb); }
  double w2() const { return 0.5 * (v_qa * v_qb + v_pa * v_pb); }
  double w3() const {
    return 0.5 * (u_qa * v_qb + v_qa * u_qb + u_pa * v_pb + v_pa * u_pb);
  }
};
DisplacementCoeffs displacement_coeffs(const MomentSet& moments);

// Moments under a two-link entangling-cloner attack; xi_a/b are the
// excess-noise variances (1 - tau)(omega - 1) per link.
MomentSet cloner_moments(double tau_a, double tau_b, double xi_a, double xi_b, double v_mod);

// Tail parameter t = sqrt(8 ln(8/eps_pe) / n).
double tail_t(double n, double eps_pe);

// Worst-case effective CM entries at confidence eps_pe.
struct WorstCaseCm {
  double x_max = 0.0;
  double y_max = 0.0;
  double z_min = 0.0;
};
// Analytic entangling-cloner forms.
WorstCaseCm worst_case_cm(double tau_a, double tau_b, double xi_a, double xi_b, double v_mod,
                          double n, double eps_pe);
// Empirical route from the measured sums; sign search over the eight
// assignments of Eq.-style bound combinations.
struct EmpiricalSums {
  double mean_sq_a = 0.0;        // n^-1 sum (Q_Aj^2 + P_Aj^2)/2
  double mean_sq_b = 0.0;
  double mean_qz_sq = 0.0;       // n^-1 sum Q_Zj^2
  double mean_pz_sq = 0.0;
  double mean_qz_plus_pz_sq = 0.0;   // n^-1 sum (Q_Zj + P_Zj)^2
  double mean_qz_minus_pz_sq = 0.0;  // n^-1 sum (Q_Zj - P_Zj)^2
};
struct WorstCaseCmEmpirical : WorstCaseCm {
  int sign_combinations_evaluated = 0;
};
WorstCaseCmEmpirical worst_case_cm_empirical(const EmpiricalSums& sums,
                                             const DisplacementCoeffs& coeffs, double n,
                                             double eps_pe);

// How the effective (x, y, z) CM is turned into a Gaussian state for the
// Holevo term.
enum class CmConvention {
  eb_reconstruction,  // invert the cloner map to the entanglement-based CM
  printed_zi,         // [[ (x+1)I, zI ], [ zI, (y+1)I ]] as printed
};

struct ComposableRateCore {
  double raw = 0.0;  // xi * I_AB - I_E, unclamped
  double i_ab = 0.0;
  double i_e = 0.0;

  double clamped() const { return raw > 0.0 ? raw : 0.0; }
};

// r_n^0 from the effective CM entries. v_mod and nu (the relay-output
// variance <Q_Z^2>) parameterize the EB reconstruction; the printed-zI
// convention ignores nu.
ComposableRateCore rate_from_cm(double x, double y, double z, double xi_rec, double v_mod,
                                double nu, CmConvention conv = CmConvention::eb_reconstruction);

struct ComposableParams {
  double tau_a = 1.0;
  double tau_b = 1.0;
  double xi_a = 0.0;  // excess-noise variance, link A
  double xi_b = 0.0;
  double v_mod = 1.0;
  double xi_rec = 0.95;
  CmConvention convention = CmConvention::eb_reconstruction;
};

struct ComposableRate {
  double rate = 0.0;  // clamped at 0 for reporting
  double raw = 0.0;
  double r0 = 0.0;    // worst-case asymptotic part
  double eps_total = 0.0;
};

// Collective-attack composable rate, Eq.-(9.37)-style bound evaluated on the
// worst-case CM.
ComposableRate keyrate_composable_collective(double n, const EpsilonBudget& budget,
                                             const ComposableParams& params);

// Coherent-attack bound with an energy test on k signals and K ~ n.
ComposableRate keyrate_composable_coherent(double n, double k_energy, double big_k,
                                           const EpsilonBudget& budget,
                                           const ComposableParams& params);

// Convenience: solve the budget for a target overall epsilon, optimize over
// v_mod (and k for coherent attacks).
ComposableRate composable_collective_optimized(double n, double eps_target,
                                               ComposableParams params);
ComposableRate composable_coherent_optimized(double n, double eps_target,
                                             ComposableParams params);

}  // namespace cvqkd
