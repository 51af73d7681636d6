#include "cvqkd/mdi.hpp"

#include "cvqkd/optimize.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqkd {

namespace {

// q/p blocks of a CM with no q-p cross correlations (all circuits here).
void qp_blocks(const CovMatrix& v, MatrixXd& vq, MatrixXd& vp) {
  const int n = v.modes();
  vq.resize(n, n);
  vp.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      vq(i, j) = v(2 * i, 2 * j);
      vp(i, j) = v(2 * i + 1, 2 * j + 1);
    }
  }
}

SymplecticSpectrum spectrum_decoupled(const CovMatrix& v) {
  if (v.modes() > 2) return symplectic_eigenvalues(v);
  MatrixXd vq, vp;
  qp_blocks(v, vq, vp);
  return spectrum_qp(vq, vp);
}

double entropy_decoupled(const CovMatrix& v) {
  return von_neumann_entropy(spectrum_decoupled(v));
}

// Thermal-loss on one mode of a party-side CM (environment traced out).
CovMatrix apply_loss(const CovMatrix& v, int mode, double tau, double omega) {
  MatrixXd m = v.mat();
  const double st = std::sqrt(tau);
  m.row(2 * mode) *= st;
  m.row(2 * mode + 1) *= st;
  m.col(2 * mode) *= st;
  m.col(2 * mode + 1) *= st;
  m(2 * mode, 2 * mode) += (1.0 - tau) * omega;
  m(2 * mode + 1, 2 * mode + 1) += (1.0 - tau) * omega;
  return CovMatrix(m);
}

double sigma_term(const CovMatrix& one_mode) {
  const double det = one_mode(0, 0) * one_mode(1, 1) - one_mode(0, 1) * one_mode(1, 0);
  return 1.0 + det + one_mode(0, 0) + one_mode(1, 1);
}

}  // namespace

void MdiAttack::validate() const {
  if (!(tau_a > 0.0 && tau_a <= 1.0 && tau_b > 0.0 && tau_b <= 1.0))
    throw std::invalid_argument("MdiAttack: transmissivity outside (0, 1]");
  if (omega_a < 1.0 || omega_b < 1.0) throw std::invalid_argument("MdiAttack: omega < 1");
  if (!attack_cm().is_physical(1e-9))
    throw std::invalid_argument("MdiAttack: attack CM violates uncertainty");
}

CovMatrix MdiAttack::attack_cm() const {
  MatrixXd m = MatrixXd::Zero(4, 4);
  m(0, 0) = m(1, 1) = omega_a;
  m(2, 2) = m(3, 3) = omega_b;
  m(0, 2) = m(2, 0) = g;
  m(1, 3) = m(3, 1) = gp;
  return CovMatrix(m);
}

double MdiAttack::lambda_q() const {
  return (1.0 - tau_a) * omega_a + (1.0 - tau_b) * omega_b - 2.0 * g * u();
}

double MdiAttack::lambda_p() const {
  return (1.0 - tau_a) * omega_a + (1.0 - tau_b) * omega_b + 2.0 * gp * u();
}

double MdiAttack::k() const {
  return 0.5 * ((1.0 - tau_b) * (omega_b - 1.0) + (1.0 - tau_a) * (omega_a - 1.0));
}

MdiAttack MdiAttack::optimal_two_mode(double tau_a, double tau_b, double omega_a, double omega_b,
                                      bool eve_optimal) {
  MdiAttack a;
  a.tau_a = tau_a;
  a.tau_b = tau_b;
  a.omega_a = omega_a;
  a.omega_b = omega_b;
  const double g = std::min(std::sqrt((omega_a - 1.0) * (omega_b + 1.0)),
                            std::sqrt((omega_b - 1.0) * (omega_a + 1.0)));
  a.g = eve_optimal ? -g : g;
  a.gp = -a.g;
  a.validate();
  return a;
}

MdiEffective MdiEffective::from_attack(const MdiAttack& a) {
  a.validate();
  return {a.tau_a, a.tau_b, a.lambda_q(), a.lambda_p()};
}

MdiEffective MdiEffective::from_excess_variances(double tau_a, double tau_b, double v_eps_q,
                                                 double v_eps_p) {
  const double base = (1.0 - tau_a) + (1.0 - tau_b);
  return {tau_a, tau_b, base + 2.0 * v_eps_q, base + 2.0 * v_eps_p};
}

CovMatrix cm_ab_given_gamma(double mu, const MdiEffective& eff) {
  if (mu < 1.0) throw std::invalid_argument("cm_ab_given_gamma: mu < 1");
  const double theta_q = (eff.tau_a + eff.tau_b) * mu + eff.lambda_q;
  const double theta_p = (eff.tau_a + eff.tau_b) * mu + eff.lambda_p;
  const double corr = mu * mu - 1.0;
  const double root = std::sqrt(eff.tau_a * eff.tau_b);
  MatrixXd m = MatrixXd::Zero(4, 4);
  m(0, 0) = mu - corr * eff.tau_a / theta_q;
  m(1, 1) = mu - corr * eff.tau_a / theta_p;
  m(2, 2) = mu - corr * eff.tau_b / theta_q;
  m(3, 3) = mu - corr * eff.tau_b / theta_p;
  m(0, 2) = m(2, 0) = corr * root / theta_q;
  m(1, 3) = m(3, 1) = -corr * root / theta_p;
  CovMatrix out(m);
  if (!out.is_physical(1e-6)) throw std::runtime_error("cm_ab_given_gamma: unphysical CM");
  return out;
}

CovMatrix cm_ab_given_gamma(double mu, const MdiAttack& attack) {
  return cm_ab_given_gamma(mu, MdiEffective::from_attack(attack));
}

CovMatrix cm_ab_given_gamma_circuit(double mu, const MdiAttack& attack) {
  attack.validate();
  if (mu < 1.0) throw std::invalid_argument("cm_ab_given_gamma_circuit: mu < 1");
  // Party-side modes (a, A', B', b) after the two thermal-loss links,
  // including the noise cross correlations induced by Eve's G block.
  const double ta = attack.tau_a, tb = attack.tau_b;
  const double c_tmsv = std::sqrt(mu * mu - 1.0);
  MatrixXd m = MatrixXd::Zero(8, 8);
  auto set_mode = [&m](int mode, double vq, double vp) {
    m(2 * mode, 2 * mode) = vq;
    m(2 * mode + 1, 2 * mode + 1) = vp;
  };
  set_mode(0, mu, mu);
  set_mode(1, ta * mu + (1.0 - ta) * attack.omega_a, ta * mu + (1.0 - ta) * attack.omega_a);
  set_mode(2, tb * mu + (1.0 - tb) * attack.omega_b, tb * mu + (1.0 - tb) * attack.omega_b);
  set_mode(3, mu, mu);
  auto set_cross = [&m](int i, int j, double cq, double cp) {
    m(2 * i, 2 * j) = m(2 * j, 2 * i) = cq;
    m(2 * i + 1, 2 * j + 1) = m(2 * j + 1, 2 * i + 1) = cp;
  };
  set_cross(0, 1, std::sqrt(ta) * c_tmsv, -std::sqrt(ta) * c_tmsv);
  set_cross(2, 3, std::sqrt(tb) * c_tmsv, -std::sqrt(tb) * c_tmsv);
  set_cross(1, 2, attack.u() * attack.g, attack.u() * attack.gp);

  CovMatrix v(m);
  v = apply_symplectic(v, embed_symplectic(beamsplitter(0.5), {1, 2}, 4));
  // Bell detection: q of the difference output (mode 2), p of the sum
  // output (mode 1).
  v = condition_homodyne(v, 2, Quadrature::q);
  v = condition_homodyne(v, 1, Quadrature::p);
  return v;  // modes (a, b)
}

CovMatrix cm_b_given_gamma_alpha(double mu, const MdiEffective& eff) {
  return condition_heterodyne(cm_ab_given_gamma(mu, eff), 0);
}

CovMatrix cm_b_given_gamma_alpha(double mu, const MdiAttack& attack) {
  return cm_b_given_gamma_alpha(mu, MdiEffective::from_attack(attack));
}

double mutual_info_mdi(double mu, const MdiEffective& eff) {
  const CovMatrix v_ab = cm_ab_given_gamma(mu, eff);
  const CovMatrix v_b = v_ab.marginal({1});
  const CovMatrix v_b_cond = condition_heterodyne(v_ab, 0);
  return 0.5 * std::log2(sigma_term(v_b) / sigma_term(v_b_cond));
}

double mutual_info_mdi(double mu, const MdiAttack& attack) {
  return mutual_info_mdi(mu, MdiEffective::from_attack(attack));
}

double holevo_mdi(double mu, const MdiEffective& eff) {
  const CovMatrix v_ab = cm_ab_given_gamma(mu, eff);
  const CovMatrix v_b_cond = condition_heterodyne(v_ab, 0);
  return entropy_decoupled(v_ab) - entropy_decoupled(v_b_cond);
}

double holevo_mdi(double mu, const MdiAttack& attack) {
  return holevo_mdi(mu, MdiEffective::from_attack(attack));
}

KeyRateBreakdown keyrate_mdi(double xi, double mu, const MdiEffective& eff) {
  if (xi < 0.0 || xi > 1.0) throw std::invalid_argument("keyrate_mdi: xi outside [0, 1]");
  KeyRateBreakdown out;
  const CovMatrix v_ab = cm_ab_given_gamma(mu, eff);
  const CovMatrix v_b_cond = condition_heterodyne(v_ab, 0);
  const CovMatrix v_b = v_ab.marginal({1});
  out.i_ab = 0.5 * std::log2(sigma_term(v_b) / sigma_term(v_b_cond));
  out.spectrum_avg = spectrum_decoupled(v_ab);
  out.spectrum_cond = spectrum_decoupled(v_b_cond);
  out.i_e = von_neumann_entropy(out.spectrum_avg) - von_neumann_entropy(out.spectrum_cond);
  out.rate = xi * out.i_ab - out.i_e;
  return out;
}

KeyRateBreakdown keyrate_mdi(double xi, double mu, const MdiAttack& attack) {
  return keyrate_mdi(xi, mu, MdiEffective::from_attack(attack));
}

KeyRateBreakdown keyrate_mdi_optimized(double xi, const MdiEffective& eff, double mu_lo,
                                       double mu_hi, double* best_mu) {
  OptResult r = golden_max_log(
      [&](double mu) { return keyrate_mdi(xi, mu, eff).rate; }, mu_lo, mu_hi, 1e-4, 1e-6);
  if (best_mu) *best_mu = r.arg;
  return keyrate_mdi(xi, r.arg, eff);
}

MdiPurificationCms mdi_purification_cms(double mu, const MdiAttack& attack) {
  attack.validate();
  // Modes: a(0) A(1) E1(2) E2(3) F1(4) F2(5) B(6) b(7); (F1, F2) purify the
  // attack state so the global state is pure.
  const CovMatrix eve4 = purify(attack.attack_cm());
  std::vector<CovMatrix> blocks{tmsv_cm(mu), eve4, tmsv_cm(mu)};
  // direct_sum order: (a, A), (E1, E2, F1, F2), (B, b)
  CovMatrix v = direct_sum(blocks);

  v = apply_symplectic(v, embed_symplectic(beamsplitter(attack.tau_a), {1, 2}, 8));
  v = apply_symplectic(v, embed_symplectic(beamsplitter(attack.tau_b), {6, 3}, 8));
  v = apply_symplectic(v, embed_symplectic(beamsplitter(0.5), {1, 6}, 8));
  v = condition_homodyne(v, 6, Quadrature::q);   // q- output
  v = condition_homodyne(v, 1, Quadrature::p);   // p+ output
  // Remaining modes: a(0) E1'(1) E2'(2) F1(3) F2(4) b(5).
  MdiPurificationCms out{v.marginal({0, 5}), v.marginal({1, 2, 3, 4}), v.marginal({5}),
                         v.marginal({1, 2, 3, 4})};
  CovMatrix after_alice = condition_heterodyne(v, 0);
  out.bob_given_gamma_alpha = after_alice.marginal({4});
  out.eve_given_gamma_alpha = after_alice.marginal({0, 1, 2, 3});
  return out;
}

void StarAttack::validate() const {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("StarAttack: eta outside (0, 1]");
  if (omega < 1.0) throw std::invalid_argument("StarAttack: omega < 1");
}

namespace {

// Party CM (a, b, c) conditioned on the three relay outcomes.
CovMatrix star_party_cm(double mu, double omega, double eta_a, double eta_b, double eta_c) {
  if (mu < 1.0) throw std::invalid_argument("star: mu < 1");
  // Modes a(0) A(1) b(2) B(3) c(4) C(5).
  std::vector<CovMatrix> blocks{tmsv_cm(mu), tmsv_cm(mu), tmsv_cm(mu)};
  CovMatrix v = direct_sum(blocks);
  v = apply_loss(v, 1, eta_a, omega);
  v = apply_loss(v, 3, eta_b, omega);
  v = apply_loss(v, 5, eta_c, omega);
  v = apply_symplectic(v, embed_symplectic(beamsplitter(0.5), {1, 3}, 6));       // R1+/R1-
  v = apply_symplectic(v, embed_symplectic(beamsplitter(2.0 / 3.0), {1, 5}, 6)); // R2+/R2-
  v = condition_homodyne(v, 5, Quadrature::q);  // R2-
  v = condition_homodyne(v, 3, Quadrature::q);  // R1-
  v = condition_homodyne(v, 1, Quadrature::p);  // R2+
  if (!v.is_physical(1e-6)) throw std::runtime_error("star: conditioned CM unphysical");
  return v;  // (a, b, c)
}

}  // namespace

double holevo_star3(double mu, double omega, double eta_a, double eta_b, double eta_c) {
  const CovMatrix v_abc = star_party_cm(mu, omega, eta_a, eta_b, eta_c);
  const CovMatrix v_bc = condition_heterodyne(v_abc, 0);
  return entropy_decoupled(v_abc) - entropy_decoupled(v_bc);
}

StarBreakdown keyrate_star3(double xi, double mu, const StarAttack& attack) {
  attack.validate();
  if (xi < 0.0 || xi > 1.0) throw std::invalid_argument("keyrate_star3: xi outside [0, 1]");
  StarBreakdown out;
  const CovMatrix v_abc = star_party_cm(mu, attack.omega, attack.eta, attack.eta, attack.eta);
  const CovMatrix v_bc = condition_heterodyne(v_abc, 0);
  out.i_ab = 0.5 * std::log2(sigma_term(v_abc.marginal({1})) / sigma_term(v_bc.marginal({0})));
  out.i_ac = 0.5 * std::log2(sigma_term(v_abc.marginal({2})) / sigma_term(v_bc.marginal({1})));
  out.i_min = std::min(out.i_ab, out.i_ac);
  out.i_e = entropy_decoupled(v_abc) - entropy_decoupled(v_bc);
  out.rate = xi * out.i_min - out.i_e;
  return out;
}

StarBreakdown keyrate_star3_optimized(double xi, const StarAttack& attack, double mu_lo,
                                      double mu_hi, double* best_mu) {
  OptResult r = golden_max_log(
      [&](double mu) { return keyrate_star3(xi, mu, attack).rate; }, mu_lo, mu_hi, 1e-4, 1e-6);
  if (best_mu) *best_mu = r.arg;
  return keyrate_star3(xi, r.arg, attack);
}

}  // namespace cvqkd
