#pragma once

#include "cvqkd/estimation.hpp"
#include "cvqkd/mdi.hpp"
#include "cvqkd/oneway.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

// Seeded sampling of the classical Gaussian channel/relay reductions, the
// maximum-likelihood estimators the parties would run on them, and checks
// of the analytic variance formulas against the empirical ones.
namespace cvqkd::mc {

struct OneWayBatch {
  std::vector<double> mod;  // Alice's revealed modulations M_i
  std::vector<double> out;  // Bob's outcomes B_i = sqrt(tau) M_i + noise
  std::uint64_t seed = 0;
  double v_mod = 0.0;
  double v_th = 0.0;
};

struct MdiBatch {
  std::vector<double> a_q, a_p;  // Alice's modulations
  std::vector<double> b_q, b_p;  // Bob's modulations
  std::vector<double> r_q, r_p;  // relay broadcasts
  std::uint64_t seed = 0;
  double v_mod = 0.0;
};

OneWayBatch sample_oneway(double tau, double omega, double v_mod, double v_th, std::size_t m,
                          std::uint64_t seed);

MdiBatch sample_mdi(const MdiAttack& attack, double v_mod, std::size_t m, std::uint64_t seed);

struct OneWayEstimates {
  double tau = 0.0;
  double v_eps = 0.0;
  bool unphysical = false;  // v_eps < 0 or tau > 1 (finite-sample fluctuation)
};
OneWayEstimates mle_oneway(const OneWayBatch& batch);

struct MdiEstimates {
  double tau_a = 0.0;
  double tau_b = 0.0;
  double v_eps_q = 0.0;
  double v_eps_p = 0.0;
  bool unphysical = false;
};
MdiEstimates mle_mdi(const MdiBatch& batch);

// Empirical vs analytic estimator variance over `trials` independent
// batches.
struct VarianceCheck {
  double empirical = 0.0;
  double analytic = 0.0;
  double mean = 0.0;
  double skewness = 0.0;

  double ratio() const { return empirical / analytic; }
};

struct OneWayVarianceReport {
  VarianceCheck tau;
  VarianceCheck v_eps;
};
OneWayVarianceReport oneway_variance_check(double tau, double omega, double v_mod, double v_th,
                                           std::size_t m, int trials, std::uint64_t seed);

struct MdiVarianceReport {
  VarianceCheck tau_a;
  VarianceCheck tau_b;
  VarianceCheck v_eps_q;
  VarianceCheck v_eps_p;
};
MdiVarianceReport mdi_variance_check(const MdiAttack& attack, double v_mod, std::size_t m,
                                     int trials, std::uint64_t seed);

// End-to-end check of the confidence construction: fraction of trials where
// the true parameter escapes its one-sided worst-case bound.
struct CoverageReport {
  int trials = 0;
  double miss_rate = 0.0;      // either parameter escaped
  double miss_tau = 0.0;
  double miss_v_eps = 0.0;
};
CoverageReport coverage_test(double tau, double omega, double v_mod, double v_th, std::size_t m,
                             double eps_pe, int trials, std::uint64_t seed);

// Batch dumps: "index,M,B" / "index,AQ,AP,BQ,BP,RQ,RP", 12 significant
// digits.
void dump_csv(const OneWayBatch& batch, std::ostream& os);
void dump_csv(const MdiBatch& batch, std::ostream& os);

}  // namespace cvqkd::mc
