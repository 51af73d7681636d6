#include "cvqkd/montecarlo.hpp"

#include "cvqkd/kernels/kernels.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace cvqkd::mc {

namespace {

constexpr std::uint64_t kTrialStride = 0x9E3779B97F4A7C15ull;

// Central moments of a sample (mean, variance, skewness).
struct Moments {
  double mean = 0.0;
  double var = 0.0;
  double skew = 0.0;
};

Moments moments_of(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  Moments m;
  for (double x : xs) m.mean += x;
  m.mean /= n;
  double m2 = 0.0, m3 = 0.0;
  for (double x : xs) {
    const double d = x - m.mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m.var = m2 * n / (n - 1.0);
  m.skew = (m2 > 0.0) ? m3 / std::pow(m2, 1.5) : 0.0;
  return m;
}

}  // namespace

OneWayBatch sample_oneway(double tau, double omega, double v_mod, double v_th, std::size_t m,
                          std::uint64_t seed) {
  LossyChannel ch{tau, omega};
  ch.validate();
  if (v_mod < 0.0 || v_th < 0.0) throw std::invalid_argument("sample_oneway: negative variance");
  OneWayBatch batch;
  batch.seed = seed;
  batch.v_mod = v_mod;
  batch.v_th = v_th;
  batch.mod.resize(m);
  batch.out.resize(m);
  kernels::fill_normals(seed, 0, m, batch.mod.data());
  kernels::fill_normals(seed, 1, m, batch.out.data());
  const double s_mod = std::sqrt(v_mod);
  const double v_n = tau * (v_th + 1.0) + (1.0 - tau) * omega;
  const double s_noise = std::sqrt(v_n);
  const double s_tau = std::sqrt(tau);
  for (std::size_t i = 0; i < m; ++i) {
    batch.mod[i] *= s_mod;
    batch.out[i] = s_tau * batch.mod[i] + s_noise * batch.out[i];
  }
  return batch;
}

MdiBatch sample_mdi(const MdiAttack& attack, double v_mod, std::size_t m, std::uint64_t seed) {
  attack.validate();
  if (v_mod < 0.0) throw std::invalid_argument("sample_mdi: negative modulation variance");
  MdiBatch batch;
  batch.seed = seed;
  batch.v_mod = v_mod;
  for (auto* v : {&batch.a_q, &batch.a_p, &batch.b_q, &batch.b_p, &batch.r_q, &batch.r_p})
    v->resize(m);
  kernels::fill_normals(seed, 0, m, batch.a_q.data());
  kernels::fill_normals(seed, 1, m, batch.a_p.data());
  kernels::fill_normals(seed, 2, m, batch.b_q.data());
  kernels::fill_normals(seed, 3, m, batch.b_p.data());
  kernels::fill_normals(seed, 4, m, batch.r_q.data());  // noise draws, scaled below
  kernels::fill_normals(seed, 5, m, batch.r_p.data());

  // 2x2 Cholesky of the (Q_N, P_N) covariance; diagonal for this attack
  // family (q and p quadratures of Eve's modes are uncorrelated).
  const double v_qn = 1.0 + attack.v_eps_q();
  const double v_pn = 1.0 + attack.v_eps_p();
  const double l11 = std::sqrt(v_qn);
  const double l21 = 0.0;
  const double l22 = std::sqrt(v_pn - l21 * l21);

  const double sa = std::sqrt(attack.tau_a / 2.0);
  const double sb = std::sqrt(attack.tau_b / 2.0);
  const double s_mod = std::sqrt(v_mod);
  for (std::size_t i = 0; i < m; ++i) {
    batch.a_q[i] *= s_mod;
    batch.a_p[i] *= s_mod;
    batch.b_q[i] *= s_mod;
    batch.b_p[i] *= s_mod;
    const double nq = l11 * batch.r_q[i];
    const double np = l21 * batch.r_q[i] + l22 * batch.r_p[i];
    batch.r_q[i] = sb * batch.b_q[i] - sa * batch.a_q[i] + nq;
    batch.r_p[i] = sb * batch.b_p[i] + sa * batch.a_p[i] + np;
  }
  return batch;
}

OneWayEstimates mle_oneway(const OneWayBatch& batch) {
  const std::size_t m = batch.mod.size();
  if (m < 2) throw std::invalid_argument("mle_oneway: m < 2");
  const double md = static_cast<double>(m);
  const double cov = kernels::dot(batch.mod.data(), batch.out.data(), m) / md;
  OneWayEstimates est;
  est.tau = cov * cov / (batch.v_mod * batch.v_mod);
  const double v_n =
      kernels::sumsq_residual(batch.out.data(), batch.mod.data(), std::sqrt(est.tau), m) / md;
  est.v_eps = v_n - est.tau * batch.v_th - 1.0;
  est.unphysical = (est.v_eps < 0.0) || (est.tau > 1.0);
  return est;
}

MdiEstimates mle_mdi(const MdiBatch& batch) {
  const std::size_t m = batch.a_q.size();
  if (m < 2) throw std::invalid_argument("mle_mdi: m < 2");
  const double md = static_cast<double>(m);
  const double vm2 = batch.v_mod * batch.v_mod;
  const double t_aq = 2.0 * std::pow(kernels::dot(batch.a_q.data(), batch.r_q.data(), m) / md, 2) / vm2;
  const double t_ap = 2.0 * std::pow(kernels::dot(batch.a_p.data(), batch.r_p.data(), m) / md, 2) / vm2;
  const double t_bq = 2.0 * std::pow(kernels::dot(batch.b_q.data(), batch.r_q.data(), m) / md, 2) / vm2;
  const double t_bp = 2.0 * std::pow(kernels::dot(batch.b_p.data(), batch.r_p.data(), m) / md, 2) / vm2;

  // Provisional point estimates feed the residuals and the combination
  // weights; the weight noise is O(1/m) and drops out of the leading order.
  const double ta0 = 0.5 * (t_aq + t_ap);
  const double tb0 = 0.5 * (t_bq + t_bp);
  const double ra = std::sqrt(std::max(ta0, 0.0) / 2.0);
  const double rb = std::sqrt(std::max(tb0, 0.0) / 2.0);
  std::vector<double> pred(m);
  for (std::size_t i = 0; i < m; ++i) pred[i] = rb * batch.b_q[i] - ra * batch.a_q[i];
  const double v_qn = kernels::sumsq_residual(batch.r_q.data(), pred.data(), 1.0, m) / md;
  for (std::size_t i = 0; i < m; ++i) pred[i] = rb * batch.b_p[i] + ra * batch.a_p[i];
  const double v_pn = kernels::sumsq_residual(batch.r_p.data(), pred.data(), 1.0, m) / md;

  auto var_tau = [&](double t_this, double t_other, double v_noise) {
    const double t_sum = t_this + 0.5 * t_other;
    return 8.0 * t_this * (t_sum + v_noise / batch.v_mod);  // 1/m scale cancels in weights
  };
  auto combine = [&](double xq, double xp, double vq, double vp) {
    if (vq <= 0.0 || vp <= 0.0) return 0.5 * (xq + xp);
    const double wq = 1.0 / vq, wp = 1.0 / vp;
    return (wq * xq + wp * xp) / (wq + wp);
  };
  MdiEstimates est;
  est.tau_a = combine(t_aq, t_ap, var_tau(ta0, tb0, v_qn), var_tau(ta0, tb0, v_pn));
  est.tau_b = combine(t_bq, t_bp, var_tau(tb0, ta0, v_qn), var_tau(tb0, ta0, v_pn));
  est.v_eps_q = v_qn - 1.0;
  est.v_eps_p = v_pn - 1.0;
  est.unphysical = est.v_eps_q < 0.0 || est.v_eps_p < 0.0 || est.tau_a > 1.0 || est.tau_b > 1.0;
  return est;
}

OneWayVarianceReport oneway_variance_check(double tau, double omega, double v_mod, double v_th,
                                           std::size_t m, int trials, std::uint64_t seed) {
  if (trials < 2) throw std::invalid_argument("oneway_variance_check: trials < 2");
  std::vector<double> taus, vepss;
  taus.reserve(trials);
  vepss.reserve(trials);
  for (int t = 0; t < trials; ++t) {
    const OneWayBatch batch =
        sample_oneway(tau, omega, v_mod, v_th, m, seed + kTrialStride * (t + 1));
    const OneWayEstimates est = mle_oneway(batch);
    taus.push_back(est.tau);
    vepss.push_back(est.v_eps);
  }
  const OneWayVariances ana =
      estimator_variances_oneway(tau, v_mod, v_th, omega, static_cast<double>(m));
  OneWayVarianceReport rep;
  const Moments mt = moments_of(taus);
  const Moments mv = moments_of(vepss);
  rep.tau = {mt.var, ana.var_tau, mt.mean, mt.skew};
  rep.v_eps = {mv.var, ana.var_veps, mv.mean, mv.skew};
  return rep;
}

MdiVarianceReport mdi_variance_check(const MdiAttack& attack, double v_mod, std::size_t m,
                                     int trials, std::uint64_t seed) {
  if (trials < 2) throw std::invalid_argument("mdi_variance_check: trials < 2");
  std::vector<double> ta, tb, vq, vp;
  for (int t = 0; t < trials; ++t) {
    const MdiBatch batch = sample_mdi(attack, v_mod, m, seed + kTrialStride * (t + 1));
    const MdiEstimates est = mle_mdi(batch);
    ta.push_back(est.tau_a);
    tb.push_back(est.tau_b);
    vq.push_back(est.v_eps_q);
    vp.push_back(est.v_eps_p);
  }
  const MdiVariances ana = estimator_variances_mdi(attack, v_mod, static_cast<double>(m));
  MdiVarianceReport rep;
  const Moments ma = moments_of(ta), mb = moments_of(tb), mq = moments_of(vq), mp = moments_of(vp);
  rep.tau_a = {ma.var, ana.var_tau_a, ma.mean, ma.skew};
  rep.tau_b = {mb.var, ana.var_tau_b, mb.mean, mb.skew};
  rep.v_eps_q = {mq.var, ana.var_veps_q, mq.mean, mq.skew};
  rep.v_eps_p = {mp.var, ana.var_veps_p, mp.mean, mp.skew};
  return rep;
}

CoverageReport coverage_test(double tau, double omega, double v_mod, double v_th, std::size_t m,
                             double eps_pe, int trials, std::uint64_t seed) {
  if (trials < 100) throw std::invalid_argument("coverage_test: trials < 100");
  const double true_veps = (1.0 - tau) * (omega - 1.0);
  int miss_tau = 0, miss_veps = 0, miss_any = 0;
  for (int t = 0; t < trials; ++t) {
    const OneWayBatch batch =
        sample_oneway(tau, omega, v_mod, v_th, m, seed + kTrialStride * (t + 1));
    const OneWayEstimates est = mle_oneway(batch);
    const OneWayVariances var = estimator_variances_oneway(
        std::min(std::max(est.tau, 1e-6), 1.0), v_mod, v_th,
        1.0 + std::max(est.v_eps, 0.0) / std::max(1.0 - est.tau, 1e-6),
        static_cast<double>(m));
    const WorstCaseParams wc = worst_case(est.tau, est.v_eps, std::sqrt(var.var_tau),
                                          std::sqrt(var.var_veps), eps_pe);
    const bool mt = tau < wc.tau_low;
    const bool mv = true_veps > wc.v_eps_up;
    miss_tau += mt;
    miss_veps += mv;
    miss_any += (mt || mv);
  }
  CoverageReport rep;
  rep.trials = trials;
  rep.miss_rate = static_cast<double>(miss_any) / trials;
  rep.miss_tau = static_cast<double>(miss_tau) / trials;
  rep.miss_v_eps = static_cast<double>(miss_veps) / trials;
  return rep;
}

namespace {

void print_row(std::ostream& os, const double* vals, int n) {
  char buf[64];
  for (int i = 0; i < n; ++i) {
    std::snprintf(buf, sizeof(buf), "%.12g", vals[i]);
    os << ',' << buf;
  }
  os << '\n';
}

}  // namespace

void dump_csv(const OneWayBatch& batch, std::ostream& os) {
  os << "index,M,B\n";
  for (std::size_t i = 0; i < batch.mod.size(); ++i) {
    os << i;
    const double vals[2] = {batch.mod[i], batch.out[i]};
    print_row(os, vals, 2);
  }
}

void dump_csv(const MdiBatch& batch, std::ostream& os) {
  os << "index,AQ,AP,BQ,BP,RQ,RP\n";
  for (std::size_t i = 0; i < batch.a_q.size(); ++i) {
    os << i;
    const double vals[6] = {batch.a_q[i], batch.a_p[i], batch.b_q[i],
                            batch.b_p[i], batch.r_q[i], batch.r_p[i]};
    print_row(os, vals, 6);
  }
}

}  // namespace cvqkd::mc
