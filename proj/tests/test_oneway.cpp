#include "cvqkd/oneway.hpp"

#include "cvqkd/gaussian.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cvqkd;

namespace {

// Three-mode CM of (E', e, B) from the mode propagation through the
// entangling cloner; independent oracle for the closed-form conditionals.
CovMatrix cloner_three_mode_cm(double tau, double w, double v_mod, double v_th) {
  const double mu_t = v_mod + v_th + 1.0;
  MatrixXd m = MatrixXd::Zero(6, 6);
  const double v_e = (1.0 - tau) * mu_t + tau * w;
  const double v_b = tau * mu_t + (1.0 - tau) * w;
  m(0, 0) = m(1, 1) = v_e;
  m(2, 2) = m(3, 3) = w;
  m(4, 4) = m(5, 5) = v_b;
  const double c_ee = std::sqrt(tau * (w * w - 1.0));
  m(0, 2) = m(2, 0) = c_ee;
  m(1, 3) = m(3, 1) = -c_ee;
  const double c_eb = std::sqrt(tau * (1.0 - tau)) * (w - mu_t);
  m(0, 4) = m(4, 0) = c_eb;
  m(1, 5) = m(5, 1) = c_eb;
  const double c_ob = std::sqrt((1.0 - tau) * (w * w - 1.0));
  m(2, 4) = m(4, 2) = c_ob;
  m(3, 5) = m(5, 3) = -c_ob;
  return CovMatrix(m);
}

}  // namespace

TEST_SUITE("oneway") {

TEST_CASE("mutual information") {
  OneWaySpec spec;
  spec.detection = Detection::homodyne;
  LossyChannel ch{1.0, 1.0};
  SUBCASE("no signal, no information") {
    spec.v_mod = 0.0;
    CHECK(mutual_info_oneway(spec, ch) == doctest::Approx(0.0));
  }
  SUBCASE("homodyne, lossless") {
    spec.v_mod = 3.0;
    CHECK(mutual_info_oneway(spec, ch) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("heterodyne, lossless") {
    spec.detection = Detection::heterodyne;
    spec.v_mod = 2.0;
    CHECK(mutual_info_oneway(spec, ch) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("coherent formulas recover the thermal family at v_th = 0") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double tau = 0.05 + 0.9 * u(rng);
    const double w = 1.0 + u(rng);
    const double vm = 0.1 + 30.0 * u(rng);
    OneWaySpec spec;
    spec.v_mod = vm;
    LossyChannel ch{tau, w};
    spec.detection = Detection::homodyne;
    const double hom = 0.5 * std::log2((tau * (vm + 1.0) + (1.0 - tau) * w) /
                                       (tau + (1.0 - tau) * w));
    CHECK(mutual_info_oneway(spec, ch) == doctest::Approx(hom).epsilon(1e-12));
    spec.detection = Detection::heterodyne;
    const double het = std::log2((tau * (vm + 1.0) + (1.0 - tau) * w + 1.0) /
                                 (tau + (1.0 - tau) * w + 1.0));
    CHECK(mutual_info_oneway(spec, ch) == doctest::Approx(het).epsilon(1e-12));
  }
}

TEST_CASE("eve cms at the channel extremes") {
  OneWaySpec spec;
  spec.v_mod = 4.0;
  SUBCASE("unit transmissivity leaks nothing") {
    const EveCms cms = eve_cms_oneway(spec, {1.0, 1.7});
    const auto spec_avg = symplectic_eigenvalues(cms.average);
    CHECK(spec_avg.values[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(spec_avg.values[1] == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("opaque channel swaps everything to Eve") {
    spec.v_th = 0.5;
    const EveCms cms = eve_cms_oneway(spec, {1e-11, 1.7});
    const auto spec_avg = symplectic_eigenvalues(cms.average);
    CHECK(spec_avg.values[0] == doctest::Approx(spec.v_mod + spec.v_th + 1.0).epsilon(1e-6));
    CHECK(spec_avg.values[1] == doctest::Approx(1.7).epsilon(1e-6));
  }
}

TEST_CASE("reverse-reconciliation conditionals match the three-mode conditioning route") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double tau = 0.05 + 0.9 * u(rng);
    const double w = 1.0 + 1.5 * u(rng);
    const double vm = 0.5 + 20.0 * u(rng);
    const double vth = 3.0 * u(rng);
    OneWaySpec spec;
    spec.direction = Direction::reverse;
    spec.v_mod = vm;
    spec.v_th = vth;
    const LossyChannel ch{tau, w};
    const CovMatrix full = cloner_three_mode_cm(tau, w, vm, vth);

    spec.detection = Detection::homodyne;
    const CovMatrix hom_oracle = condition_homodyne(full, 2, Quadrature::q);
    const CovMatrix hom = eve_cms_oneway(spec, ch).conditional;
    CHECK((hom.mat() - hom_oracle.mat()).cwiseAbs().maxCoeff() < 1e-9);

    spec.detection = Detection::heterodyne;
    const CovMatrix het_oracle = condition_heterodyne(full, 2);
    const CovMatrix het = eve_cms_oneway(spec, ch).conditional;
    CHECK((het.mat() - het_oracle.mat()).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("direct-reconciliation conditionals match the regression formula") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double tau = 0.05 + 0.9 * u(rng);
    const double w = 1.0 + 1.5 * u(rng);
    const double vm = 0.5 + 20.0 * u(rng);
    const double vth = 3.0 * u(rng);
    OneWaySpec spec;
    spec.direction = Direction::direct;
    spec.v_mod = vm;
    spec.v_th = vth;
    const LossyChannel ch{tau, w};
    // Var(X|Q_M) = Var(X) - Cov(X, Q_M)^2 / V_M with Cov(Q_E', Q_M) =
    // -sqrt(1-tau) V_M.
    const double v_e = (1.0 - tau) * (vm + vth + 1.0) + tau * w;
    const double v_cond = v_e - (1.0 - tau) * vm;
    spec.detection = Detection::homodyne;
    const CovMatrix hom = eve_cms_oneway(spec, ch).conditional;
    CHECK(hom(0, 0) == doctest::Approx(v_cond).epsilon(1e-12));
    CHECK(hom(1, 1) == doctest::Approx(v_e).epsilon(1e-12));
    spec.detection = Detection::heterodyne;
    const CovMatrix het = eve_cms_oneway(spec, ch).conditional;
    CHECK(het(0, 0) == doctest::Approx(v_cond).epsilon(1e-12));
    CHECK(het(1, 1) == doctest::Approx(v_cond).epsilon(1e-12));
  }
}

TEST_CASE("holevo term") {
  OneWaySpec spec;
  spec.direction = Direction::direct;
  spec.detection = Detection::homodyne;
  spec.v_mod = 2.0;
  SUBCASE("decoupled at tau = 1") {
    CHECK(holevo_oneway(spec, {1.0, 1.4}) == 0.0);
  }
  SUBCASE("pure-loss DR-hom value") {
    // Average spectra {(1-tau) V_M + 1, 1}; conditional mode diag(1, 2)
    // has nu = sqrt(2).
    const double chi = holevo_oneway(spec, {0.5, 1.0});
    const double expect = entropy_h(2.0) - entropy_h(std::sqrt(2.0));
    CHECK(chi == doctest::Approx(expect).epsilon(1e-10));
  }
  SUBCASE("nondecreasing in channel noise") {
    double prev = -1.0;
    for (double w = 1.0; w <= 2.0; w += 0.05) {
      const double chi = holevo_oneway(spec, {0.6, w});
      CHECK(chi >= prev - 1e-12);
      prev = chi;
    }
  }
}

TEST_CASE("key rate composition") {
  OneWaySpec spec;
  spec.detection = Detection::homodyne;
  spec.direction = Direction::reverse;
  spec.v_mod = 5.0;
  SUBCASE("lossless ideal rate equals the mutual information") {
    const KeyRateBreakdown kr = keyrate_oneway(spec, {1.0, 1.0});
    CHECK(kr.rate == doctest::Approx(kr.i_ab).epsilon(1e-12));
    CHECK(kr.i_e == 0.0);
  }
  SUBCASE("breakdown identity") {
    spec.xi = 0.93;
    const KeyRateBreakdown kr = keyrate_oneway(spec, {0.6, 1.05});
    CHECK(kr.rate == doctest::Approx(spec.xi * kr.i_ab - kr.i_e).epsilon(1e-12));
  }
  SUBCASE("large modulation approaches the rr-hom limit") {
    spec.v_mod = 1e6;
    const KeyRateBreakdown kr = keyrate_oneway(spec, {0.5, 1.0});
    CHECK(kr.rate == doctest::Approx(0.5).epsilon(2e-3));
  }
  SUBCASE("rate increases with reconciliation efficiency") {
    spec.v_mod = 10.0;
    double prev = -1e9;
    for (double xi : {0.5, 0.7, 0.9, 1.0}) {
      spec.xi = xi;
      const double r = keyrate_oneway(spec, {0.7, 1.02}).rate;
      CHECK(r > prev);
      prev = r;
    }
  }
  SUBCASE("dr-hom rate nonincreasing in omega and v_th") {
    spec.direction = Direction::direct;
    spec.v_mod = 50.0;
    double prev = 1e9;
    for (double w = 1.0; w <= 1.5; w += 0.1) {
      const double r = keyrate_oneway(spec, {0.8, w}).rate;
      CHECK(r <= prev + 1e-12);
      prev = r;
    }
    prev = 1e9;
    for (double vth : {0.0, 1.0, 2.0, 4.0}) {
      spec.v_th = vth;
      const double r = keyrate_oneway(spec, {0.8, 1.0}).rate;
      CHECK(r <= prev + 1e-12);
      prev = r;
    }
  }
}

TEST_CASE("infinite modulation closed forms") {
  CHECK(keyrate_infinite_modulation(OneWayVariant::dr_hom, 0.5, 1.0) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(keyrate_infinite_modulation(OneWayVariant::dr_hom, 0.8, 1.0) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(keyrate_infinite_modulation(OneWayVariant::rr_hom, 0.5, 1.0) ==
        doctest::Approx(0.5).epsilon(1e-12));
  SUBCASE("limits agree with the finite-modulation rate at V_M = 1e8") {
    for (const auto variant : {OneWayVariant::dr_hom, OneWayVariant::dr_het,
                               OneWayVariant::rr_hom, OneWayVariant::rr_het}) {
      OneWaySpec spec;
      spec.detection = (variant == OneWayVariant::dr_hom || variant == OneWayVariant::rr_hom)
                           ? Detection::homodyne
                           : Detection::heterodyne;
      spec.direction = (variant == OneWayVariant::dr_hom || variant == OneWayVariant::dr_het)
                           ? Direction::direct
                           : Direction::reverse;
      spec.v_mod = 1e8;
      for (double tau = 0.05; tau <= 0.951; tau += 0.15) {
        for (double w : {1.0, 1.2, 1.5}) {
          const double closed = keyrate_infinite_modulation(variant, tau, w);
          const double numeric = keyrate_oneway(spec, {tau, w}).rate;
          CHECK(std::abs(closed - numeric) < 1e-3);
        }
      }
    }
  }
}

TEST_CASE("security threshold") {
  OneWaySpec spec;
  spec.v_mod = 1e4;
  SUBCASE("direct reconciliation below 3 dB is insecure") {
    spec.direction = Direction::direct;
    spec.detection = Detection::homodyne;
    const ThresholdResult t = security_threshold(spec, 0.45);
    CHECK(t.eps_max == 0.0);
  }
  SUBCASE("reverse reconciliation near tau = 1 tolerates noise") {
    spec.direction = Direction::reverse;
    spec.detection = Detection::homodyne;
    const ThresholdResult t = security_threshold(spec, 0.95);
    CHECK(t.eps_max > 0.0);
    CHECK(t.bracketed);
    const double residual =
        keyrate_oneway(spec, LossyChannel::from_excess_noise(0.95, t.eps_max)).rate;
    CHECK(std::abs(residual) < 1e-9);
  }
}

TEST_CASE("thermal photon number") {
  CHECK(thermal_photons_from_frequency(1e30, 300.0) == 0.0);
  // hf = kB T ln 2  =>  nbar = 1
  const double f = std::log(2.0) * 1.380649e-23 * 300.0 / 6.62607015e-34;
  CHECK(thermal_photons_from_frequency(f, 300.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(thermal_photons_from_frequency(5e9, 300.0) ==
        doctest::Approx(1.2496e3).epsilon(1e-3));
}

}  // TEST_SUITE
