#include "cvqkd/gaussian.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace cvqkd;

TEST_SUITE("gaussian") {

TEST_CASE("entropy_h values") {
  CHECK(entropy_h(1.0) == 0.0);
  CHECK(entropy_h(3.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(entropy_h(100.0) == doctest::Approx(std::log2(M_E * 50.0)).epsilon(1e-4));
  CHECK(std::abs(entropy_h(100.0) - std::log2(M_E * 50.0)) < 0.01);
  CHECK(entropy_h(1.0 - 0.5e-9) == 0.0);  // within slack, clamped
  CHECK_THROWS_AS(entropy_h(0.9), std::domain_error);
}

TEST_CASE("symplectic eigenvalues of simple states") {
  SUBCASE("single thermal mode") {
    MatrixXd m = MatrixXd::Zero(2, 2);
    m(0, 0) = m(1, 1) = 2.7;
    const auto spec = symplectic_eigenvalues(CovMatrix(m));
    REQUIRE(spec.values.size() == 1);
    CHECK(spec.values[0] == doctest::Approx(2.7).epsilon(1e-12));
  }
  SUBCASE("tmsv is pure") {
    for (double nu : {1.0, 2.0, 5.0, 37.5}) {
      const auto spec = symplectic_eigenvalues(tmsv_cm(nu));
      REQUIRE(spec.values.size() == 2);
      CHECK(spec.values[0] == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(spec.values[1] == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
  SUBCASE("product of thermal states") {
    MatrixXd m = MatrixXd::Zero(4, 4);
    m(0, 0) = m(1, 1) = 4.0;
    m(2, 2) = m(3, 3) = 1.5;
    const auto spec = symplectic_eigenvalues(CovMatrix(m));
    CHECK(spec.values[0] == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(spec.values[1] == doctest::Approx(1.5).epsilon(1e-12));
  }
}

TEST_CASE("two-mode closed form matches generic solver") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double tau = 0.02 + 0.96 * u(rng);
    const double w = 1.0 + 2.0 * u(rng);
    const double vm = 20.0 * u(rng);
    const double a = (1.0 - tau) * (vm + 1.0) + tau * w;
    const double c = std::sqrt(tau * (w * w - 1.0));
    MatrixXd m = MatrixXd::Zero(4, 4);
    m(0, 0) = m(1, 1) = a;
    m(2, 2) = m(3, 3) = w;
    m(0, 2) = m(2, 0) = c;
    m(1, 3) = m(3, 1) = -c;
    const auto spec = symplectic_eigenvalues(CovMatrix(m));
    const auto closed = two_mode_spectrum_closed(a, w, c);
    CHECK(std::abs(spec.values[0] - closed.first) < 1e-10);
    CHECK(std::abs(spec.values[1] - closed.second) < 1e-10);
  }
}

TEST_CASE("von Neumann entropy") {
  CHECK(von_neumann_entropy(CovMatrix(MatrixXd::Identity(2, 2))) == doctest::Approx(0.0));
  MatrixXd m = MatrixXd::Zero(2, 2);
  m(0, 0) = m(1, 1) = 3.0;
  CHECK(von_neumann_entropy(CovMatrix(m)) == doctest::Approx(2.0).epsilon(1e-12));
  for (double nu : {1.0, 2.0, 5.0, 50.0})
    CHECK(std::abs(von_neumann_entropy(tmsv_cm(nu))) < 1e-9);
}

TEST_CASE("homodyne conditioning") {
  SUBCASE("uncorrelated measurement is a no-op") {
    MatrixXd m = MatrixXd::Zero(4, 4);
    m(0, 0) = m(1, 1) = 1.8;
    m(2, 2) = m(3, 3) = 2.5;
    const CovMatrix out = condition_homodyne(CovMatrix(m), 1, Quadrature::q);
    CHECK(out.modes() == 1);
    CHECK(out(0, 0) == doctest::Approx(1.8));
    CHECK(out(1, 1) == doctest::Approx(1.8));
  }
  SUBCASE("tmsv kept mode") {
    const double nu = 3.2;
    const CovMatrix out = condition_homodyne(tmsv_cm(nu), 1, Quadrature::q);
    CHECK(out(0, 0) == doctest::Approx(1.0 / nu).epsilon(1e-12));
    CHECK(out(1, 1) == doctest::Approx(nu).epsilon(1e-12));
    const CovMatrix outp = condition_homodyne(tmsv_cm(nu), 1, Quadrature::p);
    CHECK(outp(0, 0) == doctest::Approx(nu).epsilon(1e-12));
    CHECK(outp(1, 1) == doctest::Approx(1.0 / nu).epsilon(1e-12));
  }
  SUBCASE("validity preserved on random states") {
    std::mt19937_64 rng(17);
    for (int i = 0; i < 2000; ++i) {
      const CovMatrix v = testutil::random_cov(rng, 3);
      const CovMatrix out = condition_homodyne(v, 2, Quadrature::q);
      CHECK(symplectic_eigenvalues(out).min() >= 1.0 - 1e-9);
    }
  }
}

TEST_CASE("heterodyne conditioning") {
  SUBCASE("tmsv collapses to vacuum") {
    const CovMatrix out = condition_heterodyne(tmsv_cm(4.4), 1);
    CHECK(out(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(out(0, 1)) < 1e-12);
  }
  SUBCASE("validity preserved on random states") {
    std::mt19937_64 rng(23);
    for (int i = 0; i < 2000; ++i) {
      const CovMatrix v = testutil::random_cov(rng, 2);
      const CovMatrix out = condition_heterodyne(v, 1);
      CHECK(symplectic_eigenvalues(out).min() >= 1.0 - 1e-9);
    }
  }
}

TEST_CASE("conditioning never raises the kept-block entropy") {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 1000; ++i) {
    const CovMatrix v = testutil::random_cov(rng, 2);
    const double s_marginal = von_neumann_entropy(v.marginal({0}));
    CHECK(von_neumann_entropy(condition_homodyne(v, 1, Quadrature::q)) <= s_marginal + 1e-9);
    CHECK(von_neumann_entropy(condition_heterodyne(v, 1)) <= s_marginal + 1e-9);
  }
}

TEST_CASE("apply_symplectic") {
  std::mt19937_64 rng(31);
  const CovMatrix v = testutil::random_cov(rng, 2);
  SUBCASE("identity") {
    const CovMatrix out = apply_symplectic(v, SymplecticMatrix(MatrixXd::Identity(4, 4)));
    CHECK((out.mat() - v.mat()).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("transparent beamsplitter") {
    const CovMatrix out = apply_symplectic(v, beamsplitter(1.0));
    CHECK((out.mat() - v.mat()).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("balanced beamsplitter keeps vacuum invariant") {
    const CovMatrix vac(MatrixXd::Identity(4, 4));
    const CovMatrix out = apply_symplectic(vac, beamsplitter(0.5));
    CHECK((out.mat() - MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("S then S^-1 is the identity") {
    for (int i = 0; i < 100; ++i) {
      const SymplecticMatrix s = testutil::random_symplectic(rng, 2);
      const CovMatrix round = apply_symplectic(apply_symplectic(v, s), s.inverse());
      CHECK((round.mat() - v.mat()).cwiseAbs().maxCoeff() < 1e-9);
    }
  }
  SUBCASE("spectrum invariant under symplectics") {
    for (int i = 0; i < 200; ++i) {
      const CovMatrix w = testutil::random_cov(rng, 2);
      const SymplecticMatrix s = testutil::random_symplectic(rng, 2);
      const auto before = symplectic_eigenvalues(w);
      const auto after = symplectic_eigenvalues(apply_symplectic(w, s));
      for (size_t k = 0; k < before.values.size(); ++k)
        CHECK(std::abs(before.values[k] - after.values[k]) < 1e-8);
    }
  }
}

TEST_CASE("builders") {
  CHECK((tmsv_cm(1.0).mat() - MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
  const SymplecticMatrix bs = beamsplitter(0.5);
  CHECK(bs.mat()(0, 2) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(bs.mat()(1, 3) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK((squeezer(0.0).mat() - MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS(tmsv_cm(0.9));
  CHECK_THROWS(beamsplitter(1.1));
  SUBCASE("builders always give valid CMs") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      CHECK(tmsv_cm(1.0 + 5.0 * u(rng)).is_physical());
      CHECK(testutil::random_cov(rng, 2).is_physical());
    }
  }
}

TEST_CASE("direct sums and embeddings") {
  const CovMatrix v = direct_sum({tmsv_cm(2.0), CovMatrix(MatrixXd::Identity(2, 2))});
  CHECK(v.modes() == 3);
  CHECK(v(0, 0) == 2.0);
  CHECK(v(4, 4) == 1.0);
  const SymplecticMatrix s = embed_symplectic(beamsplitter(0.3), {0, 2}, 3);
  CHECK(s.modes() == 3);
  CHECK(s.mat()(2, 2) == 1.0);  // untouched middle mode
}

TEST_CASE("williamson and purification") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 100; ++i) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const CovMatrix v = testutil::random_cov(rng, n);
    const WilliamsonForm wf = williamson(v);
    MatrixXd core = MatrixXd::Zero(2 * n, 2 * n);
    // williamson spectrum is sorted; the factor S carries the Schur order,
    // so rebuild the diagonal from S^-1 V S^-T instead.
    const MatrixXd sinv = wf.s.inverse().mat();
    const MatrixXd diag = sinv * v.mat() * sinv.transpose();
    core.diagonal() = diag.diagonal();
    CHECK((wf.s.mat() * core * wf.s.mat().transpose() - v.mat()).cwiseAbs().maxCoeff() < 1e-8);
    // Off-diagonal of the recovered Williamson form vanishes.
    CHECK((diag - MatrixXd(diag.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-8);

    const CovMatrix pure = purify(v);
    CHECK(pure.modes() == 2 * n);
    std::vector<int> first(n);
    for (int k = 0; k < n; ++k) first[k] = k;
    CHECK((pure.marginal(first).mat() - v.mat()).cwiseAbs().maxCoeff() < 1e-9);
    const auto spec = symplectic_eigenvalues(pure);
    CHECK(spec.max() <= 1.0 + 1e-7);
    CHECK(spec.min() >= 1.0 - 1e-7);
  }
}

TEST_CASE("uncertainty relation on random draws") {
  std::mt19937_64 rng(43);
  for (int i = 0; i < 2000; ++i) {
    const CovMatrix v = testutil::random_cov(rng, 1 + static_cast<int>(rng() % 3));
    CHECK(v.is_physical());
  }
}

TEST_CASE("error paths") {
  MatrixXd bad(4, 4);
  bad.setZero();
  bad(0, 1) = 1.0;  // not symmetric
  CHECK_THROWS_AS(CovMatrix{bad}, std::invalid_argument);
  MatrixXd notsymp = 2.0 * MatrixXd::Identity(4, 4);
  CHECK_THROWS_AS(SymplecticMatrix{notsymp}, std::invalid_argument);
  // measured quadrature with zero variance
  MatrixXd degen = MatrixXd::Identity(4, 4);
  degen(2, 2) = 0.0;
  CHECK_THROWS_AS(condition_homodyne(CovMatrix(degen), 1, Quadrature::q), std::runtime_error);
}

}  // TEST_SUITE
