#include "cvqkd/kernels/kernels.hpp"

#include "../src/kernels/backend_scalar.hpp"
#include "../src/kernels/kernels_impl.hpp"

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

using namespace cvqkd;

namespace {

double lane(kernels::ScalarBackend::D d, int l) { return d.v[l]; }

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("owned log matches libm on the unit interval") {
  using B = kernels::ScalarBackend;
  double worst = 0.0;
  for (int i = 1; i <= 200000; ++i) {
    const double x = static_cast<double>(i) / 200000.0;
    const auto r = kernels::impl::log_unit<B>(B::dbroadcast(x));
    const double err = std::abs(lane(r, 0) - std::log(x));
    const double rel = err / std::max(std::abs(std::log(x)), 1e-30);
    worst = std::max(worst, std::min(rel, err));
  }
  CHECK(worst < 5e-14);
  // Smallest uniform the generator can produce.
  const auto r = kernels::impl::log_unit<B>(B::dbroadcast(0x1p-52));
  CHECK(lane(r, 0) == doctest::Approx(std::log(0x1p-52)).epsilon(1e-14));
}

TEST_CASE("owned sincos matches libm on [0, 1)") {
  using B = kernels::ScalarBackend;
  double worst = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double u = static_cast<double>(i) / 200000.0;
    B::D s, c;
    kernels::impl::sincos_twopi<B>(B::dbroadcast(u), s, c);
    const double theta = u * 6.283185307179586476925286766559;
    worst = std::max(worst, std::abs(lane(s, 0) - std::sin(theta)));
    worst = std::max(worst, std::abs(lane(c, 0) - std::cos(theta)));
  }
  CHECK(worst < 5e-14);
}

TEST_CASE("normal stream is deterministic and stream-separated") {
  std::vector<double> a(1001), b(1001), c(1001);
  kernels::fill_normals(42, 7, a.size(), a.data());
  kernels::fill_normals(42, 7, b.size(), b.data());
  kernels::fill_normals(42, 8, c.size(), c.data());
  CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
  int diff = 0;
  for (size_t i = 0; i < a.size(); ++i) diff += (a[i] != c[i]);
  CHECK(diff > 900);
}

TEST_CASE("scalar and avx2 backends agree bit for bit") {
  if (!kernels::avx2_available()) {
    MESSAGE("avx2 not available on this host; skipping equivalence check");
    return;
  }
  const size_t n = 100001;  // odd length exercises the tail path
  std::vector<double> s(n), v(n);
  kernels::fill_normals_with(kernels::Backend::scalar, 2024, 3, n, s.data());
  kernels::fill_normals_with(kernels::Backend::avx2, 2024, 3, n, v.data());
  CHECK(std::memcmp(s.data(), v.data(), n * sizeof(double)) == 0);

  std::vector<double> x(n), y(n);
  kernels::fill_normals(5, 0, n, x.data());
  kernels::fill_normals(5, 1, n, y.data());
  CHECK(kernels::sum_with(kernels::Backend::scalar, x.data(), n) ==
        kernels::sum_with(kernels::Backend::avx2, x.data(), n));
  CHECK(kernels::dot_with(kernels::Backend::scalar, x.data(), y.data(), n) ==
        kernels::dot_with(kernels::Backend::avx2, x.data(), y.data(), n));
  CHECK(kernels::sumsq_residual_with(kernels::Backend::scalar, x.data(), y.data(), 0.37, n) ==
        kernels::sumsq_residual_with(kernels::Backend::avx2, x.data(), y.data(), 0.37, n));
}

TEST_CASE("normal moments") {
  const size_t n = 4000000;
  std::vector<double> z(n);
  kernels::fill_normals(123, 0, n, z.data());
  double m1 = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : z) {
    m1 += x;
    m2 += x * x;
    m3 += x * x * x;
    m4 += x * x * x * x;
  }
  const double nd = static_cast<double>(n);
  m1 /= nd;
  m2 /= nd;
  m3 /= nd;
  m4 /= nd;
  CHECK(std::abs(m1) < 4.0 / std::sqrt(nd));
  CHECK(m2 == doctest::Approx(1.0).epsilon(0.005));
  CHECK(std::abs(m3) < 4.0 * std::sqrt(15.0 / nd));
  CHECK(m4 == doctest::Approx(3.0).epsilon(0.02));
  // CDF spot checks.
  size_t below0 = 0, below1 = 0;
  for (double x : z) {
    below0 += (x < 0.0);
    below1 += (x < 1.0);
  }
  CHECK(static_cast<double>(below0) / nd == doctest::Approx(0.5).epsilon(0.005));
  CHECK(static_cast<double>(below1) / nd == doctest::Approx(0.841345).epsilon(0.005));
}

TEST_CASE("reduction kernels match naive sums") {
  std::vector<double> x(1003), y(1003);
  kernels::fill_normals(9, 0, x.size(), x.data());
  kernels::fill_normals(9, 1, y.size(), y.data());
  double s = 0.0, d = 0.0, r = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    s += x[i];
    d += x[i] * y[i];
    const double t = x[i] - 0.25 * y[i];
    r += t * t;
  }
  CHECK(kernels::sum(x.data(), x.size()) == doctest::Approx(s).epsilon(1e-12));
  CHECK(kernels::dot(x.data(), y.data(), x.size()) == doctest::Approx(d).epsilon(1e-12));
  CHECK(kernels::sumsq_residual(x.data(), y.data(), 0.25, x.size()) ==
        doctest::Approx(r).epsilon(1e-12));
  CHECK(kernels::sumsq(x.data(), x.size()) ==
        doctest::Approx(kernels::dot(x.data(), x.data(), x.size())).epsilon(1e-15));
}

TEST_CASE("backend dispatch control") {
  kernels::force_backend(kernels::Backend::scalar);
  CHECK(kernels::active_backend() == kernels::Backend::scalar);
  kernels::reset_backend();
  if (kernels::avx2_available()) CHECK(kernels::active_backend() == kernels::Backend::avx2);
  CHECK(std::string(kernels::rng_algorithm()).find("philox") != std::string::npos);
}

}  // TEST_SUITE
