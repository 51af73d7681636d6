#include "cvqkd/kernels/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace cvqkd::kernels {

void fill_normals_scalar(std::uint64_t, std::uint64_t, std::size_t, double*);
double sum_scalar(const double*, std::size_t);
double dot_scalar(const double*, const double*, std::size_t);
double sumsq_residual_scalar(const double*, const double*, double, std::size_t);

#if defined(__x86_64__) || defined(_M_X64)
#define CVQKD_HAVE_AVX2_TU 1
void fill_normals_avx2(std::uint64_t, std::uint64_t, std::size_t, double*);
double sum_avx2(const double*, std::size_t);
double dot_avx2(const double*, const double*, std::size_t);
double sumsq_residual_avx2(const double*, const double*, double, std::size_t);
#else
#define CVQKD_HAVE_AVX2_TU 0
#endif

namespace {

std::atomic<int> g_forced{-1};  // -1 auto, else Backend

Backend pick() {
  const int forced = g_forced.load(std::memory_order_relaxed);
  if (forced >= 0) return static_cast<Backend>(forced);
  return avx2_available() ? Backend::avx2 : Backend::scalar;
}

}  // namespace

const char* rng_algorithm() { return "philox4x32-10+box-muller"; }

bool avx2_available() {
#if CVQKD_HAVE_AVX2_TU && defined(__GNUC__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend active_backend() { return pick(); }

void force_backend(Backend b) {
  if (b == Backend::avx2 && !avx2_available())
    throw std::runtime_error("force_backend: avx2 unavailable");
  g_forced.store(static_cast<int>(b), std::memory_order_relaxed);
}

void reset_backend() { g_forced.store(-1, std::memory_order_relaxed); }

void fill_normals_with(Backend b, std::uint64_t seed, std::uint64_t stream, std::size_t n,
                       double* out) {
#if CVQKD_HAVE_AVX2_TU
  if (b == Backend::avx2) {
    if (!avx2_available()) throw std::runtime_error("avx2 backend unavailable");
    fill_normals_avx2(seed, stream, n, out);
    return;
  }
#endif
  fill_normals_scalar(seed, stream, n, out);
}

double sum_with(Backend b, const double* x, std::size_t n) {
#if CVQKD_HAVE_AVX2_TU
  if (b == Backend::avx2 && avx2_available()) return sum_avx2(x, n);
#endif
  return sum_scalar(x, n);
}

double dot_with(Backend b, const double* x, const double* y, std::size_t n) {
#if CVQKD_HAVE_AVX2_TU
  if (b == Backend::avx2 && avx2_available()) return dot_avx2(x, y, n);
#endif
  return dot_scalar(x, y, n);
}

double sumsq_residual_with(Backend b, const double* x, const double* m, double c, std::size_t n) {
#if CVQKD_HAVE_AVX2_TU
  if (b == Backend::avx2 && avx2_available()) return sumsq_residual_avx2(x, m, c, n);
#endif
  return sumsq_residual_scalar(x, m, c, n);
}

void fill_normals(std::uint64_t seed, std::uint64_t stream, std::size_t n, double* out) {
  fill_normals_with(pick(), seed, stream, n, out);
}

double sum(const double* x, std::size_t n) { return sum_with(pick(), x, n); }

double dot(const double* x, const double* y, std::size_t n) { return dot_with(pick(), x, y, n); }

double sumsq(const double* x, std::size_t n) { return dot_with(pick(), x, x, n); }

double sumsq_residual(const double* b, const double* m, double c, std::size_t n) {
  return sumsq_residual_with(pick(), b, m, c, n);
}

}  // namespace cvqkd::kernels
