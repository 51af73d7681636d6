#if defined(__x86_64__) || defined(_M_X64)

#include "backend_avx2.hpp"
#include "kernels_impl.hpp"

#include <cstddef>
#include <cstdint>

namespace cvqkd::kernels {

void fill_normals_avx2(std::uint64_t seed, std::uint64_t stream, std::size_t n, double* out) {
  impl::fill_normals<Avx2Backend>(seed, stream, n, out);
}
double sum_avx2(const double* x, std::size_t n) { return impl::sum<Avx2Backend>(x, n); }
double dot_avx2(const double* x, const double* y, std::size_t n) {
  return impl::dot<Avx2Backend>(x, y, n);
}
double sumsq_residual_avx2(const double* b, const double* m, double c, std::size_t n) {
  return impl::sumsq_residual<Avx2Backend>(b, m, c, n);
}

}  // namespace cvqkd::kernels

#endif
