#include "backend_scalar.hpp"
#include "kernels_impl.hpp"

#include <cstddef>
#include <cstdint>

namespace cvqkd::kernels {

void fill_normals_scalar(std::uint64_t seed, std::uint64_t stream, std::size_t n, double* out) {
  impl::fill_normals<ScalarBackend>(seed, stream, n, out);
}
double sum_scalar(const double* x, std::size_t n) { return impl::sum<ScalarBackend>(x, n); }
double dot_scalar(const double* x, const double* y, std::size_t n) {
  return impl::dot<ScalarBackend>(x, y, n);
}
double sumsq_residual_scalar(const double* b, const double* m, double c, std::size_t n) {
  return impl::sumsq_residual<ScalarBackend>(b, m, c, n);
}

}  // namespace cvqkd::kernels
