#pragma once

#include <cstddef>
#include <cstdint>

// Sampling and reduction kernels behind the Monte Carlo module. A scalar
// reference implementation and an AVX2 variant produce bit-identical
// results: both run the same operation sequence (no FMA contraction, same
// 4-lane accumulation pattern), and the normal generator is counter-based
// (philox4x32-10 + Box-Muller with in-house log/sincos), so a stream is a
// pure function of (seed, stream, index).
namespace cvqkd::kernels {

enum class Backend { scalar, avx2 };

// Name of the generator recorded in run metadata.
const char* rng_algorithm();

bool avx2_available();
Backend active_backend();
// Override the dispatch (tests); throws if the backend is unavailable.
void force_backend(Backend b);
void reset_backend();

// n standard normals for (seed, stream), deterministic and
// backend-invariant.
void fill_normals(std::uint64_t seed, std::uint64_t stream, std::size_t n, double* out);

// Fixed-order reductions (lane-strided partial sums, combined as
// (a0+a1)+(a2+a3)).
double sum(const double* x, std::size_t n);
double dot(const double* x, const double* y, std::size_t n);
double sumsq(const double* x, std::size_t n);
// sum over i of (b[i] - c*m[i])^2
double sumsq_residual(const double* b, const double* m, double c, std::size_t n);

// Per-backend entry points (equivalence tests).
void fill_normals_with(Backend b, std::uint64_t seed, std::uint64_t stream, std::size_t n,
                       double* out);
double sum_with(Backend b, const double* x, std::size_t n);
double dot_with(Backend b, const double* x, const double* y, std::size_t n);
double sumsq_residual_with(Backend b, const double* x, const double* m, double c, std::size_t n);

}  // namespace cvqkd::kernels
