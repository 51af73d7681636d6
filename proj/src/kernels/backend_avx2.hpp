#pragma once

#include <immintrin.h>

#include <cstdint>

namespace cvqkd::kernels {

// AVX2 backend; 4 doubles / 4 uint64 slots per register.
struct Avx2Backend {
  using D = __m256d;
  using I = __m256i;
  using M = __m256d;  // compare results

  static D dbroadcast(double x) { return _mm256_set1_pd(x); }
  static I ibroadcast(std::uint64_t x) { return _mm256_set1_epi64x(static_cast<long long>(x)); }
  static I lane_offsets(std::uint64_t base) {
    return _mm256_add_epi64(ibroadcast(base), _mm256_setr_epi64x(0, 1, 2, 3));
  }

  static D load(const double* p) { return _mm256_loadu_pd(p); }
  static void store(double* p, D a) { _mm256_storeu_pd(p, a); }

  static D add(D a, D b) { return _mm256_add_pd(a, b); }
  static D sub(D a, D b) { return _mm256_sub_pd(a, b); }
  static D mul(D a, D b) { return _mm256_mul_pd(a, b); }
  static D div(D a, D b) { return _mm256_div_pd(a, b); }
  static D sqrt(D a) { return _mm256_sqrt_pd(a); }
  static D round_nearest(D a) {
    return _mm256_round_pd(a, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  }
  static D floor(D a) { return _mm256_floor_pd(a); }

  static M cmp_ge(D a, D b) { return _mm256_cmp_pd(a, b, _CMP_GE_OQ); }
  static M mand(M a, M b) { return _mm256_and_pd(a, b); }
  static D select(M m, D a, D b) { return _mm256_blendv_pd(b, a, m); }

  static I d_to_bits(D a) { return _mm256_castpd_si256(a); }
  static D bits_to_d(I a) { return _mm256_castsi256_pd(a); }

  static I iand(I a, I b) { return _mm256_and_si256(a, b); }
  static I ior(I a, I b) { return _mm256_or_si256(a, b); }
  static I ixor(I a, I b) { return _mm256_xor_si256(a, b); }
  static I iadd(I a, I b) { return _mm256_add_epi64(a, b); }
  static I isrl(I a, int s) { return _mm256_srli_epi64(a, s); }
  static I isll32(I a) { return _mm256_slli_epi64(a, 32); }
  static I imul32(I a, I b) { return _mm256_mul_epu32(a, b); }
};

}  // namespace cvqkd::kernels
