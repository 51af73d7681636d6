#pragma once

#include <cmath>
#include <cstdint>
#include <cstring>

namespace cvqkd::kernels {

// 4-lane reference backend; plain IEEE scalar ops, one per lane.
struct ScalarBackend {
  struct D {
    double v[4];
  };
  struct I {
    std::uint64_t v[4];
  };
  using M = I;  // all-ones / all-zero lane masks

  static D dbroadcast(double x) { return {x, x, x, x}; }
  static I ibroadcast(std::uint64_t x) { return {x, x, x, x}; }
  static I lane_offsets(std::uint64_t base) { return {base, base + 1, base + 2, base + 3}; }

  static D load(const double* p) { return {p[0], p[1], p[2], p[3]}; }
  static void store(double* p, D a) { std::memcpy(p, a.v, sizeof(a.v)); }

#define CVQKD_LANEWISE(name, expr)                        \
  static D name(D a, D b) {                               \
    D r;                                                  \
    for (int l = 0; l < 4; ++l) r.v[l] = (expr);          \
    return r;                                             \
  }
  CVQKD_LANEWISE(add, a.v[l] + b.v[l])
  CVQKD_LANEWISE(sub, a.v[l] - b.v[l])
  CVQKD_LANEWISE(mul, a.v[l] * b.v[l])
  CVQKD_LANEWISE(div, a.v[l] / b.v[l])
#undef CVQKD_LANEWISE

  static D sqrt(D a) {
    D r;
    for (int l = 0; l < 4; ++l) r.v[l] = std::sqrt(a.v[l]);
    return r;
  }
  static D round_nearest(D a) {
    D r;
    for (int l = 0; l < 4; ++l) r.v[l] = std::nearbyint(a.v[l]);
    return r;
  }
  static D floor(D a) {
    D r;
    for (int l = 0; l < 4; ++l) r.v[l] = std::floor(a.v[l]);
    return r;
  }

  static M cmp_ge(D a, D b) {
    M m;
    for (int l = 0; l < 4; ++l) m.v[l] = (a.v[l] >= b.v[l]) ? ~0ull : 0ull;
    return m;
  }
  static M mand(M a, M b) {
    M m;
    for (int l = 0; l < 4; ++l) m.v[l] = a.v[l] & b.v[l];
    return m;
  }
  static D select(M m, D a, D b) {
    I ab = d_to_bits(a), bb = d_to_bits(b), r;
    for (int l = 0; l < 4; ++l) r.v[l] = (ab.v[l] & m.v[l]) | (bb.v[l] & ~m.v[l]);
    return bits_to_d(r);
  }

  static I d_to_bits(D a) {
    I r;
    std::memcpy(r.v, a.v, sizeof(r.v));
    return r;
  }
  static D bits_to_d(I a) {
    D r;
    std::memcpy(r.v, a.v, sizeof(r.v));
    return r;
  }

  static I iand(I a, I b) {
    I r;
    for (int l = 0; l < 4; ++l) r.v[l] = a.v[l] & b.v[l];
    return r;
  }
  static I ior(I a, I b) {
    I r;
    for (int l = 0; l < 4; ++l) r.v[l] = a.v[l] | b.v[l];
    return r;
  }
  static I ixor(I a, I b) {
    I r;
    for (int l = 0; l < 4; ++l) r.v[l] = a.v[l] ^ b.v[l];
    return r;
  }
  static I iadd(I a, I b) {
    I r;
    for (int l = 0; l < 4; ++l) r.v[l] = a.v[l] + b.v[l];
    return r;
  }
  static I isrl(I a, int s) {
    I r;
    for (int l = 0; l < 4; ++l) r.v[l] = a.v[l] >> s;
    return r;
  }
  static I isll32(I a) {
    I r;
    for (int l = 0; l < 4; ++l) r.v[l] = a.v[l] << 32;
    return r;
  }
  // 64-bit product of the low 32 bits of each slot.
  static I imul32(I a, I b) {
    I r;
    for (int l = 0; l < 4; ++l)
      r.v[l] = (a.v[l] & 0xFFFFFFFFull) * (b.v[l] & 0xFFFFFFFFull);
    return r;
  }
};

}  // namespace cvqkd::kernels
