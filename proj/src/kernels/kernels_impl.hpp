#pragma once

#include <cstddef>
#include <cstdint>

// Backend-generic kernel bodies. A backend B supplies 4-lane types
// B::D (doubles), B::I (uint64 slots), B::M (lane masks) and the lane-wise
// operations used below. All arithmetic is plain IEEE add/sub/mul/div/sqrt,
// so every backend produces identical bits.
namespace cvqkd::kernels::impl {

// philox4x32-10 round constants (Salmon et al., SC'11).
inline constexpr std::uint64_t kPhiloxM0 = 0xD2511F53ull;
inline constexpr std::uint64_t kPhiloxM1 = 0xCD9E8D57ull;
inline constexpr std::uint64_t kWeyl0 = 0x9E3779B9ull;
inline constexpr std::uint64_t kWeyl1 = 0xBB67AE85ull;

template <class B>
struct Philox {
  using I = typename B::I;

  // One 10-round philox4x32 block on 4 independent counters per lane.
  static void block(I c0, I c1, I c2, I c3, std::uint64_t key_lo, std::uint64_t key_hi, I& r0,
                    I& r1, I& r2, I& r3) {
    I k0 = B::ibroadcast(key_lo & 0xFFFFFFFFull);
    I k1 = B::ibroadcast(key_hi & 0xFFFFFFFFull);
    const I m0 = B::ibroadcast(kPhiloxM0);
    const I m1 = B::ibroadcast(kPhiloxM1);
    const I w0 = B::ibroadcast(kWeyl0);
    const I w1 = B::ibroadcast(kWeyl1);
    const I mask32 = B::ibroadcast(0xFFFFFFFFull);
    for (int round = 0; round < 10; ++round) {
      const I p0 = B::imul32(m0, c0);  // full 64-bit product of low halves
      const I p1 = B::imul32(m1, c2);
      const I hi0 = B::isrl(p0, 32);
      const I lo0 = B::iand(p0, mask32);
      const I hi1 = B::isrl(p1, 32);
      const I lo1 = B::iand(p1, mask32);
      const I n0 = B::ixor(B::ixor(hi1, c1), k0);
      const I n2 = B::ixor(B::ixor(hi0, c3), k1);
      c0 = n0;
      c1 = lo1;
      c2 = n2;
      c3 = lo0;
      k0 = B::iand(B::iadd(k0, w0), mask32);
      k1 = B::iand(B::iadd(k1, w1), mask32);
    }
    r0 = c0;
    r1 = c1;
    r2 = c2;
    r3 = c3;
  }
};

// Exact u64 (< 2^52) -> double conversion via the 2^52 magic constant.
template <class B>
inline typename B::D small_u64_to_double(typename B::I x) {
  const auto magic_bits = B::ibroadcast(0x4330000000000000ull);
  const auto magic = B::bits_to_d(magic_bits);
  return B::sub(B::bits_to_d(B::ior(x, magic_bits)), magic);
}

// log(x) for x in (2^-60, 1]; fdlibm-style decomposition and polynomial.
template <class B>
inline typename B::D log_unit(typename B::D x) {
  using D = typename B::D;
  using I = typename B::I;
  const I bits = B::d_to_bits(x);
  // Unbiased exponent as a double.
  const I expo_raw = B::isrl(bits, 52);
  D e = B::sub(small_u64_to_double<B>(expo_raw), B::dbroadcast(1023.0));
  // Mantissa renormalized to [1, 2).
  const I mant = B::ior(B::iand(bits, B::ibroadcast(0x000FFFFFFFFFFFFFull)),
                        B::ibroadcast(0x3FF0000000000000ull));
  D f0 = B::bits_to_d(mant);
  // Shift to [sqrt(2)/2, sqrt(2)).
  const auto big = B::cmp_ge(f0, B::dbroadcast(1.4142135623730951));
  f0 = B::select(big, B::mul(f0, B::dbroadcast(0.5)), f0);
  e = B::select(big, B::add(e, B::dbroadcast(1.0)), e);

  const D f = B::sub(f0, B::dbroadcast(1.0));
  const D s = B::div(f, B::add(B::dbroadcast(2.0), f));
  const D z = B::mul(s, s);
  const D w = B::mul(z, z);
  const D t1 = B::mul(
      w, B::add(B::dbroadcast(3.999999999940941908e-01),
                B::mul(w, B::add(B::dbroadcast(2.222219843214978396e-01),
                                 B::mul(w, B::dbroadcast(1.531383769920937332e-01))))));
  const D t2 = B::mul(
      z,
      B::add(B::dbroadcast(6.666666666666735130e-01),
             B::mul(w, B::add(B::dbroadcast(2.857142874366239149e-01),
                              B::mul(w, B::add(B::dbroadcast(1.818357216161805012e-01),
                                               B::mul(w, B::dbroadcast(
                                                             1.479819860511658591e-01))))))));
  const D big_r = B::add(t1, t2);
  const D hfsq = B::mul(B::dbroadcast(0.5), B::mul(f, f));
  const D ln2_hi = B::dbroadcast(6.93147180369123816490e-01);
  const D ln2_lo = B::dbroadcast(1.90821492927058770002e-10);
  // k*ln2_hi - ((hfsq - (s*(hfsq+R) + k*ln2_lo)) - f)
  const D inner = B::add(B::mul(s, B::add(hfsq, big_r)), B::mul(e, ln2_lo));
  return B::sub(B::mul(e, ln2_hi), B::sub(B::sub(hfsq, inner), f));
}

// sin/cos of 2*pi*u for u in [0, 1).
template <class B>
inline void sincos_twopi(typename B::D u, typename B::D& s_out, typename B::D& c_out) {
  using D = typename B::D;
  const D theta = B::mul(u, B::dbroadcast(6.283185307179586476925286766559));
  const D k = B::round_nearest(B::mul(theta, B::dbroadcast(0.63661977236758134308)));  // 2/pi
  // Two-term Cody-Waite reduction of pi/2.
  const D r0 = B::sub(theta, B::mul(k, B::dbroadcast(1.57079632679489655800e+00)));
  const D r = B::sub(r0, B::mul(k, B::dbroadcast(6.12323399573676603587e-17)));
  const D z = B::mul(r, r);

  D ps = B::dbroadcast(1.58969099521155010221e-10);
  ps = B::add(B::mul(ps, z), B::dbroadcast(-2.50507602534068634195e-08));
  ps = B::add(B::mul(ps, z), B::dbroadcast(2.75573137070700676789e-06));
  ps = B::add(B::mul(ps, z), B::dbroadcast(-1.98412698298579493134e-04));
  ps = B::add(B::mul(ps, z), B::dbroadcast(8.33333333332248946124e-03));
  ps = B::add(B::mul(ps, z), B::dbroadcast(-1.66666666666666324348e-01));
  const D sin_r = B::add(r, B::mul(B::mul(z, r), ps));

  D pc = B::dbroadcast(-1.13596475577881948265e-11);
  pc = B::add(B::mul(pc, z), B::dbroadcast(2.08757232129817482790e-09));
  pc = B::add(B::mul(pc, z), B::dbroadcast(-2.75573143513906633035e-07));
  pc = B::add(B::mul(pc, z), B::dbroadcast(2.48015872894767294178e-05));
  pc = B::add(B::mul(pc, z), B::dbroadcast(-1.38888888888741095749e-03));
  pc = B::add(B::mul(pc, z), B::dbroadcast(4.16666666666666019037e-02));
  const D cos_r =
      B::add(B::sub(B::dbroadcast(1.0), B::mul(B::dbroadcast(0.5), z)), B::mul(B::mul(z, z), pc));

  // Quadrant fix-up from k mod 4.
  const D k2 = B::sub(k, B::mul(B::dbroadcast(2.0), B::floor(B::mul(k, B::dbroadcast(0.5)))));
  const D k4 = B::sub(k, B::mul(B::dbroadcast(4.0), B::floor(B::mul(k, B::dbroadcast(0.25)))));
  const auto swap = B::cmp_ge(k2, B::dbroadcast(0.5));
  const auto sin_neg = B::cmp_ge(k4, B::dbroadcast(1.5));  // k4 in {2, 3}
  const auto cos_neg_a = B::cmp_ge(k4, B::dbroadcast(0.5));
  const auto cos_neg_b = B::cmp_ge(B::dbroadcast(2.5), k4);  // k4 <= 2
  D s = B::select(swap, cos_r, sin_r);
  D c = B::select(swap, sin_r, cos_r);
  s = B::select(sin_neg, B::sub(B::dbroadcast(0.0), s), s);
  c = B::select(B::mand(cos_neg_a, cos_neg_b), B::sub(B::dbroadcast(0.0), c), c);
  s_out = s;
  c_out = c;
}

// Fill out[0 .. n) with standard normals; counter index i produces the pair
// (out[2i], out[2i+1]).
template <class B>
void fill_normals(std::uint64_t seed, std::uint64_t stream, std::size_t n, double* out) {
  using D = typename B::D;
  using I = typename B::I;
  const std::uint64_t pairs = (n + 1) / 2;
  const std::uint64_t key_lo = seed & 0xFFFFFFFFull;
  const std::uint64_t key_hi = seed >> 32;
  const I c2 = B::ibroadcast(stream & 0xFFFFFFFFull);
  const I c3 = B::ibroadcast(stream >> 32);
  const I mask32b = B::ibroadcast(0xFFFFFFFFull);
  double pairbuf[8];
  for (std::uint64_t base = 0; base < pairs; base += 4) {
    const I idx = B::lane_offsets(base);  // base + (0, 1, 2, 3)
    const I c0 = B::iand(idx, mask32b);
    const I c1 = B::isrl(idx, 32);
    I r0, r1, r2, r3;
    Philox<B>::block(c0, c1, c2, c3, key_lo, key_hi, r0, r1, r2, r3);
    // 52-bit uniforms: u1 in (0, 1] for the log, u2 in [0, 1) for the phase.
    const I x1 = B::isrl(B::ior(B::isll32(r1), r0), 12);
    const I x2 = B::isrl(B::ior(B::isll32(r3), r2), 12);
    const D scale = B::dbroadcast(0x1p-52);
    const D u1 = B::mul(B::add(small_u64_to_double<B>(x1), B::dbroadcast(1.0)), scale);
    const D u2 = B::mul(small_u64_to_double<B>(x2), scale);
    const D radius = B::sqrt(B::mul(B::dbroadcast(-2.0), log_unit<B>(u1)));
    D s, c;
    sincos_twopi<B>(u2, s, c);
    const D z0 = B::mul(radius, c);
    const D z1 = B::mul(radius, s);
    B::store(pairbuf, z0);
    B::store(pairbuf + 4, z1);
    for (int lane = 0; lane < 4; ++lane) {
      const std::uint64_t pair = base + static_cast<std::uint64_t>(lane);
      if (pair >= pairs) break;
      out[2 * pair] = pairbuf[lane];
      if (2 * pair + 1 < n) out[2 * pair + 1] = pairbuf[4 + lane];
    }
  }
}

template <class B>
double sum(const double* x, std::size_t n) {
  using D = typename B::D;
  D acc = B::dbroadcast(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = B::add(acc, B::load(x + i));
  double lanes[4];
  B::store(lanes, acc);
  for (std::size_t j = i; j < n; ++j) lanes[j - i] += x[j];
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

template <class B>
double dot(const double* x, const double* y, std::size_t n) {
  using D = typename B::D;
  D acc = B::dbroadcast(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = B::add(acc, B::mul(B::load(x + i), B::load(y + i)));
  double lanes[4];
  B::store(lanes, acc);
  for (std::size_t j = i; j < n; ++j) lanes[j - i] += x[j] * y[j];
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

template <class B>
double sumsq_residual(const double* b, const double* m, double coeff, std::size_t n) {
  using D = typename B::D;
  const D cv = B::dbroadcast(coeff);
  D acc = B::dbroadcast(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const D t = B::sub(B::load(b + i), B::mul(cv, B::load(m + i)));
    acc = B::add(acc, B::mul(t, t));
  }
  double lanes[4];
  B::store(lanes, acc);
  for (std::size_t j = i; j < n; ++j) {
    const double t = b[j] - coeff * m[j];
    lanes[j - i] += t * t;
  }
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

}  // namespace cvqkd::kernels::impl
