// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include "newtonpoly/simd/kernels.hpp"

#include <immintrin.h>

#include <cmath>
#include <numbers>

namespace npoly::simd {

namespace {

// Cephes minimax coefficients on [-pi/4, pi/4].
constexpr double kSin[6] = {1.58962301576546568060e-10, -2.50507477628578072866e-8, 2.75573136213857245213e-6,
                            -1.98412698295895385996e-4, 8.33333333332211858878e-3,  -1.66666666666666307295e-1};
constexpr double kCos[6] = {-1.13585365213876817300e-11, 2.08757008419747316778e-9, -2.75573141792967388112e-7,
                            2.48015872888517045348e-5,   -1.38888888888730564116e-3, 4.16666666666665929218e-2};
// pi/2 split in three parts; the first two have trailing zero bits so j * part is exact.
constexpr double kPio2a = 1.57079625129699707031e0;
constexpr double kPio2b = 7.54978941586159635336e-8;
constexpr double kPio2c = 5.39030285815811905290e-15;

inline __m256d poly6(__m256d z, const double* c) {
  __m256d y = _mm256_set1_pd(c[0]);
  for (int i = 1; i < 6; ++i) y = _mm256_fmadd_pd(y, z, _mm256_set1_pd(c[i]));
  return y;
}

inline void sincos4(__m256d x, __m256d& s_out, __m256d& c_out) {
  const __m256d j = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(2.0 / std::numbers::pi)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(j, _mm256_set1_pd(kPio2a), x);
  r = _mm256_fnmadd_pd(j, _mm256_set1_pd(kPio2b), r);
  r = _mm256_fnmadd_pd(j, _mm256_set1_pd(kPio2c), r);

  const __m256d z = _mm256_mul_pd(r, r);
  const __m256d sr = _mm256_fmadd_pd(_mm256_mul_pd(r, z), poly6(z, kSin), r);
  __m256d cr = _mm256_fnmadd_pd(_mm256_set1_pd(0.5), z, _mm256_set1_pd(1.0));
  cr = _mm256_fmadd_pd(_mm256_mul_pd(z, z), poly6(z, kCos), cr);

  const __m256i q = _mm256_cvtepi32_epi64(_mm256_cvtpd_epi32(j));
  const __m256i one = _mm256_set1_epi64x(1);
  const __m256i two = _mm256_set1_epi64x(2);
  const __m256d swap = _mm256_castsi256_pd(_mm256_cmpeq_epi64(_mm256_and_si256(q, one), one));
  const __m256d s_sign = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_and_si256(q, two), 62));
  const __m256d c_sign = _mm256_castsi256_pd(_mm256_slli_epi64(_mm256_and_si256(_mm256_add_epi64(q, one), two), 62));
  s_out = _mm256_xor_pd(_mm256_blendv_pd(sr, cr, swap), s_sign);
  c_out = _mm256_xor_pd(_mm256_blendv_pd(cr, sr, swap), c_sign);
}

inline double hsum(__m256d v) {
  alignas(32) double t[4];
  _mm256_store_pd(t, v);
  return (t[0] + t[1]) + (t[2] + t[3]);
}

void eval_poly_avx2(const MonomialTable& p, const double* const* coords, std::size_t count, double* out) {
  const std::size_t n = p.n;
  const std::size_t T = p.terms();
  __m256d pw[kMaxVars][kMaxExponent + 1];
  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    for (std::size_t i = 0; i < n; ++i) {
      const __m256d xi = _mm256_loadu_pd(coords[i] + k);
      pw[i][0] = _mm256_set1_pd(1.0);
      for (int e = 1; e <= p.max_exp; ++e) pw[i][e] = _mm256_mul_pd(pw[i][e - 1], xi);
    }
    __m256d sum = _mm256_setzero_pd();
    for (std::size_t t = 0; t < T; ++t) {
      __m256d m = _mm256_set1_pd(p.coef[t]);
      for (std::size_t i = 0; i < n; ++i) m = _mm256_mul_pd(m, pw[i][p.exps[t * n + i]]);
      sum = _mm256_add_pd(sum, m);
    }
    _mm256_storeu_pd(out + k, sum);
  }
  if (k < count) {
    const double* tail[kMaxVars];
    for (std::size_t i = 0; i < n; ++i) tail[i] = coords[i] + k;
    scalar_kernels().eval_poly(p, tail, count - k, out + k);
  }
}

PhaseSum phase_sum_avx2(const double* phase, const double* weight, std::size_t count) {
  __m256d re = _mm256_setzero_pd(), im = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    __m256d s, c;
    sincos4(_mm256_loadu_pd(phase + k), s, c);
    const __m256d w = _mm256_loadu_pd(weight + k);
    re = _mm256_fmadd_pd(w, c, re);
    im = _mm256_fmadd_pd(w, s, im);
  }
  PhaseSum out{hsum(re), hsum(im)};
  for (; k < count; ++k) {
    out.re += weight[k] * std::cos(phase[k]);
    out.im += weight[k] * std::sin(phase[k]);
  }
  return out;
}

void sincos_avx2(const double* x, std::size_t count, double* s, double* c) {
  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    __m256d sv, cv;
    sincos4(_mm256_loadu_pd(x + k), sv, cv);
    _mm256_storeu_pd(s + k, sv);
    _mm256_storeu_pd(c + k, cv);
  }
  for (; k < count; ++k) {
    s[k] = std::sin(x[k]);
    c[k] = std::cos(x[k]);
  }
}

void bump_avx2(const double* r2, std::size_t count, double radius, double* out) {
  const __m256d half = _mm256_set1_pd(0.5 * radius);
  const __m256d inv_half = _mm256_set1_pd(2.0 / radius);
  const __m256d zero = _mm256_setzero_pd(), one = _mm256_set1_pd(1.0);
  std::size_t k = 0;
  for (; k + 4 <= count; k += 4) {
    const __m256d rho = _mm256_sqrt_pd(_mm256_loadu_pd(r2 + k));
    __m256d t = _mm256_mul_pd(_mm256_sub_pd(rho, half), inv_half);
    t = _mm256_min_pd(_mm256_max_pd(t, zero), one);
    __m256d s, c;
    sincos4(_mm256_mul_pd(t, _mm256_set1_pd(std::numbers::pi)), s, c);
    const __m256d u = _mm256_mul_pd(_mm256_set1_pd(0.5), _mm256_sub_pd(one, c));
    __m256d h = _mm256_fmadd_pd(_mm256_set1_pd(-20.0), u, _mm256_set1_pd(70.0));
    h = _mm256_fmadd_pd(h, u, _mm256_set1_pd(-84.0));
    h = _mm256_fmadd_pd(h, u, _mm256_set1_pd(35.0));
    const __m256d u2 = _mm256_mul_pd(u, u);
    const __m256d smooth = _mm256_mul_pd(_mm256_mul_pd(u2, u2), h);
    _mm256_storeu_pd(out + k, _mm256_min_pd(_mm256_max_pd(_mm256_sub_pd(one, smooth), zero), one));
  }
  for (; k < count; ++k) out[k] = bump_profile(std::sqrt(r2[k]), radius);
}

}  // namespace

const KernelTable* avx2_table_impl() {
  static const KernelTable table{"avx2", eval_poly_avx2, phase_sum_avx2, sincos_avx2, bump_avx2};
  return &table;
}

}  // namespace npoly::simd
