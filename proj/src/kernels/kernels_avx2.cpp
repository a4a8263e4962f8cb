// AVX2 kernel variants.  Compiled with -mavx2 -mfma; callers reach this table
// only after a runtime cpuid check (see kernels.cpp).

#include "polywalk/kernels.hpp"

#include <cmath>
#include <immintrin.h>
#include <numbers>

namespace polywalk::kernels::detail {

namespace {

inline double reduce1(double x, double p, double invp) {
  double q = std::floor(x * invp);
  double r = x - q * p;
  if (r < 0) r += p;
  if (r >= p) r -= p;
  return r;
}

// x mod p for exact integer x below 2^53 held in each lane.
inline __m256d reduce4(__m256d x, __m256d p, __m256d invp) {
  const __m256d zero = _mm256_setzero_pd();
  __m256d q = _mm256_floor_pd(_mm256_mul_pd(x, invp));
  __m256d r = _mm256_fnmadd_pd(q, p, x);
  r = _mm256_add_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, zero, _CMP_LT_OQ), p));
  r = _mm256_sub_pd(r, _mm256_and_pd(_mm256_cmp_pd(r, p, _CMP_GE_OQ), p));
  return r;
}

void dot_mod_avx2(const double* const* cols, const double* coeffs,
                  std::size_t ncols, std::size_t n, double p, double* out) {
  const double invp = 1.0 / p;
  const __m256d vp = _mm256_set1_pd(p);
  const __m256d vinvp = _mm256_set1_pd(invp);
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) _mm256_storeu_pd(out + i, _mm256_setzero_pd());
  for (std::size_t i = n4; i < n; ++i) out[i] = 0.0;
  for (std::size_t j = 0; j < ncols; ++j) {
    const double c = coeffs[j];
    if (c == 0.0) continue;
    const __m256d vc = _mm256_set1_pd(c);
    const double* x = cols[j];
    for (std::size_t i = 0; i < n4; i += 4) {
      __m256d acc = _mm256_loadu_pd(out + i);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(vc, _mm256_loadu_pd(x + i)));
      _mm256_storeu_pd(out + i, reduce4(acc, vp, vinvp));
    }
    for (std::size_t i = n4; i < n; ++i) out[i] = reduce1(out[i] + c * x[i], p, invp);
  }
}

void row_axpy_mod_avx2(double* dst, const double* src, double f, double p,
                       std::size_t n) {
  const double invp = 1.0 / p;
  const __m256d vp = _mm256_set1_pd(p);
  const __m256d vinvp = _mm256_set1_pd(invp);
  const __m256d vf = _mm256_set1_pd(f);
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d d = _mm256_loadu_pd(dst + i);
    d = _mm256_add_pd(d, _mm256_mul_pd(vf, _mm256_loadu_pd(src + i)));
    _mm256_storeu_pd(dst + i, reduce4(d, vp, vinvp));
  }
  for (std::size_t i = n4; i < n; ++i) dst[i] = reduce1(dst[i] + f * src[i], p, invp);
}

void mul_mod_avx2(double* dst, const double* src, double p, std::size_t n) {
  const double invp = 1.0 / p;
  const __m256d vp = _mm256_set1_pd(p);
  const __m256d vinvp = _mm256_set1_pd(invp);
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d d = _mm256_mul_pd(_mm256_loadu_pd(dst + i), _mm256_loadu_pd(src + i));
    _mm256_storeu_pd(dst + i, reduce4(d, vp, vinvp));
  }
  for (std::size_t i = n4; i < n; ++i) dst[i] = reduce1(dst[i] * src[i], p, invp);
}

void add_mod_avx2(double* dst, const double* src, double p, std::size_t n) {
  const __m256d vp = _mm256_set1_pd(p);
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d s = _mm256_add_pd(_mm256_loadu_pd(dst + i), _mm256_loadu_pd(src + i));
    s = _mm256_sub_pd(s, _mm256_and_pd(_mm256_cmp_pd(s, vp, _CMP_GE_OQ), vp));
    _mm256_storeu_pd(dst + i, s);
  }
  for (std::size_t i = n4; i < n; ++i) {
    double s = dst[i] + src[i];
    if (s >= p) s -= p;
    dst[i] = s;
  }
}

void gather_sum_avx2(const double* idx, std::size_t n, const double* tab_re,
                     const double* tab_im, double* re, double* im) {
  __m256d sr = _mm256_setzero_pd();
  __m256d si = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m128i k = _mm256_cvttpd_epi32(_mm256_loadu_pd(idx + i));
    sr = _mm256_add_pd(sr, _mm256_i32gather_pd(tab_re, k, 8));
    si = _mm256_add_pd(si, _mm256_i32gather_pd(tab_im, k, 8));
  }
  alignas(32) double lr[4], li[4];
  _mm256_store_pd(lr, sr);
  _mm256_store_pd(li, si);
  double r = (lr[0] + lr[1]) + (lr[2] + lr[3]);
  double ii = (li[0] + li[1]) + (li[2] + li[3]);
  for (std::size_t i = n4; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(idx[i]);
    r += tab_re[k];
    ii += tab_im[k];
  }
  *re = r;
  *im = ii;
}

void gather_axpy_avx2(const double* idx, std::size_t n, const double* tab_re,
                      const double* tab_im, double w_re, double w_im,
                      double* acc_re, double* acc_im) {
  const __m256d wr = _mm256_set1_pd(w_re);
  const __m256d wi = _mm256_set1_pd(w_im);
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    const __m128i k = _mm256_cvttpd_epi32(_mm256_loadu_pd(idx + i));
    const __m256d tr = _mm256_i32gather_pd(tab_re, k, 8);
    const __m256d ti = _mm256_i32gather_pd(tab_im, k, 8);
    __m256d ar = _mm256_loadu_pd(acc_re + i);
    __m256d ai = _mm256_loadu_pd(acc_im + i);
    ar = _mm256_add_pd(ar, _mm256_fmsub_pd(wr, tr, _mm256_mul_pd(wi, ti)));
    ai = _mm256_add_pd(ai, _mm256_fmadd_pd(wr, ti, _mm256_mul_pd(wi, tr)));
    _mm256_storeu_pd(acc_re + i, ar);
    _mm256_storeu_pd(acc_im + i, ai);
  }
  for (std::size_t i = n4; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(idx[i]);
    const double tr = tab_re[k];
    const double ti = tab_im[k];
    acc_re[i] += w_re * tr - w_im * ti;
    acc_im[i] += w_re * ti + w_im * tr;
  }
}

// sin/cos minimax polynomials on [-pi/4, pi/4] (Cephes coefficients).
inline __m256d sin_poly(__m256d x, __m256d z) {
  __m256d p = _mm256_set1_pd(1.58962301576546568060e-10);
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(-2.50507477628578072866e-8));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(2.75573136213857245213e-6));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(-1.98412698295895385996e-4));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(8.33333333332211858878e-3));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(-1.66666666666666307295e-1));
  return _mm256_fmadd_pd(_mm256_mul_pd(x, z), p, x);
}

inline __m256d cos_poly(__m256d z) {
  __m256d p = _mm256_set1_pd(-1.13585365213876817300e-11);
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(2.08757008419747316778e-9));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(-2.75573141792967388112e-7));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(2.48015872888517179954e-5));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(-1.38888888888730564116e-3));
  p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(4.16666666666665929218e-2));
  __m256d r = _mm256_fnmadd_pd(z, _mm256_set1_pd(0.5), _mm256_set1_pd(1.0));
  return _mm256_fmadd_pd(_mm256_mul_pd(z, z), p, r);
}

void phase_sum_avx2(const double* turns, std::size_t n, double* re, double* im) {
  const __m256d two_pi = _mm256_set1_pd(2.0 * std::numbers::pi);
  const __m256d quarter = _mm256_set1_pd(0.25);
  __m256d acc_c = _mm256_setzero_pd();
  __m256d acc_s = _mm256_setzero_pd();
  const std::size_t n4 = n & ~std::size_t(3);
  for (std::size_t i = 0; i < n4; i += 4) {
    __m256d t = _mm256_loadu_pd(turns + i);
    // u in [-1/2, 1/2]; q in {-2,...,2} selects the quadrant.
    __m256d u = _mm256_sub_pd(
        t, _mm256_round_pd(t, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC));
    __m256d q = _mm256_round_pd(_mm256_mul_pd(u, _mm256_set1_pd(4.0)),
                                _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(q, quarter, u);
    __m256d x = _mm256_mul_pd(r, two_pi);  // in [-pi/4, pi/4]
    __m256d z = _mm256_mul_pd(x, x);
    __m256d sr = sin_poly(x, z);
    __m256d cr = cos_poly(z);

    const __m256d m1 = _mm256_cmp_pd(q, _mm256_set1_pd(1.0), _CMP_EQ_OQ);
    const __m256d m3 = _mm256_cmp_pd(q, _mm256_set1_pd(-1.0), _CMP_EQ_OQ);
    const __m256d m2 = _mm256_or_pd(
        _mm256_cmp_pd(q, _mm256_set1_pd(2.0), _CMP_EQ_OQ),
        _mm256_cmp_pd(q, _mm256_set1_pd(-2.0), _CMP_EQ_OQ));
    const __m256d nsr = _mm256_sub_pd(_mm256_setzero_pd(), sr);
    const __m256d ncr = _mm256_sub_pd(_mm256_setzero_pd(), cr);

    __m256d s = sr;
    __m256d c = cr;
    s = _mm256_blendv_pd(s, cr, m1);
    c = _mm256_blendv_pd(c, nsr, m1);
    s = _mm256_blendv_pd(s, nsr, m2);
    c = _mm256_blendv_pd(c, ncr, m2);
    s = _mm256_blendv_pd(s, ncr, m3);
    c = _mm256_blendv_pd(c, sr, m3);

    acc_c = _mm256_add_pd(acc_c, c);
    acc_s = _mm256_add_pd(acc_s, s);
  }
  alignas(32) double lc[4], ls[4];
  _mm256_store_pd(lc, acc_c);
  _mm256_store_pd(ls, acc_s);
  double cr = (lc[0] + lc[1]) + (lc[2] + lc[3]);
  double sr = (ls[0] + ls[1]) + (ls[2] + ls[3]);
  for (std::size_t i = n4; i < n; ++i) {
    const double u = turns[i] - std::nearbyint(turns[i]);
    const double a = 2.0 * std::numbers::pi * u;
    cr += std::cos(a);
    sr += std::sin(a);
  }
  *re = cr;
  *im = sr;
}

const Ops kAvx2 = {
    "avx2",       dot_mod_avx2,    row_axpy_mod_avx2, mul_mod_avx2,
    add_mod_avx2, gather_sum_avx2, gather_axpy_avx2,  phase_sum_avx2,
};

}  // namespace

const Ops* avx2_ops_table() { return &kAvx2; }

}  // namespace polywalk::kernels::detail
