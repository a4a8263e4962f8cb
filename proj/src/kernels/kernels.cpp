#include "polywalk/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <numbers>
#include <stdexcept>

namespace polywalk::kernels {

namespace {

// Exact for integer operands below 2^26: the product fits in 2^52 and the
// floor-division quotient can be off by at most one in either direction.
inline double reduce1(double x, double p, double invp) {
  double q = std::floor(x * invp);
  double r = x - q * p;
  if (r < 0) r += p;
  if (r >= p) r -= p;
  return r;
}

void dot_mod_scalar(const double* const* cols, const double* coeffs,
                    std::size_t ncols, std::size_t n, double p, double* out) {
  const double invp = 1.0 / p;
  for (std::size_t i = 0; i < n; ++i) out[i] = 0.0;
  for (std::size_t j = 0; j < ncols; ++j) {
    const double c = coeffs[j];
    if (c == 0.0) continue;
    const double* x = cols[j];
    for (std::size_t i = 0; i < n; ++i) out[i] = reduce1(out[i] + c * x[i], p, invp);
  }
}

void row_axpy_mod_scalar(double* dst, const double* src, double f, double p,
                         std::size_t n) {
  const double invp = 1.0 / p;
  for (std::size_t i = 0; i < n; ++i) dst[i] = reduce1(dst[i] + f * src[i], p, invp);
}

void mul_mod_scalar(double* dst, const double* src, double p, std::size_t n) {
  const double invp = 1.0 / p;
  for (std::size_t i = 0; i < n; ++i) dst[i] = reduce1(dst[i] * src[i], p, invp);
}

void add_mod_scalar(double* dst, const double* src, double p, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = dst[i] + src[i];
    if (s >= p) s -= p;
    dst[i] = s;
  }
}

void gather_sum_scalar(const double* idx, std::size_t n, const double* tab_re,
                       const double* tab_im, double* re, double* im) {
  double sr = 0.0, si = 0.0, cr = 0.0, ci = 0.0;  // Kahan carries
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(idx[i]);
    double y = tab_re[k] - cr;
    double t = sr + y;
    cr = (t - sr) - y;
    sr = t;
    y = tab_im[k] - ci;
    t = si + y;
    ci = (t - si) - y;
    si = t;
  }
  *re = sr;
  *im = si;
}

void gather_axpy_scalar(const double* idx, std::size_t n, const double* tab_re,
                        const double* tab_im, double w_re, double w_im,
                        double* acc_re, double* acc_im) {
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = static_cast<std::size_t>(idx[i]);
    const double tr = tab_re[k];
    const double ti = tab_im[k];
    acc_re[i] += w_re * tr - w_im * ti;
    acc_im[i] += w_re * ti + w_im * tr;
  }
}

void phase_sum_scalar(const double* turns, std::size_t n, double* re, double* im) {
  double sr = 0.0, si = 0.0, cr = 0.0, ci = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = turns[i] - std::nearbyint(turns[i]);
    const double a = 2.0 * std::numbers::pi * u;
    double y = std::cos(a) - cr;
    double t = sr + y;
    cr = (t - sr) - y;
    sr = t;
    y = std::sin(a) - ci;
    t = si + y;
    ci = (t - si) - y;
    si = t;
  }
  *re = sr;
  *im = si;
}

const Ops kScalar = {
    "scalar",     dot_mod_scalar,    row_axpy_mod_scalar, mul_mod_scalar,
    add_mod_scalar, gather_sum_scalar, gather_axpy_scalar,  phase_sum_scalar,
};

}  // namespace

const Ops& scalar_ops() { return kScalar; }

#if defined(POLYWALK_HAVE_AVX2)
namespace detail {
const Ops* avx2_ops_table();  // kernels_avx2.cpp
}
#endif

const Ops* avx2_ops() {
#if defined(POLYWALK_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return detail::avx2_ops_table();
#endif
  return nullptr;
}

const Ops& ops() {
  static const Ops* selected = [] {
    const char* force = std::getenv("POLYWALK_KERNELS");
    if (force != nullptr) {
      if (std::strcmp(force, "scalar") == 0) return &kScalar;
      if (std::strcmp(force, "avx2") == 0) {
        const Ops* a = avx2_ops();
        if (a == nullptr)
          throw std::runtime_error("POLYWALK_KERNELS=avx2 but AVX2 is unavailable");
        return a;
      }
      if (std::strcmp(force, "auto") != 0)
        throw std::runtime_error("POLYWALK_KERNELS: expected scalar, avx2 or auto");
    }
    const Ops* a = avx2_ops();
    return a != nullptr ? a : &kScalar;
  }();
  return *selected;
}

}  // namespace polywalk::kernels
