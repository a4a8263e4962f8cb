#pragma once

#include <cstddef>
#include <cstdint>

namespace polywalk::kernels {

// Residues are carried in doubles so the same kernels serve scalar and SIMD
// paths.  Exactness requires every product a*b to stay below 2^53, hence the
// modulus bound 2^26.  Callers fall back to 64-bit scalar arithmetic above it.
inline constexpr std::uint64_t kMaxPrime = std::uint64_t(1) << 26;

struct Ops {
  const char* name;

  // out[i] = sum_j coeffs[j] * cols[j][i]  (mod p), reduced after every term.
  void (*dot_mod)(const double* const* cols, const double* coeffs,
                  std::size_t ncols, std::size_t n, double p, double* out);

  // dst[i] = (dst[i] + f * src[i]) mod p
  void (*row_axpy_mod)(double* dst, const double* src, double f, double p,
                       std::size_t n);

  // dst[i] = dst[i] * src[i] mod p
  void (*mul_mod)(double* dst, const double* src, double p, std::size_t n);

  // dst[i] = dst[i] + src[i] mod p
  void (*add_mod)(double* dst, const double* src, double p, std::size_t n);

  // (*re, *im) = sum_i table[idx[i]]; idx holds exact integers in [0, p).
  void (*gather_sum)(const double* idx, std::size_t n, const double* tab_re,
                     const double* tab_im, double* re, double* im);

  // acc[i] += w * table[idx[i]]  (complex multiply-accumulate per element)
  void (*gather_axpy)(const double* idx, std::size_t n, const double* tab_re,
                      const double* tab_im, double w_re, double w_im,
                      double* acc_re, double* acc_im);

  // (*re, *im) = sum_i exp(2*pi*i * turns[i])
  void (*phase_sum)(const double* turns, std::size_t n, double* re, double* im);
};

// Reference implementation (compensated summation for the accumulators).
const Ops& scalar_ops();

// AVX2 variants; nullptr when unsupported at build or run time.
const Ops* avx2_ops();

// Selected once per process: AVX2 when available, otherwise scalar.
// POLYWALK_KERNELS=scalar|avx2 forces a backend (avx2 throws if unavailable).
const Ops& ops();

}  // namespace polywalk::kernels
