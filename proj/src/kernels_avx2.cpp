// AVX2/FMA variants of the dense kernels. This translation unit is compiled
// with -mavx2 -mfma; nothing here may execute unless the CPU reports AVX2+FMA
// (checked in avx2_table()).

#include "su11/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <algorithm>
#include <cstring>

namespace su11::kernels::detail {

namespace {

inline __m256d swap_pairs(__m256d v) { return _mm256_permute_pd(v, 0b0101); }

void matmul_d_avx2(const double* a, const double* b, double* c, std::size_t m,
                   std::size_t k, std::size_t n) {
  std::memset(c, 0, m * n * sizeof(double));
  const std::size_t n16 = n - n % 16;
  const std::size_t n4 = n - n % 4;
  for (std::size_t i = 0; i < m; ++i) {
    const double* arow = a + i * k;
    double* crow = c + i * n;
    for (std::size_t j = 0; j < n16; j += 16) {
      __m256d c0 = _mm256_loadu_pd(crow + j);
      __m256d c1 = _mm256_loadu_pd(crow + j + 4);
      __m256d c2 = _mm256_loadu_pd(crow + j + 8);
      __m256d c3 = _mm256_loadu_pd(crow + j + 12);
      for (std::size_t kk = 0; kk < k; ++kk) {
        const __m256d av = _mm256_set1_pd(arow[kk]);
        const double* brow = b + kk * n + j;
        c0 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow), c0);
        c1 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + 4), c1);
        c2 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + 8), c2);
        c3 = _mm256_fmadd_pd(av, _mm256_loadu_pd(brow + 12), c3);
      }
      _mm256_storeu_pd(crow + j, c0);
      _mm256_storeu_pd(crow + j + 4, c1);
      _mm256_storeu_pd(crow + j + 8, c2);
      _mm256_storeu_pd(crow + j + 12, c3);
    }
    for (std::size_t j = n16; j < n4; j += 4) {
      __m256d c0 = _mm256_loadu_pd(crow + j);
      for (std::size_t kk = 0; kk < k; ++kk)
        c0 = _mm256_fmadd_pd(_mm256_set1_pd(arow[kk]),
                             _mm256_loadu_pd(b + kk * n + j), c0);
      _mm256_storeu_pd(crow + j, c0);
    }
    for (std::size_t j = n4; j < n; ++j) {
      double s = crow[j];
      for (std::size_t kk = 0; kk < k; ++kk) s += arow[kk] * b[kk * n + j];
      crow[j] = s;
    }
  }
}

// Complex rows are treated as interleaved doubles; one __m256d holds two
// complex numbers. Real and imaginary FMA chains are accumulated separately
// and combined once per tile with addsub.
void matmul_z_avx2(const cplx* a, const cplx* b, cplx* c, std::size_t m,
                   std::size_t k, std::size_t n) {
  std::fill(c, c + m * n, cplx{});
  const std::size_t n8 = n - n % 8;  // complex elements per full tile
  const std::size_t n2 = n - n % 2;
  const double* bd = reinterpret_cast<const double*>(b);
  for (std::size_t i = 0; i < m; ++i) {
    const cplx* arow = a + i * k;
    double* crow = reinterpret_cast<double*>(c + i * n);
    for (std::size_t j = 0; j < n8; j += 8) {
      __m256d r0 = _mm256_setzero_pd(), s0 = _mm256_setzero_pd();
      __m256d r1 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
      __m256d r2 = _mm256_setzero_pd(), s2 = _mm256_setzero_pd();
      __m256d r3 = _mm256_setzero_pd(), s3 = _mm256_setzero_pd();
      for (std::size_t kk = 0; kk < k; ++kk) {
        const __m256d ar = _mm256_set1_pd(arow[kk].real());
        const __m256d ai = _mm256_set1_pd(arow[kk].imag());
        const double* brow = bd + 2 * (kk * n + j);
        __m256d b0 = _mm256_loadu_pd(brow);
        __m256d b1 = _mm256_loadu_pd(brow + 4);
        __m256d b2 = _mm256_loadu_pd(brow + 8);
        __m256d b3 = _mm256_loadu_pd(brow + 12);
        r0 = _mm256_fmadd_pd(ar, b0, r0);
        s0 = _mm256_fmadd_pd(ai, swap_pairs(b0), s0);
        r1 = _mm256_fmadd_pd(ar, b1, r1);
        s1 = _mm256_fmadd_pd(ai, swap_pairs(b1), s1);
        r2 = _mm256_fmadd_pd(ar, b2, r2);
        s2 = _mm256_fmadd_pd(ai, swap_pairs(b2), s2);
        r3 = _mm256_fmadd_pd(ar, b3, r3);
        s3 = _mm256_fmadd_pd(ai, swap_pairs(b3), s3);
      }
      double* cj = crow + 2 * j;
      _mm256_storeu_pd(cj, _mm256_addsub_pd(r0, s0));
      _mm256_storeu_pd(cj + 4, _mm256_addsub_pd(r1, s1));
      _mm256_storeu_pd(cj + 8, _mm256_addsub_pd(r2, s2));
      _mm256_storeu_pd(cj + 12, _mm256_addsub_pd(r3, s3));
    }
    for (std::size_t j = n8; j < n2; j += 2) {
      __m256d r0 = _mm256_setzero_pd(), s0 = _mm256_setzero_pd();
      for (std::size_t kk = 0; kk < k; ++kk) {
        const __m256d b0 = _mm256_loadu_pd(bd + 2 * (kk * n + j));
        r0 = _mm256_fmadd_pd(_mm256_set1_pd(arow[kk].real()), b0, r0);
        s0 = _mm256_fmadd_pd(_mm256_set1_pd(arow[kk].imag()), swap_pairs(b0),
                             s0);
      }
      _mm256_storeu_pd(crow + 2 * j, _mm256_addsub_pd(r0, s0));
    }
    for (std::size_t j = n2; j < n; ++j) {
      double re = 0.0, im = 0.0;
      for (std::size_t kk = 0; kk < k; ++kk) {
        const double ar = arow[kk].real(), ai = arow[kk].imag();
        const double xr = b[kk * n + j].real(), xi = b[kk * n + j].imag();
        re += ar * xr - ai * xi;
        im += ar * xi + ai * xr;
      }
      crow[2 * j] = re;
      crow[2 * j + 1] = im;
    }
  }
}

void axpy_d_avx2(double s, const double* x, double* y, std::size_t n) {
  const __m256d sv = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(sv, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += s * x[i];
}

void axpy_z_avx2(cplx s, const cplx* x, cplx* y, std::size_t n) {
  const __m256d sr = _mm256_set1_pd(s.real());
  const __m256d si = _mm256_set1_pd(s.imag());
  const double* xd = reinterpret_cast<const double*>(x);
  double* yd = reinterpret_cast<double*>(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d prod =
        _mm256_fmaddsub_pd(sr, xv, _mm256_mul_pd(si, swap_pairs(xv)));
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(_mm256_loadu_pd(yd + 2 * i),
                                               prod));
  }
  for (; i < n; ++i) y[i] += s * x[i];
}

cplx weighted_dot_avx2(const double* w, const cplx* f, const cplx* g,
                       std::size_t n) {
  const __m256d signflip = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
  __m256d acc = _mm256_setzero_pd();
  const double* fd = reinterpret_cast<const double*>(f);
  const double* gd = reinterpret_cast<const double*>(g);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d fv = _mm256_loadu_pd(fd + 2 * i);
    const __m256d gv = _mm256_loadu_pd(gd + 2 * i);
    const __m256d t1 = _mm256_mul_pd(fv, gv);
    const __m256d t2 =
        _mm256_xor_pd(_mm256_mul_pd(fv, swap_pairs(gv)), signflip);
    // [re0, im0, re1, im1]
    const __m256d h = _mm256_hadd_pd(t1, t2);
    const __m256d wv = _mm256_permute4x64_pd(
        _mm256_castpd128_pd256(_mm_loadu_pd(w + i)), 0x50);
    acc = _mm256_fmadd_pd(wv, h, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double re = lanes[0] + lanes[2];
  double im = lanes[1] + lanes[3];
  for (; i < n; ++i) {
    const double fr = f[i].real(), fi = f[i].imag();
    const double gr = g[i].real(), gi = g[i].imag();
    re += w[i] * (fr * gr + fi * gi);
    im += w[i] * (fr * gi - fi * gr);
  }
  return {re, im};
}

const KernelTable avx2_kernels{matmul_d_avx2, matmul_z_avx2, axpy_d_avx2,
                               axpy_z_avx2, weighted_dot_avx2};

}  // namespace

const KernelTable* avx2_table() {
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
    return &avx2_kernels;
  return nullptr;
}

}  // namespace su11::kernels::detail

#else

namespace su11::kernels::detail {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace su11::kernels::detail

#endif
