#include <algorithm>
#include <cstring>

#include "su11/kernels.hpp"

namespace su11::kernels::detail {

namespace {

void matmul_d_scalar(const double* a, const double* b, double* c,
                     std::size_t m, std::size_t k, std::size_t n) {
  std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    const double* arow = a + i * k;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double av = arow[kk];
      const double* brow = b + kk * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

void matmul_z_scalar(const cplx* a, const cplx* b, cplx* c, std::size_t m,
                     std::size_t k, std::size_t n) {
  std::fill(c, c + m * n, cplx{});
  for (std::size_t i = 0; i < m; ++i) {
    cplx* crow = c + i * n;
    const cplx* arow = a + i * k;
    for (std::size_t kk = 0; kk < k; ++kk) {
      const double ar = arow[kk].real(), ai = arow[kk].imag();
      const double* br = reinterpret_cast<const double*>(b + kk * n);
      double* cr = reinterpret_cast<double*>(crow);
      for (std::size_t j = 0; j < n; ++j) {
        const double xr = br[2 * j], xi = br[2 * j + 1];
        cr[2 * j] += ar * xr - ai * xi;
        cr[2 * j + 1] += ar * xi + ai * xr;
      }
    }
  }
}

void axpy_d_scalar(double s, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += s * x[i];
}

void axpy_z_scalar(cplx s, const cplx* x, cplx* y, std::size_t n) {
  const double sr = s.real(), si = s.imag();
  const double* xr = reinterpret_cast<const double*>(x);
  double* yr = reinterpret_cast<double*>(y);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = xr[2 * i], b = xr[2 * i + 1];
    yr[2 * i] += sr * a - si * b;
    yr[2 * i + 1] += sr * b + si * a;
  }
}

cplx weighted_dot_scalar(const double* w, const cplx* f, const cplx* g,
                         std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double fr = f[i].real(), fi = f[i].imag();
    const double gr = g[i].real(), gi = g[i].imag();
    re += w[i] * (fr * gr + fi * gi);
    im += w[i] * (fr * gi - fi * gr);
  }
  return {re, im};
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{matmul_d_scalar, matmul_z_scalar,
                                 axpy_d_scalar, axpy_z_scalar,
                                 weighted_dot_scalar};
  return table;
}

}  // namespace su11::kernels::detail
