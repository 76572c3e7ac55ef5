#pragma once

#include <complex>
#include <cstddef>

// Dense inner-loop kernels behind the matrix exponentials and weighted
// inner products. Scalar reference implementations always exist; an AVX2
// variant is selected at runtime when the CPU supports it. The two backends
// are equivalence-tested against each other (tests/test_kernels.cpp).
namespace su11::kernels {

using cplx = std::complex<double>;

enum class Backend { scalar, avx2 };

Backend active_backend();
bool available(Backend b);
// Force a backend (used by the equivalence tests). Returns false and leaves
// the selection unchanged if the backend is unavailable on this CPU.
bool set_backend(Backend b);
const char* backend_name(Backend b);

// Row-major C (m x n) = A (m x k) * B (k x n). C is overwritten.
void matmul(const double* a, const double* b, double* c, std::size_t m,
            std::size_t k, std::size_t n);
void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t m,
            std::size_t k, std::size_t n);

// y += s * x
void axpy(double s, const double* x, double* y, std::size_t n);
void axpy(cplx s, const cplx* x, cplx* y, std::size_t n);

// sum_i w_i conj(f_i) g_i  (the Pascal-weighted inner product kernel)
cplx weighted_dot(const double* w, const cplx* f, const cplx* g,
                  std::size_t n);

namespace detail {

struct KernelTable {
  void (*matmul_d)(const double*, const double*, double*, std::size_t,
                   std::size_t, std::size_t);
  void (*matmul_z)(const cplx*, const cplx*, cplx*, std::size_t, std::size_t,
                   std::size_t);
  void (*axpy_d)(double, const double*, double*, std::size_t);
  void (*axpy_z)(cplx, const cplx*, cplx*, std::size_t);
  cplx (*weighted_dot)(const double*, const cplx*, const cplx*, std::size_t);
};

const KernelTable& scalar_table();
const KernelTable* avx2_table();  // nullptr when not compiled in / no CPU support

}  // namespace detail

}  // namespace su11::kernels
