#include "su11/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace su11::kernels {

namespace {

const detail::KernelTable* table_for(Backend b) {
  if (b == Backend::avx2) return detail::avx2_table();
  return &detail::scalar_table();
}

// best available backend, honoring the SU11_KERNEL_BACKEND override
Backend detect_backend() {
  if (const char* env = std::getenv("SU11_KERNEL_BACKEND")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0 && detail::avx2_table())
      return Backend::avx2;
  }
  return detail::avx2_table() ? Backend::avx2 : Backend::scalar;
}

std::atomic<const detail::KernelTable*>& current_table() {
  static std::atomic<const detail::KernelTable*> table{
      table_for(detect_backend())};
  return table;
}

std::atomic<Backend>& current_backend() {
  static std::atomic<Backend> backend{detect_backend()};
  return backend;
}

}  // namespace

Backend active_backend() { return current_backend().load(); }

bool available(Backend b) { return table_for(b) != nullptr; }

bool set_backend(Backend b) {
  const auto* t = table_for(b);
  if (!t) return false;
  current_table().store(t);
  current_backend().store(b);
  return true;
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
  }
  return "?";
}

void matmul(const double* a, const double* b, double* c, std::size_t m,
            std::size_t k, std::size_t n) {
  current_table().load()->matmul_d(a, b, c, m, k, n);
}

void matmul(const cplx* a, const cplx* b, cplx* c, std::size_t m,
            std::size_t k, std::size_t n) {
  current_table().load()->matmul_z(a, b, c, m, k, n);
}

void axpy(double s, const double* x, double* y, std::size_t n) {
  current_table().load()->axpy_d(s, x, y, n);
}

void axpy(cplx s, const cplx* x, cplx* y, std::size_t n) {
  current_table().load()->axpy_z(s, x, y, n);
}

cplx weighted_dot(const double* w, const cplx* f, const cplx* g,
                  std::size_t n) {
  return current_table().load()->weighted_dot(w, f, g, n);
}

}  // namespace su11::kernels
