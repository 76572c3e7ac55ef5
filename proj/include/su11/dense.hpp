#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "su11/errors.hpp"

namespace su11 {

using cplx = std::complex<double>;

// Row-major dense matrix over double or complex<double>. Products run
// through the runtime-dispatched kernels.
template <typename T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T{}) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  T* row(std::size_t i) { return data_.data() + i * cols_; }
  const T* row(std::size_t i) const { return data_.data() + i * cols_; }

  void add_scaled(const DenseMatrix& other, T s);
  void scale(T s);
  void add_to_diagonal(T s);
  double one_norm() const;  // max absolute column sum
  double max_abs() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

template <typename T>
DenseMatrix<T> matmul(const DenseMatrix<T>& a, const DenseMatrix<T>& b);

// Solves A X = B with partial-pivoting LU; A and B are consumed/overwritten.
// Returns X in b.
template <typename T>
void lu_solve_inplace(DenseMatrix<T>& a, DenseMatrix<T>& b);

// Scaling-and-squaring matrix exponential with Pade approximants of order
// 3/5/7/9/13 chosen from the 1-norm.
template <typename T>
DenseMatrix<T> expm(const DenseMatrix<T>& a);

template <typename T, typename V>
std::vector<V> apply(const DenseMatrix<T>& a, std::span<const V> x);

extern template class DenseMatrix<double>;
extern template class DenseMatrix<cplx>;

}  // namespace su11
