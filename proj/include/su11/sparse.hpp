#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "su11/dense.hpp"
#include "su11/errors.hpp"

namespace su11 {

template <typename T>
struct Triplet {
  std::size_t row, col;
  T value;
};

// CSR matrix keyed by (destination, source); duplicates are summed and
// entries below the prune threshold dropped at assembly.
template <typename T>
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

  static SparseMatrix from_triplets(std::size_t rows, std::size_t cols,
                                    std::vector<Triplet<T>> trips,
                                    double prune = 1e-15) {
    std::sort(trips.begin(), trips.end(), [](const auto& a, const auto& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    SparseMatrix m(rows, cols);
    std::size_t i = 0;
    while (i < trips.size()) {
      std::size_t j = i;
      T sum{};
      while (j < trips.size() && trips[j].row == trips[i].row &&
             trips[j].col == trips[i].col)
        sum += trips[j++].value;
      if (std::abs(sum) > prune) {
        m.col_.push_back(trips[i].col);
        m.val_.push_back(sum);
        ++m.row_ptr_[trips[i].row + 1];
      }
      i = j;
    }
    for (std::size_t r = 0; r < rows; ++r) m.row_ptr_[r + 1] += m.row_ptr_[r];
    return m;
  }

  static SparseMatrix identity(std::size_t n) {
    std::vector<Triplet<T>> t;
    t.reserve(n);
    for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, T{1}});
    return from_triplets(n, n, std::move(t), 0.0);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return val_.size(); }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        f(r, col_[k], val_[k]);
  }

  T at(std::size_t r, std::size_t c) const {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      if (col_[k] == c) return val_[k];
    return T{};
  }

  template <typename V>
  std::vector<decltype(T{} * V{})> apply(std::span<const V> x) const {
    if (x.size() != cols_) throw DimensionMismatch("sparse apply shape");
    std::vector<decltype(T{} * V{})> y(rows_, decltype(T{} * V{}){});
    for (std::size_t r = 0; r < rows_; ++r) {
      decltype(T{} * V{}) s{};
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
        s += val_[k] * x[col_[k]];
      y[r] = s;
    }
    return y;
  }

  SparseMatrix multiply(const SparseMatrix& other, double prune = 1e-15) const {
    if (cols_ != other.rows_) throw DimensionMismatch("sparse multiply shape");
    std::vector<Triplet<T>> trips;
    std::vector<T> acc(other.cols_, T{});
    std::vector<std::size_t> touched;
    for (std::size_t r = 0; r < rows_; ++r) {
      touched.clear();
      for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
        const T va = val_[k];
        const std::size_t mid = col_[k];
        for (std::size_t k2 = other.row_ptr_[mid]; k2 < other.row_ptr_[mid + 1];
             ++k2) {
          const std::size_t c = other.col_[k2];
          if (acc[c] == T{}) touched.push_back(c);
          acc[c] += va * other.val_[k2];
        }
      }
      for (std::size_t c : touched) {
        trips.push_back({r, c, acc[c]});
        acc[c] = T{};
      }
    }
    return from_triplets(rows_, other.cols_, std::move(trips), prune);
  }

  SparseMatrix plus(const SparseMatrix& other, T scale_other = T{1}) const {
    if (rows_ != other.rows_ || cols_ != other.cols_)
      throw DimensionMismatch("sparse add shape");
    std::vector<Triplet<T>> trips;
    trips.reserve(nnz() + other.nnz());
    for_each([&](std::size_t r, std::size_t c, T v) {
      trips.push_back({r, c, v});
    });
    other.for_each([&](std::size_t r, std::size_t c, T v) {
      trips.push_back({r, c, scale_other * v});
    });
    return from_triplets(rows_, cols_, std::move(trips));
  }

  SparseMatrix scaled(T s) const {
    SparseMatrix m = *this;
    for (auto& v : m.val_) v *= s;
    return m;
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : val_) m = std::max(m, std::abs(v));
    return m;
  }

  DenseMatrix<T> to_dense() const {
    DenseMatrix<T> d(rows_, cols_);
    for_each([&](std::size_t r, std::size_t c, T v) { d(r, c) = v; });
    return d;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::size_t> col_;
  std::vector<T> val_;
};

}  // namespace su11
