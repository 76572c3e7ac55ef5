#include "su11/dense.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "su11/kernels.hpp"

namespace su11 {

template <typename T>
void DenseMatrix<T>::add_scaled(const DenseMatrix& other, T s) {
  if (other.rows_ != rows_ || other.cols_ != cols_)
    throw DimensionMismatch("add_scaled: shape mismatch");
  kernels::axpy(s, other.data_.data(), data_.data(), data_.size());
}

template <typename T>
void DenseMatrix<T>::scale(T s) {
  for (auto& v : data_) v *= s;
}

template <typename T>
void DenseMatrix<T>::add_to_diagonal(T s) {
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i)
    data_[i * cols_ + i] += s;
}

template <typename T>
double DenseMatrix<T>::one_norm() const {
  std::vector<double> colsum(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      colsum[j] += std::abs(data_[i * cols_ + j]);
  double m = 0.0;
  for (double c : colsum) m = std::max(m, c);
  return m;
}

template <typename T>
double DenseMatrix<T>::max_abs() const {
  double m = 0.0;
  for (const auto& v : data_) m = std::max(m, std::abs(v));
  return m;
}

template <typename T>
DenseMatrix<T> matmul(const DenseMatrix<T>& a, const DenseMatrix<T>& b) {
  if (a.cols() != b.rows()) throw DimensionMismatch("matmul: shape mismatch");
  DenseMatrix<T> c(a.rows(), b.cols());
  kernels::matmul(a.data(), b.data(), c.data(), a.rows(), a.cols(), b.cols());
  return c;
}

template <typename T>
void lu_solve_inplace(DenseMatrix<T>& a, DenseMatrix<T>& b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n)
    throw DimensionMismatch("lu_solve: shape mismatch");
  const std::size_t nrhs = b.cols();
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t piv = j;
    double best = std::abs(a(j, j));
    for (std::size_t i = j + 1; i < n; ++i) {
      const double v = std::abs(a(i, j));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) throw ValidationError("lu_solve: singular matrix");
    if (piv != j) {
      std::swap_ranges(a.row(j), a.row(j) + n, a.row(piv));
      std::swap_ranges(b.row(j), b.row(j) + nrhs, b.row(piv));
    }
    const T inv_pivot = T{1} / a(j, j);
    for (std::size_t i = j + 1; i < n; ++i) {
      const T f = a(i, j) * inv_pivot;
      if (f == T{}) continue;
      a(i, j) = f;
      kernels::axpy(-f, a.row(j) + j + 1, a.row(i) + j + 1, n - j - 1);
      kernels::axpy(-f, b.row(j), b.row(i), nrhs);
    }
  }
  // back substitution on full rows of b
  for (std::size_t jj = n; jj-- > 0;) {
    const T inv_pivot = T{1} / a(jj, jj);
    for (std::size_t c = 0; c < nrhs; ++c) b(jj, c) *= inv_pivot;
    for (std::size_t i = 0; i < jj; ++i) {
      const T f = a(i, jj);
      if (f == T{}) continue;
      kernels::axpy(-f, b.row(jj), b.row(i), nrhs);
    }
  }
}

namespace {

// Higham (2005) Pade orders and 1-norm thresholds.
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068e0;
constexpr double kTheta13 = 5.371920351148152e0;

template <typename T>
DenseMatrix<T> pade_solve(const DenseMatrix<T>& u, const DenseMatrix<T>& v) {
  // (v - u) x = (v + u)
  DenseMatrix<T> lhs = v;
  lhs.add_scaled(u, T{-1});
  DenseMatrix<T> rhs = v;
  rhs.add_scaled(u, T{1});
  lu_solve_inplace(lhs, rhs);
  return rhs;
}

template <typename T>
DenseMatrix<T> pade_low(const DenseMatrix<T>& a,
                        std::span<const double> coeff) {
  // coeff = b_0..b_m with m in {3,5,7,9}
  const std::size_t n = a.rows();
  const DenseMatrix<T> a2 = matmul(a, a);
  std::vector<DenseMatrix<T>> even_pow;  // I, A2, A4, ...
  even_pow.push_back(DenseMatrix<T>::identity(n));
  even_pow.push_back(a2);
  for (std::size_t k = 2; 2 * k + 1 < coeff.size(); ++k)
    even_pow.push_back(matmul(even_pow.back(), a2));

  DenseMatrix<T> usum(n, n), v(n, n);
  for (std::size_t k = 0; 2 * k + 1 < coeff.size(); ++k)
    usum.add_scaled(even_pow[k], T{coeff[2 * k + 1]});
  for (std::size_t k = 0; 2 * k < coeff.size(); ++k)
    v.add_scaled(even_pow[k], T{coeff[2 * k]});
  const DenseMatrix<T> u = matmul(a, usum);
  return pade_solve(u, v);
}

template <typename T>
DenseMatrix<T> pade13(const DenseMatrix<T>& a) {
  static constexpr std::array<double, 14> b = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
      1187353796428800.0,  129060195264000.0,   10559470521600.0,
      670442572800.0,      33522128640.0,       1323241920.0,
      40840800.0,          960960.0,            16380.0,
      182.0,               1.0};
  const std::size_t n = a.rows();
  const DenseMatrix<T> a2 = matmul(a, a);
  const DenseMatrix<T> a4 = matmul(a2, a2);
  const DenseMatrix<T> a6 = matmul(a2, a4);

  DenseMatrix<T> w1(n, n);
  w1.add_scaled(a6, T{b[13]});
  w1.add_scaled(a4, T{b[11]});
  w1.add_scaled(a2, T{b[9]});
  DenseMatrix<T> w2(n, n);
  w2.add_scaled(a6, T{b[7]});
  w2.add_scaled(a4, T{b[5]});
  w2.add_scaled(a2, T{b[3]});
  w2.add_to_diagonal(T{b[1]});
  DenseMatrix<T> w = matmul(a6, w1);
  w.add_scaled(w2, T{1});
  const DenseMatrix<T> u = matmul(a, w);

  DenseMatrix<T> z1(n, n);
  z1.add_scaled(a6, T{b[12]});
  z1.add_scaled(a4, T{b[10]});
  z1.add_scaled(a2, T{b[8]});
  DenseMatrix<T> v = matmul(a6, z1);
  v.add_scaled(a6, T{b[6]});
  v.add_scaled(a4, T{b[4]});
  v.add_scaled(a2, T{b[2]});
  v.add_to_diagonal(T{b[0]});
  return pade_solve(u, v);
}

}  // namespace

template <typename T>
DenseMatrix<T> expm(const DenseMatrix<T>& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("expm: square required");
  if (a.rows() == 0) return a;
  const double nrm = a.one_norm();
  static constexpr std::array<double, 4> b3 = {120.0, 60.0, 12.0, 1.0};
  static constexpr std::array<double, 6> b5 = {30240.0, 15120.0, 3360.0,
                                               420.0,   30.0,    1.0};
  static constexpr std::array<double, 8> b7 = {
      17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
  static constexpr std::array<double, 10> b9 = {
      17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
      2162160.0,     110880.0,     3960.0,       90.0,        1.0};
  if (nrm <= kTheta3) return pade_low(a, b3);
  if (nrm <= kTheta5) return pade_low(a, b5);
  if (nrm <= kTheta7) return pade_low(a, b7);
  if (nrm <= kTheta9) return pade_low(a, b9);

  int s = 0;
  if (nrm > kTheta13)
    s = static_cast<int>(std::ceil(std::log2(nrm / kTheta13)));
  DenseMatrix<T> scaled = a;
  scaled.scale(T{std::ldexp(1.0, -s)});
  DenseMatrix<T> f = pade13(scaled);
  for (int i = 0; i < s; ++i) f = matmul(f, f);
  return f;
}

template <typename T, typename V>
std::vector<V> apply(const DenseMatrix<T>& a, std::span<const V> x) {
  if (a.cols() != x.size()) throw DimensionMismatch("apply: shape mismatch");
  std::vector<V> y(a.rows(), V{});
  for (std::size_t i = 0; i < a.rows(); ++i) {
    V s{};
    const T* row = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) s += row[j] * x[j];
    y[i] = s;
  }
  return y;
}

template class DenseMatrix<double>;
template class DenseMatrix<cplx>;
template DenseMatrix<double> matmul(const DenseMatrix<double>&,
                                    const DenseMatrix<double>&);
template DenseMatrix<cplx> matmul(const DenseMatrix<cplx>&,
                                  const DenseMatrix<cplx>&);
template void lu_solve_inplace(DenseMatrix<double>&, DenseMatrix<double>&);
template void lu_solve_inplace(DenseMatrix<cplx>&, DenseMatrix<cplx>&);
template DenseMatrix<double> expm(const DenseMatrix<double>&);
template DenseMatrix<cplx> expm(const DenseMatrix<cplx>&);
template std::vector<double> apply(const DenseMatrix<double>&,
                                   std::span<const double>);
template std::vector<cplx> apply(const DenseMatrix<double>&,
                                 std::span<const cplx>);
template std::vector<cplx> apply(const DenseMatrix<cplx>&,
                                 std::span<const cplx>);

}  // namespace su11
