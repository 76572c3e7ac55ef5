#pragma once

#include <optional>
#include <span>
#include <vector>

#include "su11/fock.hpp"
#include "su11/sparse.hpp"

namespace su11 {

// phi(x) per site; the constant function is the all-ones vector.
using TestFunction = std::vector<cplx>;

TestFunction constant_one(std::size_t m);

// Sparse complex operator over the truncated basis together with its sector
// displacement: +1 (raising), -1 (lowering), 0 (diagonal in sector), or
// nullopt for mixed.
struct WeightedOperator {
  SparseMatrix<cplx> mat;
  std::optional<int> shift;
};

// (k+ f)(eta) = p^{-1/2} sum_{x: eta_x >= 1} phi(x) eta_x f(eta - e_x)
WeightedOperator build_k_plus(const TruncatedSpace& ts,
                              const TestFunction& phi);
// (k- f)(eta) = p^{1/2} sum_x conj(phi(x)) (alpha_x + eta_x) f(eta + e_x)
WeightedOperator build_k_minus(const TruncatedSpace& ts,
                               const TestFunction& phi);
// diagonal with entry sum_x phi(x) eta_x + (1/2) sum_x phi(x) alpha_x
WeightedOperator build_k_zero(const TruncatedSpace& ts,
                              const TestFunction& phi);

WeightedOperator multiply(const WeightedOperator& a, const WeightedOperator& b);
WeightedOperator add(const WeightedOperator& a, const WeightedOperator& b,
                     cplx scale_b = 1.0);
// AB - BA
WeightedOperator commutator(const WeightedOperator& a,
                            const WeightedOperator& b);

// Adjoint in the Pascal-weighted inner product: A*[j,i] = conj(A[i,j]) w_i/w_j.
// Throws DegenerateWeightError when a zero-weight configuration carries a
// nonzero entry.
WeightedOperator weighted_adjoint(const TruncatedSpace& ts,
                                  const WeightedOperator& a);

// Structural check: every nonzero entry respects the declared sector shift.
bool shift_pattern_ok(const TruncatedSpace& ts, const WeightedOperator& a);

// Max |A - B| over entries whose source (column) sector is <= max_col_sector.
double max_abs_diff_below(const TruncatedSpace& ts, const WeightedOperator& a,
                          const WeightedOperator& b,
                          std::uint32_t max_col_sector);

// Max |W A - A^H W| entry: violation of Hermiticity in the weighted metric.
double weighted_hermiticity_violation(const TruncatedSpace& ts,
                                      const SparseMatrix<cplx>& a);

}  // namespace su11
