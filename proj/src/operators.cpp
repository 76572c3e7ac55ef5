#include "su11/operators.hpp"

#include <cmath>

namespace su11 {

TestFunction constant_one(std::size_t m) { return TestFunction(m, cplx{1.0}); }

namespace {

std::optional<int> combine_product_shift(std::optional<int> a,
                                         std::optional<int> b) {
  if (!a || !b) return std::nullopt;
  const int s = *a + *b;
  if (s < -1 || s > 1) return std::nullopt;
  return s;
}

void check_phi(const TruncatedSpace& ts, const TestFunction& phi) {
  if (phi.size() != ts.space().m)
    throw DimensionMismatch("test function must have one value per site");
}

}  // namespace

WeightedOperator build_k_plus(const TruncatedSpace& ts,
                              const TestFunction& phi) {
  check_phi(ts, phi);
  const double inv_sqrt_p = 1.0 / std::sqrt(ts.space().p);
  std::vector<Triplet<cplx>> trips;
  for (std::size_t g = 0; g < ts.dim(); ++g) {
    const Configuration& eta = ts.config_at(g);
    if (eta.total == 0) continue;
    for (std::size_t x = 0; x < ts.space().m; ++x) {
      if (eta.occ[x] == 0 || phi[x] == cplx{}) continue;
      const auto src = ts.shifted_index(g, x, -1);
      trips.push_back(
          {g, *src, phi[x] * static_cast<double>(eta.occ[x]) * inv_sqrt_p});
    }
  }
  return {SparseMatrix<cplx>::from_triplets(ts.dim(), ts.dim(),
                                            std::move(trips)),
          +1};
}

WeightedOperator build_k_minus(const TruncatedSpace& ts,
                               const TestFunction& phi) {
  check_phi(ts, phi);
  const double sqrt_p = std::sqrt(ts.space().p);
  std::vector<Triplet<cplx>> trips;
  for (std::size_t g = 0; g < ts.dim(); ++g) {
    const Configuration& eta = ts.config_at(g);
    if (eta.total == ts.n_max()) continue;  // source beyond truncation
    for (std::size_t x = 0; x < ts.space().m; ++x) {
      if (phi[x] == cplx{}) continue;
      const auto src = ts.shifted_index(g, x, +1);
      trips.push_back({g, *src,
                       std::conj(phi[x]) * sqrt_p *
                           (ts.space().alpha[x] + eta.occ[x])});
    }
  }
  return {SparseMatrix<cplx>::from_triplets(ts.dim(), ts.dim(),
                                            std::move(trips)),
          -1};
}

WeightedOperator build_k_zero(const TruncatedSpace& ts,
                              const TestFunction& phi) {
  check_phi(ts, phi);
  cplx half_mass{};
  for (std::size_t x = 0; x < ts.space().m; ++x)
    half_mass += 0.5 * phi[x] * ts.space().alpha[x];
  std::vector<Triplet<cplx>> trips;
  for (std::size_t g = 0; g < ts.dim(); ++g) {
    const Configuration& eta = ts.config_at(g);
    cplx v = half_mass;
    for (std::size_t x = 0; x < ts.space().m; ++x)
      v += phi[x] * static_cast<double>(eta.occ[x]);
    trips.push_back({g, g, v});
  }
  return {SparseMatrix<cplx>::from_triplets(ts.dim(), ts.dim(),
                                            std::move(trips)),
          0};
}

WeightedOperator multiply(const WeightedOperator& a,
                          const WeightedOperator& b) {
  return {a.mat.multiply(b.mat), combine_product_shift(a.shift, b.shift)};
}

WeightedOperator add(const WeightedOperator& a, const WeightedOperator& b,
                     cplx scale_b) {
  std::optional<int> shift;
  if (a.shift && b.shift && *a.shift == *b.shift) shift = a.shift;
  return {a.mat.plus(b.mat, scale_b), shift};
}

WeightedOperator commutator(const WeightedOperator& a,
                            const WeightedOperator& b) {
  const auto shift = combine_product_shift(a.shift, b.shift);
  return {a.mat.multiply(b.mat).plus(b.mat.multiply(a.mat), cplx{-1.0}),
          shift};
}

WeightedOperator weighted_adjoint(const TruncatedSpace& ts,
                                  const WeightedOperator& a) {
  const auto& w = ts.weights();
  std::vector<Triplet<cplx>> trips;
  trips.reserve(a.mat.nnz());
  a.mat.for_each([&](std::size_t i, std::size_t j, cplx v) {
    if (w[i] == 0.0 || w[j] == 0.0)
      throw DegenerateWeightError(
          "weighted_adjoint: nonzero entry on a zero-weight configuration");
    trips.push_back({j, i, std::conj(v) * (w[i] / w[j])});
  });
  std::optional<int> shift;
  if (a.shift) shift = -*a.shift;
  return {SparseMatrix<cplx>::from_triplets(a.mat.rows(), a.mat.cols(),
                                            std::move(trips)),
          shift};
}

bool shift_pattern_ok(const TruncatedSpace& ts, const WeightedOperator& a) {
  if (!a.shift) return true;
  bool ok = true;
  a.mat.for_each([&](std::size_t i, std::size_t j, cplx v) {
    if (v == cplx{}) return;
    const int ds = static_cast<int>(ts.sector_of(i)) -
                   static_cast<int>(ts.sector_of(j));
    if (ds != *a.shift) ok = false;
  });
  return ok;
}

double max_abs_diff_below(const TruncatedSpace& ts, const WeightedOperator& a,
                          const WeightedOperator& b,
                          std::uint32_t max_col_sector) {
  const auto diff = a.mat.plus(b.mat, cplx{-1.0});
  double m = 0.0;
  diff.for_each([&](std::size_t, std::size_t j, cplx v) {
    if (ts.sector_of(j) <= max_col_sector) m = std::max(m, std::abs(v));
  });
  return m;
}

double weighted_hermiticity_violation(const TruncatedSpace& ts,
                                      const SparseMatrix<cplx>& a) {
  // |(W A)[i,j] - (A^H W)[i,j]| = |w_i A[i,j] - conj(A[j,i]) w_j|. Checking
  // it at every stored entry of A covers the transpose pattern as well (the
  // mirrored position gives the same magnitude).
  const auto& w = ts.weights();
  double m = 0.0;
  a.for_each([&](std::size_t i, std::size_t j, cplx v) {
    m = std::max(m, std::abs(w[i] * v - std::conj(a.at(j, i)) * w[j]));
  });
  return m;
}

}  // namespace su11
