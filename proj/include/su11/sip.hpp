#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "su11/dense.hpp"
#include "su11/fock.hpp"
#include "su11/operators.hpp"
#include "su11/rng.hpp"
#include "su11/sparse.hpp"

namespace su11 {

// Symmetric jump-rate kernel c(x,y) = c(y,x) >= 0.
struct RateKernel {
  std::size_t m = 0;
  std::vector<double> c;  // row-major m x m

  static RateKernel constant(std::size_t m, double value);
  static RateKernel product_form(const std::vector<double>& phi);  // 2 phi phi^T
  static RateKernel from_matrix(std::size_t m, std::vector<double> entries);

  double at(std::size_t x, std::size_t y) const { return c[x * m + y]; }
  void validate() const;
};

// Inclusion-process generator restricted to one particle-number sector:
// eta -> eta - e_x + e_y at rate c(x,y) n_x (alpha_y + n_y).
struct SectorGenerator {
  std::uint32_t n = 0;
  SectorBasis basis;
  SparseMatrix<double> mat;
};

SectorGenerator build_generator(const SiteSpace& space, const RateKernel& c,
                                std::uint32_t n,
                                std::size_t basis_limit = kDefaultBasisLimit);

// Same dynamics assembled from raising/lowering/neutral operators, valid for
// product-form rates c(x,y) = 2 phi(x) phi(y):
//   L = k+(phi)k-(phi) + k-(phi)k+(phi) - 2 k0(phi)^2
//       + ((1/2)(int phi dalpha)^2 - int phi^2 dalpha) I.
WeightedOperator build_generator_algebraic(const TruncatedSpace& ts,
                                           const std::vector<double>& phi);

DenseMatrix<double> sector_semigroup(const SectorGenerator& gen, double t);

// exp(tL) f; throws ValidationError for t < 0.
std::vector<double> semigroup_apply(const SectorGenerator& gen, double t,
                                    std::span<const double> f);

// One exp(t L_n) block per sector of the truncated space.
class BlockSemigroup {
 public:
  BlockSemigroup(const TruncatedSpace& ts, const RateKernel& c, double t);
  std::vector<cplx> apply(std::span<const cplx> v) const;
  const DenseMatrix<double>& block(std::uint32_t n) const { return blocks_[n]; }

 private:
  const TruncatedSpace* ts_;
  std::vector<DenseMatrix<double>> blocks_;
};

struct TrajectoryEvent {
  double time = 0.0;
  std::uint32_t from_site = 0;
  std::uint32_t to_site = 0;
};

std::vector<TrajectoryEvent> gillespie_simulate(const SiteSpace& space,
                                                const RateKernel& c,
                                                const Configuration& eta0,
                                                double t_end, RngStream& rng);

Configuration replay_events(const Configuration& eta0,
                            std::span<const TrajectoryEvent> events);

struct DetailedBalanceResult {
  double max_violation = 0.0;  // max |w(eta) rate - w(eta') rate'|
  double scale = 0.0;          // max flux, for relative comparison
};
DetailedBalanceResult check_detailed_balance(const SiteSpace& space,
                                             const RateKernel& c,
                                             std::uint32_t n);

// Removal operator block: sector n-1 functions to sector n functions,
// (A f)(eta) = sum_x eta_x f(eta - e_x).
SparseMatrix<double> removal_matrix(const TruncatedSpace& ts, std::uint32_t n);

// Generator-level consistency: max entry of A_n L_{n-1} - L_n A_n over all
// sectors 1..n_max.
double check_consistency(const TruncatedSpace& ts, const RateKernel& c);
double check_consistency_family(const TruncatedSpace& ts,
                                std::span<const SparseMatrix<double>> gens);

struct FactorialCheckResult {
  double exact_violation = 0.0;      // A^k 1 vs falling factorial
  double semigroup_violation = 0.0;  // invariance under exp(tL)
};
FactorialCheckResult check_conservative_factorials(const TruncatedSpace& ts,
                                                   const RateKernel& c,
                                                   double t, std::uint32_t k);

}  // namespace su11
