#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "su11/fock.hpp"

namespace su11 {

struct MeixnerParams {
  double a;  // block mass, > 0
  double p;  // in (0,1)
};

// Meixner polynomial M_n(x; a, p), normalized as the terminating
// hypergeometric sum sum_k (-x)_k (-n)_k / ((a)_k k!) (1 - 1/p)^k.
double meixner_M(std::uint32_t n, double x, const MeixnerParams& params);

// Monic variant: leading coefficient 1 in x.
double meixner_monic(std::uint32_t n, double x, const MeixnerParams& params);

// Three-term recurrence route for the monic polynomials. The production
// evaluators prefer the terminating sum (low degree) or the n <-> x symmetry
// (integer argument); this is the high-degree fallback, exposed so the tests
// can validate it against those independent routes.
double meixner_monic_recurrence(std::uint32_t n, double x,
                                const MeixnerParams& params);

// Partial sum of the generating identity
//   sum_n s^n/n! (1-p)^n monic_n(x) = (1+s)^x (1+ps)^{-x-a},
// returned together with the closed form (used by convergence checks).
struct GeneratingFunctionCheck {
  double partial_sum;
  double closed_form;
};
GeneratingFunctionCheck meixner_generating_function(
    double s, double x, const MeixnerParams& params, std::uint32_t terms);

// Degree-n statistic expressed as sum_kappa c_kappa prod_i monic_{kappa_i}
// (eta_i; alpha_i, p) over multisets kappa with |kappa| = n.
struct PolynomialExpansion {
  std::uint32_t degree = 0;
  std::vector<std::pair<Configuration, cplx>> terms;
  bool all_real = true;  // enables the real evaluation fast path
};

// Exact orthogonalization of the sector-n statistic with values f_sector on
// SectorBasis(n): c_kappa = (n!/prod kappa_i!) f_sector(kappa).
PolynomialExpansion build_I_n(const TruncatedSpace& ts,
                              std::span<const cplx> f_sector, std::uint32_t n);

cplx evaluate_expansion(const PolynomialExpansion& expansion,
                        const Configuration& eta, const SiteSpace& space);

// Evaluation at every configuration of the truncated basis.
std::vector<cplx> evaluate_expansion_on(const PolynomialExpansion& expansion,
                                        const TruncatedSpace& ts);

}  // namespace su11
