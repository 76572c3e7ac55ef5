#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "su11/dense.hpp"
#include "su11/fock.hpp"
#include "su11/operators.hpp"
#include "su11/rng.hpp"
#include "su11/sip.hpp"

namespace su11 {

struct UnitaryParams {
  cplx xi{};
  double theta = 0.0;
};

// The parameter value tanh(xi) = sqrt(p) that turns the unitary into the
// orthogonalizing map.
double xi_star(double p);

// exp(xi k+ - conj(xi) k-) on the truncated space (weighted-unitary).
DenseMatrix<cplx> build_unitary_core(const TruncatedSpace& ts, cplx xi);
// Right-composition with the diagonal phase exp(i theta (alpha(E)+2 eta(E))).
DenseMatrix<cplx> apply_sector_phase(const TruncatedSpace& ts,
                                     DenseMatrix<cplx> u, double theta);
// Full two-parameter unitary: the core followed by the diagonal phase.
DenseMatrix<cplx> build_unitary(const TruncatedSpace& ts,
                                const UnitaryParams& params);

// Max |U^H W U - W| entry over the truncated basis.
double weighted_unitarity_violation(const TruncatedSpace& ts,
                                    const DenseMatrix<cplx>& u);

// Mobius action of the group element attached to xi on the unit disk.
struct MobiusAction {
  cplx xi{};
  cplx a{1.0};  // cosh|xi|
  cplx b{};     // i (xi/|xi|) sinh|xi|

  static MobiusAction from_xi(cplx xi);
};

// Pointwise z -> (z + (xi/|xi|) tanh|xi|) / (1 + z (conj(xi)/|xi|) tanh|xi|);
// throws ValidationError when sup|z| >= 1.
TestFunction mobius_transform(const MobiusAction& ma, const TestFunction& z);

// C(xi) = exp(-sum_y alpha_y log(cosh|xi| + z_y (conj(xi)/xi) sinh|xi|)).
cplx multiplier(const MobiusAction& ma, const SiteSpace& space,
                const TestFunction& z);

// Coefficients of the exponential state E_z(eta) = prod_x (z_x/sqrt p)^{n_x}
// over the truncated basis.
std::vector<cplx> exponential_state(const TruncatedSpace& ts,
                                    const TestFunction& z);
// Closed-form squared norm (1-p)^{alpha(E)} exp(-sum alpha_x log(1-|z_x|^2)).
double exponential_state_norm_sq(const SiteSpace& space,
                                 const TestFunction& z);

struct TruncCheck {
  double residual = 0.0;
  double coverage = 0.0;
  std::uint32_t n_max = 0;
};

// Weighted-norm residual of U f = (1-p)^{alpha(E)/2} (1-p)^n/n! I_n(f_n) at
// xi = artanh sqrt(p), for f supported on sector n (taken as given; pass
// indicator-scale data so the residual is comparable across checks).
TruncCheck apply_theorem_check(const TruncatedSpace& ts, std::uint32_t n,
                               std::span<const cplx> f_sector,
                               const DenseMatrix<cplx>* u_core = nullptr);

// Weighted-norm residual of exp(xi k+ - conj(xi) k-) E_z = C(xi) E_{z_xi}.
TruncCheck check_exponential_transform(const TruncatedSpace& ts, cplx xi,
                                       const TestFunction& z,
                                       const DenseMatrix<cplx>* u_core =
                                           nullptr);

// Max over random low-sector probes g of ||(P_t U - U P_t) g||_w. A cached
// full unitary may be supplied; it must match `params`.
double check_symmetry(const TruncatedSpace& ts, const RateKernel& c,
                      const UnitaryParams& params, double t,
                      std::uint32_t n_probe, std::size_t n_probes,
                      const RngStream& base,
                      const DenseMatrix<cplx>* u = nullptr);

// Max entry residual of P_t I_n(f_n) = I_n(p_t^(n) f_n) over sectors
// k <= k_max; block-exact, no truncation dependence.
double check_intertwining(const TruncatedSpace& ts, const RateKernel& c,
                          std::uint32_t n, std::span<const cplx> f_sector,
                          double t, std::uint32_t k_max);

// sum_j (sqrt(p) k+)^j / j! applied to f; the sum terminates at the
// truncation boundary.
std::vector<cplx> k_transform(const TruncatedSpace& ts,
                              std::span<const cplx> f);

}  // namespace su11
