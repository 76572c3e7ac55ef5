#include "su11/unitary.hpp"

#include <cmath>

#include "su11/meixner.hpp"
#include "su11/numeric.hpp"

namespace su11 {

double xi_star(double p) { return std::atanh(std::sqrt(p)); }

DenseMatrix<cplx> build_unitary_core(const TruncatedSpace& ts, cplx xi) {
  if (xi == cplx{}) return DenseMatrix<cplx>::identity(ts.dim());
  const TestFunction one = constant_one(ts.space().m);
  const WeightedOperator kp = build_k_plus(ts, one);
  const WeightedOperator km = build_k_minus(ts, one);
  const SparseMatrix<cplx> gen =
      kp.mat.scaled(xi).plus(km.mat.scaled(std::conj(xi)), cplx{-1.0});
  return expm(gen.to_dense());
}

DenseMatrix<cplx> apply_sector_phase(const TruncatedSpace& ts,
                                     DenseMatrix<cplx> u, double theta) {
  if (theta == 0.0) return u;
  const double mass = ts.space().total_mass();
  // right-multiplying by a diagonal scales column j
  std::vector<cplx> phase(ts.dim());
  for (std::size_t j = 0; j < ts.dim(); ++j)
    phase[j] = std::polar(1.0, theta * (mass + 2.0 * ts.sector_of(j)));
  for (std::size_t i = 0; i < u.rows(); ++i)
    for (std::size_t j = 0; j < u.cols(); ++j) u(i, j) *= phase[j];
  return u;
}

DenseMatrix<cplx> build_unitary(const TruncatedSpace& ts,
                                const UnitaryParams& params) {
  return apply_sector_phase(ts, build_unitary_core(ts, params.xi),
                            params.theta);
}

double weighted_unitarity_violation(const TruncatedSpace& ts,
                                    const DenseMatrix<cplx>& u) {
  const auto& w = ts.weights();
  const std::size_t n = ts.dim();
  DenseMatrix<cplx> uh(n, n), wu(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      uh(j, i) = std::conj(u(i, j));
      wu(i, j) = w[i] * u(i, j);
    }
  DenseMatrix<cplx> m = matmul(uh, wu);  // U^H W U
  for (std::size_t i = 0; i < n; ++i) m(i, i) -= w[i];
  return m.max_abs();
}

MobiusAction MobiusAction::from_xi(cplx xi) {
  MobiusAction ma;
  ma.xi = xi;
  const double r = std::abs(xi);
  if (r == 0.0) return ma;  // identity action
  ma.a = std::cosh(r);
  ma.b = cplx{0.0, 1.0} * (xi / r) * std::sinh(r);
  return ma;
}

TestFunction mobius_transform(const MobiusAction& ma, const TestFunction& z) {
  for (const cplx& v : z)
    if (!(std::abs(v) < 1.0))
      throw ValidationError("mobius_transform: |z| must stay below 1");
  const double r = std::abs(ma.xi);
  if (r == 0.0) return z;
  const cplx dir = ma.xi / r;
  const double th = std::tanh(r);
  TestFunction out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    out[i] = (z[i] + dir * th) / (1.0 + z[i] * std::conj(dir) * th);
  return out;
}

cplx multiplier(const MobiusAction& ma, const SiteSpace& space,
                const TestFunction& z) {
  const double r = std::abs(ma.xi);
  if (r == 0.0) return 1.0;
  if (z.size() != space.m)
    throw DimensionMismatch("multiplier: z needs one value per site");
  const cplx phase = std::conj(ma.xi) / ma.xi;
  const double log_cosh = std::log(std::cosh(r));
  const double th = std::tanh(r);
  cplx s{};
  for (std::size_t y = 0; y < space.m; ++y) {
    // principal branch is safe: |z tanh| < 1 keeps 1+u in the right half plane
    s += space.alpha[y] * (log_cosh + std::log(1.0 + z[y] * phase * th));
  }
  return std::exp(-s);
}

std::vector<cplx> exponential_state(const TruncatedSpace& ts,
                                    const TestFunction& z) {
  if (z.size() != ts.space().m)
    throw DimensionMismatch("exponential_state: z needs one value per site");
  for (const cplx& v : z)
    if (!(std::abs(v) < 1.0))
      throw ValidationError("exponential_state: sup|z| must be below 1");
  const double inv_sqrt_p = 1.0 / std::sqrt(ts.space().p);
  std::vector<cplx> out(ts.dim());
  for (std::size_t g = 0; g < ts.dim(); ++g) {
    const Configuration& eta = ts.config_at(g);
    cplx v{1.0};
    for (std::size_t x = 0; x < ts.space().m; ++x)
      for (std::uint32_t k = 0; k < eta.occ[x]; ++k)
        v *= z[x] * inv_sqrt_p;
    out[g] = v;
  }
  return out;
}

double exponential_state_norm_sq(const SiteSpace& space,
                                 const TestFunction& z) {
  double s = 0.0;
  for (std::size_t x = 0; x < space.m; ++x)
    s += space.alpha[x] * std::log1p(-std::norm(z[x]));
  return std::pow(1.0 - space.p, space.total_mass()) * std::exp(-s);
}

TruncCheck apply_theorem_check(const TruncatedSpace& ts, std::uint32_t n,
                               std::span<const cplx> f_sector,
                               const DenseMatrix<cplx>* u_core) {
  const SiteSpace& space = ts.space();
  if (f_sector.size() != ts.sector(n).size())
    throw DimensionMismatch("apply_theorem_check: sector size mismatch");

  std::vector<cplx> f(ts.dim(), cplx{});
  const std::size_t off = ts.sector_offset(n);
  for (std::size_t i = 0; i < f_sector.size(); ++i) f[off + i] = f_sector[i];
  const std::vector<cplx> f_scaled(f_sector.begin(), f_sector.end());

  DenseMatrix<cplx> u_local;
  const DenseMatrix<cplx>* u = u_core;
  if (!u) {
    u_local = build_unitary_core(ts, xi_star(space.p));
    u = &u_local;
  }
  const std::vector<cplx> lhs = apply(*u, std::span<const cplx>(f));

  const PolynomialExpansion expansion = build_I_n(ts, f_scaled, n);
  std::vector<cplx> rhs = evaluate_expansion_on(expansion, ts);
  const double scale = std::pow(1.0 - space.p, space.total_mass() / 2.0) *
                       std::pow(1.0 - space.p, static_cast<double>(n)) /
                       factorial(n);
  std::vector<cplx> diff(ts.dim());
  for (std::size_t g = 0; g < ts.dim(); ++g)
    diff[g] = lhs[g] - scale * rhs[g];
  return {ts.weighted_norm(diff), ts.coverage(), ts.n_max()};
}

TruncCheck check_exponential_transform(const TruncatedSpace& ts, cplx xi,
                                       const TestFunction& z,
                                       const DenseMatrix<cplx>* u_core) {
  const std::vector<cplx> ez = exponential_state(ts, z);
  DenseMatrix<cplx> u_local;
  const DenseMatrix<cplx>* u = u_core;
  if (!u) {
    u_local = build_unitary_core(ts, xi);
    u = &u_local;
  }
  const std::vector<cplx> lhs = apply(*u, std::span<const cplx>(ez));
  const MobiusAction ma = MobiusAction::from_xi(xi);
  const TestFunction z_xi = mobius_transform(ma, z);
  const cplx c_xi = multiplier(ma, ts.space(), z);
  std::vector<cplx> rhs = exponential_state(ts, z_xi);
  std::vector<cplx> diff(ts.dim());
  for (std::size_t g = 0; g < ts.dim(); ++g)
    diff[g] = lhs[g] - c_xi * rhs[g];
  return {ts.weighted_norm(diff), ts.coverage(), ts.n_max()};
}

double check_symmetry(const TruncatedSpace& ts, const RateKernel& c,
                      const UnitaryParams& params, double t,
                      std::uint32_t n_probe, std::size_t n_probes,
                      const RngStream& base, const DenseMatrix<cplx>* u_full) {
  DenseMatrix<cplx> u_local;
  const DenseMatrix<cplx>* u = u_full;
  if (!u) {
    u_local = build_unitary(ts, params);
    u = &u_local;
  }
  const BlockSemigroup pt(ts, c, t);
  const std::size_t probe_dim =
      ts.sector_offset(n_probe) + ts.sector(n_probe).size();
  double worst = 0.0;
  for (std::size_t k = 0; k < n_probes; ++k) {
    RngStream rng = base.substream(k);
    std::vector<cplx> g(ts.dim(), cplx{});
    for (std::size_t i = 0; i < probe_dim; ++i)
      g[i] = cplx{rng.uniform() - 0.5, rng.uniform() - 0.5};
    const double norm = ts.weighted_norm(g);
    for (auto& v : g) v /= norm;
    const std::vector<cplx> ug = apply(*u, std::span<const cplx>(g));
    const std::vector<cplx> pt_ug = pt.apply(ug);
    const std::vector<cplx> ptg = pt.apply(g);
    const std::vector<cplx> u_ptg = apply(*u, std::span<const cplx>(ptg));
    std::vector<cplx> diff(ts.dim());
    for (std::size_t i = 0; i < ts.dim(); ++i) diff[i] = pt_ug[i] - u_ptg[i];
    worst = std::max(worst, ts.weighted_norm(diff));
  }
  return worst;
}

double check_intertwining(const TruncatedSpace& ts, const RateKernel& c,
                          std::uint32_t n, std::span<const cplx> f_sector,
                          double t, std::uint32_t k_max) {
  if (f_sector.size() != ts.sector(n).size())
    throw DimensionMismatch("check_intertwining: sector size mismatch");
  if (k_max > ts.n_max()) k_max = ts.n_max();

  // normalize to max |f| = 1 to keep the residual scale absolute
  double scale = 0.0;
  for (const cplx& v : f_sector) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0.0;
  std::vector<cplx> f(f_sector.begin(), f_sector.end());
  for (auto& v : f) v /= scale;

  const PolynomialExpansion before = build_I_n(ts, f, n);

  // evolve the sector-n function values with the n-particle semigroup
  const SectorGenerator gen_n = build_generator(ts.space(), c, n);
  const DenseMatrix<double> pt_n = sector_semigroup(gen_n, t);
  const std::vector<cplx> f_t = apply(pt_n, std::span<const cplx>(f));
  const PolynomialExpansion after = build_I_n(ts, f_t, n);

  double residual = 0.0;
  for (std::uint32_t k = 0; k <= k_max; ++k) {
    const SectorBasis& basis = ts.sector(k);
    std::vector<cplx> lhs(basis.size()), rhs(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
      lhs[i] = evaluate_expansion(before, basis.at(i), ts.space());
      rhs[i] = evaluate_expansion(after, basis.at(i), ts.space());
    }
    const SectorGenerator gen_k = build_generator(ts.space(), c, k);
    const DenseMatrix<double> pt_k = sector_semigroup(gen_k, t);
    const std::vector<cplx> lhs_t = apply(pt_k, std::span<const cplx>(lhs));
    for (std::size_t i = 0; i < basis.size(); ++i)
      residual = std::max(residual, std::abs(lhs_t[i] - rhs[i]));
  }
  return residual;
}

std::vector<cplx> k_transform(const TruncatedSpace& ts,
                              std::span<const cplx> f) {
  if (f.size() != ts.dim())
    throw DimensionMismatch("k_transform: vector / basis mismatch");
  const WeightedOperator kp = build_k_plus(ts, constant_one(ts.space().m));
  const double sqrt_p = std::sqrt(ts.space().p);
  std::vector<cplx> sum(f.begin(), f.end());
  std::vector<cplx> term(f.begin(), f.end());
  for (std::uint32_t j = 1; j <= ts.n_max(); ++j) {
    term = kp.mat.apply(std::span<const cplx>(term));
    const double factor = sqrt_p / static_cast<double>(j);
    bool all_zero = true;
    for (std::size_t i = 0; i < term.size(); ++i) {
      term[i] *= factor;
      if (term[i] != cplx{}) all_zero = false;
      sum[i] += term[i];
    }
    if (all_zero) break;
  }
  return sum;
}

}  // namespace su11
