#include "su11/sip.hpp"

#include <cmath>

#include "su11/numeric.hpp"

namespace su11 {

RateKernel RateKernel::constant(std::size_t m, double value) {
  RateKernel k{m, std::vector<double>(m * m, value)};
  k.validate();
  return k;
}

RateKernel RateKernel::product_form(const std::vector<double>& phi) {
  const std::size_t m = phi.size();
  RateKernel k{m, std::vector<double>(m * m, 0.0)};
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y) k.c[x * m + y] = 2.0 * phi[x] * phi[y];
  k.validate();
  return k;
}

RateKernel RateKernel::from_matrix(std::size_t m, std::vector<double> entries) {
  RateKernel k{m, std::move(entries)};
  k.validate();
  return k;
}

void RateKernel::validate() const {
  if (c.size() != m * m)
    throw ValidationError("rate kernel must be an m x m matrix");
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y) {
      const double v = at(x, y);
      if (!std::isfinite(v) || v < 0.0)
        throw ValidationError("rates must be finite and non-negative");
      if (v != at(y, x)) throw ValidationError("rate kernel must be symmetric");
    }
}

SectorGenerator build_generator(const SiteSpace& space, const RateKernel& c,
                                std::uint32_t n, std::size_t basis_limit) {
  if (c.m != space.m) throw DimensionMismatch("rate kernel / space mismatch");
  SectorGenerator gen;
  gen.n = n;
  gen.basis = SectorBasis(space.m, n, basis_limit);
  std::vector<Triplet<double>> trips;
  std::vector<std::uint32_t> occ;
  for (std::size_t i = 0; i < gen.basis.size(); ++i) {
    const Configuration& eta = gen.basis.at(i);
    double out_rate = 0.0;
    for (std::size_t x = 0; x < space.m; ++x) {
      if (eta.occ[x] == 0) continue;
      for (std::size_t y = 0; y < space.m; ++y) {
        if (y == x) continue;  // self-jumps contribute nothing
        const double rate =
            c.at(x, y) * eta.occ[x] * (space.alpha[y] + eta.occ[y]);
        if (rate == 0.0) continue;
        occ = eta.occ;
        --occ[x];
        ++occ[y];
        const auto j = gen.basis.index_of(occ);
        trips.push_back({i, *j, rate});
        out_rate += rate;
      }
    }
    if (out_rate != 0.0) trips.push_back({i, i, -out_rate});
  }
  gen.mat = SparseMatrix<double>::from_triplets(gen.basis.size(),
                                                gen.basis.size(),
                                                std::move(trips), 0.0);
  return gen;
}

WeightedOperator build_generator_algebraic(const TruncatedSpace& ts,
                                           const std::vector<double>& phi) {
  TestFunction phic(phi.begin(), phi.end());
  const WeightedOperator kp = build_k_plus(ts, phic);
  const WeightedOperator km = build_k_minus(ts, phic);
  const WeightedOperator k0 = build_k_zero(ts, phic);
  double phi_alpha = 0.0, phi2_alpha = 0.0;
  for (std::size_t x = 0; x < ts.space().m; ++x) {
    phi_alpha += phi[x] * ts.space().alpha[x];
    phi2_alpha += phi[x] * phi[x] * ts.space().alpha[x];
  }
  WeightedOperator l = add(multiply(kp, km), multiply(km, kp));
  l = add(l, multiply(k0, k0), cplx{-2.0});
  const cplx shift_const = 0.5 * phi_alpha * phi_alpha - phi2_alpha;
  WeightedOperator ident{SparseMatrix<cplx>::identity(ts.dim()), 0};
  l = add(l, ident, shift_const);
  l.shift = 0;
  return l;
}

DenseMatrix<double> sector_semigroup(const SectorGenerator& gen, double t) {
  if (t < 0.0) throw ValidationError("semigroup time must be non-negative");
  DenseMatrix<double> a = gen.mat.to_dense();
  a.scale(t);
  return expm(a);
}

std::vector<double> semigroup_apply(const SectorGenerator& gen, double t,
                                    std::span<const double> f) {
  if (f.size() != gen.basis.size())
    throw DimensionMismatch("semigroup_apply: vector / basis mismatch");
  const DenseMatrix<double> pt = sector_semigroup(gen, t);
  return apply(pt, f);
}

BlockSemigroup::BlockSemigroup(const TruncatedSpace& ts, const RateKernel& c,
                               double t)
    : ts_(&ts) {
  blocks_.reserve(ts.n_max() + 1);
  for (std::uint32_t n = 0; n <= ts.n_max(); ++n)
    blocks_.push_back(sector_semigroup(build_generator(ts.space(), c, n), t));
}

std::vector<cplx> BlockSemigroup::apply(std::span<const cplx> v) const {
  if (v.size() != ts_->dim()) throw DimensionMismatch("block semigroup apply");
  std::vector<cplx> out(v.size());
  for (std::uint32_t n = 0; n <= ts_->n_max(); ++n) {
    const auto& b = blocks_[n];
    const std::size_t off = ts_->sector_offset(n);
    for (std::size_t i = 0; i < b.rows(); ++i) {
      cplx s{};
      for (std::size_t j = 0; j < b.cols(); ++j) s += b(i, j) * v[off + j];
      out[off + i] = s;
    }
  }
  return out;
}

std::vector<TrajectoryEvent> gillespie_simulate(const SiteSpace& space,
                                                const RateKernel& c,
                                                const Configuration& eta0,
                                                double t_end, RngStream& rng) {
  if (t_end < 0.0) throw ValidationError("t_end must be non-negative");
  const std::size_t m = space.m;
  std::vector<std::uint32_t> occ = eta0.occ;
  std::vector<double> rate(m * m, 0.0);
  auto pair_rate = [&](std::size_t x, std::size_t y) {
    return x == y ? 0.0 : c.at(x, y) * occ[x] * (space.alpha[y] + occ[y]);
  };
  double total = 0.0;
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = 0; y < m; ++y) {
      rate[x * m + y] = pair_rate(x, y);
      total += rate[x * m + y];
    }

  std::vector<TrajectoryEvent> events;
  double t = 0.0;
  std::uint64_t since_refresh = 0;
  while (total > 0.0) {
    t += rng.exponential(total);
    if (t > t_end) break;
    // pick the jump pair by cumulative walk over the nonzero rates
    double u = rng.uniform() * total;
    std::size_t from = m, to = m;
    bool found = false;
    for (std::size_t x = 0; x < m && !found; ++x)
      for (std::size_t y = 0; y < m && !found; ++y) {
        if (rate[x * m + y] <= 0.0) continue;
        from = x;
        to = y;  // falls back to the last nonzero pair on round-off
        u -= rate[x * m + y];
        if (u <= 0.0) found = true;
      }
    if (from == m) break;  // absorbed; `total` was only float residue
    --occ[from];
    ++occ[to];
    events.push_back({t, static_cast<std::uint32_t>(from),
                      static_cast<std::uint32_t>(to)});
    // only pairs touching the two moved sites change
    for (std::size_t s : {from, to}) {
      for (std::size_t y = 0; y < m; ++y) {
        total -= rate[s * m + y];
        rate[s * m + y] = pair_rate(s, y);
        total += rate[s * m + y];
        if (y == s) continue;
        total -= rate[y * m + s];
        rate[y * m + s] = pair_rate(y, s);
        total += rate[y * m + s];
      }
    }
    if (++since_refresh == 64) {  // clear accumulated float drift
      since_refresh = 0;
      total = 0.0;
      for (double r : rate) total += r;
    }
  }
  return events;
}

Configuration replay_events(const Configuration& eta0,
                            std::span<const TrajectoryEvent> events) {
  std::vector<std::uint32_t> occ = eta0.occ;
  for (const auto& e : events) {
    --occ[e.from_site];
    ++occ[e.to_site];
  }
  return Configuration(std::move(occ));
}

DetailedBalanceResult check_detailed_balance(const SiteSpace& space,
                                             const RateKernel& c,
                                             std::uint32_t n) {
  const SectorBasis basis(space.m, n);
  DetailedBalanceResult res;
  std::vector<std::uint32_t> occ;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const Configuration& eta = basis.at(i);
    const double w = pascal_weight(space, eta);
    for (std::size_t x = 0; x < space.m; ++x) {
      if (eta.occ[x] == 0) continue;
      for (std::size_t y = 0; y < space.m; ++y) {
        if (y == x) continue;
        const double forward =
            w * c.at(x, y) * eta.occ[x] * (space.alpha[y] + eta.occ[y]);
        occ = eta.occ;
        --occ[x];
        ++occ[y];
        const Configuration etap(occ);
        const double wp = pascal_weight(space, etap);
        const double backward =
            wp * c.at(y, x) * etap.occ[y] * (space.alpha[x] + etap.occ[x]);
        res.max_violation =
            std::max(res.max_violation, std::abs(forward - backward));
        res.scale = std::max({res.scale, forward, backward});
      }
    }
  }
  return res;
}

SparseMatrix<double> removal_matrix(const TruncatedSpace& ts, std::uint32_t n) {
  if (n == 0 || n > ts.n_max())
    throw DimensionMismatch("removal_matrix: sector out of range");
  const SectorBasis& to = ts.sector(n);
  const SectorBasis& from = ts.sector(n - 1);
  std::vector<Triplet<double>> trips;
  std::vector<std::uint32_t> occ;
  for (std::size_t i = 0; i < to.size(); ++i) {
    const Configuration& eta = to.at(i);
    for (std::size_t x = 0; x < ts.space().m; ++x) {
      if (eta.occ[x] == 0) continue;
      occ = eta.occ;
      --occ[x];
      trips.push_back({i, *from.index_of(occ),
                       static_cast<double>(eta.occ[x])});
    }
  }
  return SparseMatrix<double>::from_triplets(to.size(), from.size(),
                                             std::move(trips), 0.0);
}

double check_consistency(const TruncatedSpace& ts, const RateKernel& c) {
  std::vector<SparseMatrix<double>> gens;
  gens.reserve(ts.n_max() + 1);
  for (std::uint32_t n = 0; n <= ts.n_max(); ++n)
    gens.push_back(build_generator(ts.space(), c, n).mat);
  return check_consistency_family(ts, gens);
}

double check_consistency_family(const TruncatedSpace& ts,
                                std::span<const SparseMatrix<double>> gens) {
  double violation = 0.0;
  for (std::uint32_t n = 1; n <= ts.n_max(); ++n) {
    const SparseMatrix<double> a = removal_matrix(ts, n);
    const SparseMatrix<double> diff =
        a.multiply(gens[n - 1], 0.0).plus(gens[n].multiply(a, 0.0), -1.0);
    violation = std::max(violation, diff.max_abs());
  }
  return violation;
}

FactorialCheckResult check_conservative_factorials(const TruncatedSpace& ts,
                                                   const RateKernel& c,
                                                   double t, std::uint32_t k) {
  FactorialCheckResult res;
  // A^k 1 sector by sector: apply k removal blocks to the all-ones vector.
  for (std::uint32_t n = 0; n <= ts.n_max(); ++n) {
    std::vector<double> v;
    if (n >= k) {
      v.assign(ts.sector(n - k).size(), 1.0);
      for (std::uint32_t j = n - k + 1; j <= n; ++j)
        v = removal_matrix(ts, j).apply(std::span<const double>(v));
    } else {
      v.assign(ts.sector(n).size(), 0.0);  // falling factorial vanishes
    }
    const double expected = falling_factorial(static_cast<double>(n), k);
    for (double x : v)
      res.exact_violation = std::max(res.exact_violation,
                                     std::abs(x - expected));
    const SectorGenerator gen = build_generator(ts.space(), c, n);
    const std::vector<double> evolved = semigroup_apply(gen, t, v);
    for (std::size_t i = 0; i < v.size(); ++i)
      res.semigroup_violation = std::max(res.semigroup_violation,
                                         std::abs(evolved[i] - v[i]));
  }
  return res;
}

}  // namespace su11
