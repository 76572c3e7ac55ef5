#include "su11/verify/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "su11/kernels.hpp"
#include "su11/meixner.hpp"
#include "su11/numeric.hpp"
#include "su11/pascal.hpp"
#include "su11/stats.hpp"
#include "su11/unitary.hpp"

namespace su11::verify {

namespace {

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - t0_).count();
    t0_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point t0_ =
      std::chrono::steady_clock::now();
};

TestFunction random_phi(RngStream& rng, std::size_t m) {
  TestFunction phi(m);
  for (auto& v : phi) v = cplx{rng.uniform() - 0.5, rng.uniform() - 0.5};
  return phi;
}

std::vector<cplx> random_vector(RngStream& rng, std::size_t dim) {
  std::vector<cplx> v(dim);
  for (auto& x : v) x = cplx{rng.uniform() - 0.5, rng.uniform() - 0.5};
  return v;
}

TestFunction conj_mul(const TestFunction& a, const TestFunction& b) {
  TestFunction out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::conj(a[i]) * b[i];
  return out;
}

TestFunction mul(const TestFunction& a, const TestFunction& b) {
  TestFunction out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

double zscore(double diff, double se) {
  if (se == 0.0) return diff == 0.0 ? 0.0 : 1e300;
  return std::abs(diff) / se;
}

RateKernel random_symmetric_kernel(RngStream& rng, std::size_t m) {
  std::vector<double> c(m * m, 0.0);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = x; y < m; ++y) {
      const double v = 2.0 * rng.uniform();
      c[x * m + y] = v;
      c[y * m + x] = v;
    }
  return RateKernel::from_matrix(m, std::move(c));
}

// Taylor-series exponential with naive triple-loop products; deliberately
// shares nothing with `expm` so it can serve as an oracle.
DenseMatrix<double> expm_taylor(DenseMatrix<double> a) {
  const std::size_t n = a.rows();
  int squarings = 0;
  double nrm = a.one_norm();
  while (nrm > 0.5) {
    nrm *= 0.5;
    ++squarings;
  }
  a.scale(std::ldexp(1.0, -squarings));
  auto naive_mul = [n](const DenseMatrix<double>& x,
                       const DenseMatrix<double>& y) {
    DenseMatrix<double> z(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += x(i, k) * y(k, j);
        z(i, j) = s;
      }
    return z;
  };
  DenseMatrix<double> sum = DenseMatrix<double>::identity(n);
  DenseMatrix<double> term = DenseMatrix<double>::identity(n);
  for (int k = 1; k <= 60; ++k) {
    term = naive_mul(term, a);
    term.scale(1.0 / k);
    sum.add_scaled(term, 1.0);
    if (term.max_abs() < 1e-18) break;
  }
  for (int i = 0; i < squarings; ++i) sum = naive_mul(sum, sum);
  return sum;
}

}  // namespace

void run_algebra_suite(const Scenario& sc, Report& report) {
  Stopwatch watch;
  const TruncatedSpace ts(sc.site_space(), sc.n_max, sc.basis_limit);
  const RngStream base(sc.seed, 0xA16E);
  const std::uint32_t below = sc.n_max > 0 ? sc.n_max - 1 : 0;
  const double tol = sc.thresholds.exact_algebra;

  double viol_mp = 0.0, viol_zp = 0.0, viol_zm = 0.0;
  for (std::size_t k = 0; k < 50; ++k) {
    RngStream rng = base.substream(k);
    const TestFunction phi = random_phi(rng, sc.m);
    const TestFunction theta = random_phi(rng, sc.m);
    const WeightedOperator kp_theta = build_k_plus(ts, theta);
    const WeightedOperator km_phi = build_k_minus(ts, phi);
    const WeightedOperator k0_ct = build_k_zero(ts, conj_mul(phi, theta));
    viol_mp = std::max(
        viol_mp, max_abs_diff_below(ts, commutator(km_phi, kp_theta),
                                    {k0_ct.mat.scaled(2.0), 0}, below));

    const WeightedOperator k0_theta = build_k_zero(ts, theta);
    const WeightedOperator kp_phi = build_k_plus(ts, phi);
    const WeightedOperator kp_phitheta = build_k_plus(ts, mul(phi, theta));
    viol_zp = std::max(viol_zp,
                       max_abs_diff_below(ts, commutator(k0_theta, kp_phi),
                                          kp_phitheta, below));

    // with k- antilinear in its index, [k0(theta), k-(phi)] = -k-(phi conj(theta))
    TestFunction phi_conj_theta(sc.m);
    for (std::size_t i = 0; i < sc.m; ++i)
      phi_conj_theta[i] = phi[i] * std::conj(theta[i]);
    const WeightedOperator km_pct = build_k_minus(ts, phi_conj_theta);
    viol_zm = std::max(
        viol_zm, max_abs_diff_below(ts, commutator(k0_theta, km_phi),
                                    {km_pct.mat.scaled(-1.0), -1}, below));
  }
  add_check(report, "algebra", "commutation_minus_plus", "Sec 2.3", viol_mp,
            tol, "<=", watch.lap(), std::nullopt, sc.n_max);
  add_check(report, "algebra", "commutation_zero_plus", "Sec 2.3", viol_zp,
            tol, "<=", watch.lap(), std::nullopt, sc.n_max);
  add_check(report, "algebra", "commutation_zero_minus", "Sec 2.3", viol_zm,
            tol, "<=", watch.lap(), std::nullopt, sc.n_max);

  double viol_adj = 0.0;
  for (std::size_t k = 0; k < 100; ++k) {
    RngStream rng = base.substream(1000 + k);
    const TestFunction phi = random_phi(rng, sc.m);
    const WeightedOperator kp = build_k_plus(ts, phi);
    const WeightedOperator km = build_k_minus(ts, phi);
    const std::vector<cplx> f = random_vector(rng, ts.dim());
    const std::vector<cplx> g = random_vector(rng, ts.dim());
    const std::vector<cplx> kpg = kp.mat.apply(std::span<const cplx>(g));
    const std::vector<cplx> kmf = km.mat.apply(std::span<const cplx>(f));
    const cplx lhs = ts.inner_product(f, kpg);
    const cplx rhs = ts.inner_product(kmf, g);
    const double scale =
        ts.weighted_norm(f) * ts.weighted_norm(kpg) + 1.0;
    viol_adj = std::max(viol_adj, std::abs(lhs - rhs) / scale);
  }
  add_check(report, "algebra", "adjointness_plus_minus", "Lem 3", viol_adj,
            tol, "<=", watch.lap(), std::nullopt, sc.n_max);

  {
    RngStream rng = base.substream(2000);
    const TestFunction phi = random_phi(rng, sc.m);
    const WeightedOperator kp = build_k_plus(ts, phi);
    const WeightedOperator km = build_k_minus(ts, phi);
    const WeightedOperator k0 = build_k_zero(ts, phi);
    double bad = 0.0;
    if (!shift_pattern_ok(ts, kp) || *kp.shift != 1) bad += 1.0;
    if (!shift_pattern_ok(ts, km) || *km.shift != -1) bad += 1.0;
    if (!shift_pattern_ok(ts, k0) || *k0.shift != 0) bad += 1.0;
    const WeightedOperator kp_adj = weighted_adjoint(ts, kp);
    if (!shift_pattern_ok(ts, kp_adj) || *kp_adj.shift != -1) bad += 1.0;
    add_check(report, "algebra", "shift_discipline", "Sec 2.3", bad, 0.0,
              "<=", watch.lap(), std::nullopt, sc.n_max);
  }

  {
    double viol = 0.0;
    const TestFunction one = constant_one(sc.m);
    const WeightedOperator kp = build_k_plus(ts, one);
    const WeightedOperator km = build_k_minus(ts, one);
    for (std::size_t k = 0; k < 5; ++k) {
      RngStream rng = base.substream(3000 + k);
      const cplx xi{rng.uniform() - 0.5, rng.uniform() - 0.5};
      // H = (1/i)(xi k+ - conj(xi) k-)
      const SparseMatrix<cplx> h =
          kp.mat.scaled(xi * cplx{0.0, -1.0})
              .plus(km.mat.scaled(std::conj(xi) * cplx{0.0, -1.0}),
                    cplx{-1.0});
      viol = std::max(viol, weighted_hermiticity_violation(ts, h));
    }
    add_check(report, "algebra", "weighted_hermiticity", "Lem 4", viol, tol,
              "<=", watch.lap(), std::nullopt, sc.n_max);
  }
}

void run_pascal_suite(const Scenario& sc, Report& report) {
  Stopwatch watch;
  const SiteSpace space = sc.site_space();
  const RngStream base(sc.seed, 0xBACA);
  const double sigma = sc.thresholds.mc_sigma;
  const std::uint64_t n_samples = sc.mc_samples;

  // one pass of both samplers: moments + per-site histograms
  std::vector<RunningStat> site_mean(space.m);
  RunningStat vacuum_rate;
  const std::size_t hist_size = 64;
  std::vector<std::vector<double>> hist_direct(space.m),
      hist_compound(space.m);
  for (auto& h : hist_direct) h.assign(hist_size, 0.0);
  for (auto& h : hist_compound) h.assign(hist_size, 0.0);
  std::vector<double> total_hist(hist_size, 0.0);
  const RngStream direct_base = base.substream(1);
  const RngStream compound_base = base.substream(2);
  for (std::uint64_t r = 0; r < n_samples; ++r) {
    RngStream rng_d = direct_base.substream(r);
    const Configuration eta = sample_pascal_direct(space, rng_d);
    for (std::size_t i = 0; i < space.m; ++i) {
      site_mean[i].add(eta.occ[i]);
      hist_direct[i][std::min<std::uint32_t>(eta.occ[i], hist_size - 1)] += 1;
    }
    total_hist[std::min<std::uint32_t>(eta.total, hist_size - 1)] += 1;
    vacuum_rate.add(eta.total == 0 ? 1.0 : 0.0);
    RngStream rng_c = compound_base.substream(r);
    const Configuration etac = sample_pascal_compound(space, rng_c);
    for (std::size_t i = 0; i < space.m; ++i)
      hist_compound[i][std::min<std::uint32_t>(etac.occ[i], hist_size - 1)] +=
          1;
  }

  double mean_z = 0.0;
  for (std::size_t i = 0; i < space.m; ++i) {
    const double expected = space.p * space.alpha[i] / (1.0 - space.p);
    const McEstimate est = site_mean[i].estimate();
    mean_z = std::max(mean_z, zscore(est.mean - expected, est.std_error));
  }
  add_check(report, "pascal", "direct_sampler_mean", "Eq. (2.3)", mean_z,
            sigma, "<=", watch.lap());

  {
    const double expected = std::pow(1.0 - space.p, space.total_mass());
    const McEstimate est = vacuum_rate.estimate();
    add_check(report, "pascal", "direct_sampler_vacuum", "Eq. (2.3)",
              zscore(est.mean - expected, est.std_error), sigma, "<=",
              watch.lap());
  }

  {
    double min_p = 1.0;
    for (std::size_t i = 0; i < space.m; ++i)
      min_p = std::min(min_p,
                       chi2_two_sample_pvalue(hist_direct[i],
                                              hist_compound[i]));
    add_check(report, "pascal", "samplers_two_sample_chi2", "Sec 3", min_p,
              sc.thresholds.chi2_significance, ">=", watch.lap());
  }

  {
    // pooled total count vs negative binomial with summed mass
    std::vector<double> expected(hist_size, 0.0);
    double cum = 0.0;
    for (std::uint32_t n = 0; n + 1 < hist_size; ++n) {
      expected[n] = negative_binomial_pmf(space.total_mass(), space.p, n) *
                    static_cast<double>(n_samples);
      cum += expected[n];
    }
    expected[hist_size - 1] =
        std::max(0.0, static_cast<double>(n_samples) - cum);
    add_check(report, "pascal", "merging_pooled_chi2", "Eq. (2.3)",
              chi2_gof_pvalue(total_hist, expected),
              sc.thresholds.chi2_significance, ">=", watch.lap());
  }

  // removal/insertion identity battery
  struct Functional {
    const char* name;
    PapangelouFunctional f;
    double exact = -1.0;  // analytic value of both sides when available
  };
  const double mean_total = space.p * space.total_mass() / (1.0 - space.p);
  const std::vector<Functional> battery = {
      {"papangelou_const", [](std::size_t, const Configuration&) { return 1.0; },
       mean_total},
      {"papangelou_site_indicator",
       [](std::size_t x, const Configuration&) { return x == 0 ? 1.0 : 0.0; },
       space.p * space.alpha[0] / (1.0 - space.p)},
      {"papangelou_count_cutoff",
       [](std::size_t, const Configuration& eta) {
         return eta.total <= 3 ? 1.0 : 0.0;
       }},
      {"papangelou_product_cutoff",
       [](std::size_t x, const Configuration& eta) {
         return (x == 0 && eta.occ[0] <= 2) ? 1.0 : 0.0;
       }},
      {"papangelou_weighted_count",
       [](std::size_t, const Configuration& eta) {
         return std::min<double>(eta.total, 5.0);
       }},
  };
  for (std::size_t bi = 0; bi < battery.size(); ++bi) {
    const auto& fn = battery[bi];
    const auto [lhs, rhs] =
        check_papangelou(space, fn.f, n_samples, base.substream(100 + bi));
    const double combined = std::sqrt(lhs.std_error * lhs.std_error +
                                      rhs.std_error * rhs.std_error);
    double z = zscore(lhs.mean - rhs.mean, combined);
    if (fn.exact >= 0.0) {
      z = std::max(z, zscore(lhs.mean - fn.exact, lhs.std_error));
      z = std::max(z, zscore(rhs.mean - fn.exact, rhs.std_error));
    }
    add_check(report, "pascal", fn.name, "Eq. (3.2)", z, sigma, "<=",
              watch.lap());
  }

  {
    const std::vector<double> f_one(space.m, 1.0);
    const auto [mc, closed] =
        check_laplace(space, f_one, n_samples, base.substream(200));
    add_check(report, "pascal", "laplace_functional", "Sec 3",
              zscore(mc.mean - closed, mc.std_error), sigma, "<=",
              watch.lap());
  }
  {
    // f -> +inf limit: closed form must collapse to the vacuum probability
    const std::vector<double> f_big(space.m, 30.0);
    const double closed = laplace_functional_closed_form(space, f_big);
    const double vacuum = std::pow(1.0 - space.p, space.total_mass());
    add_check(report, "pascal", "laplace_vacuum_limit", "Sec 3",
              std::abs(closed / vacuum - 1.0), sc.thresholds.exact_algebra,
              "<=", watch.lap());
  }

  if (space.m >= 2) {
    // independence over disjoint blocks, exactly from the weights
    const std::uint32_t n_max = std::min<std::uint32_t>(sc.n_max, 12);
    const TruncatedSpace ts(space, n_max, sc.basis_limit);
    const double a0 = space.alpha[0];
    const double a_rest = space.total_mass() - a0;
    std::vector<std::vector<double>> fiber(
        n_max + 1, std::vector<double>(n_max + 1, 0.0));
    for (std::size_t g = 0; g < ts.dim(); ++g) {
      const Configuration& eta = ts.config_at(g);
      fiber[eta.occ[0]][eta.total - eta.occ[0]] += ts.weight_at(g);
    }
    double viol = 0.0;
    for (std::uint32_t i = 0; i <= n_max; ++i)
      for (std::uint32_t j = 0; i + j <= n_max; ++j) {
        const double expect = negative_binomial_pmf(a0, space.p, i) *
                              negative_binomial_pmf(a_rest, space.p, j);
        viol = std::max(viol, std::abs(fiber[i][j] - expect));
      }
    add_check(report, "pascal", "merging_exact_fibers", "Eq. (2.3)", viol,
              sc.thresholds.exact_algebra, "<=", watch.lap(), ts.coverage(),
              n_max);
  }

  {
    // bit-for-bit reproducibility of the stream discipline
    double mismatches = 0.0;
    for (std::uint64_t r = 0; r < 200; ++r) {
      RngStream a = base.substream(300).substream(r);
      RngStream b = base.substream(300).substream(r);
      const Configuration ea = sample_pascal_direct(space, a);
      const Configuration eb = sample_pascal_direct(space, b);
      if (!(ea == eb)) mismatches += 1.0;
      RngStream c = base.substream(301).substream(r);
      RngStream d = base.substream(301).substream(r);
      if (!(sample_pascal_compound(space, c) ==
            sample_pascal_compound(space, d)))
        mismatches += 1.0;
    }
    add_check(report, "pascal", "determinism_bitexact", "artifact",
              mismatches, 0.0, "<=", watch.lap());
  }
}

void run_meixner_suite(const Scenario& sc, Report& report) {
  Stopwatch watch;
  const double tol_exact = sc.thresholds.exact_algebra;

  {
    double viol = 0.0;
    for (const MeixnerParams prm :
         {MeixnerParams{1.0, 0.5}, MeixnerParams{1.3, 0.4}}) {
      for (std::uint32_t n = 0; n <= 10; ++n)
        for (std::uint32_t x = 0; x <= 10; ++x)
          viol = std::max(viol, std::abs(meixner_M(n, x, prm) -
                                         meixner_M(x, n, prm)));
    }
    add_check(report, "meixner", "symmetry_n_x", "App A", viol, 0.0, "<=",
              watch.lap());
  }

  {
    const MeixnerParams prm{1.0, 0.5};
    const double onema = std::pow(1.0 - prm.p, prm.a);
    double viol = 0.0;
    for (std::uint32_t n = 0; n <= 10; ++n)
      for (std::uint32_t mdeg = 0; mdeg <= 10; ++mdeg) {
        double s = 0.0;
        for (std::uint32_t x = 0; x <= 200; ++x) {
          const double w =
              std::pow(prm.p, x) * rising_factorial(prm.a, x) / factorial(x);
          s += meixner_M(n, x, prm) * meixner_M(mdeg, x, prm) * onema * w;
        }
        const double wn =
            std::pow(prm.p, n) * rising_factorial(prm.a, n) / factorial(n);
        viol = std::max(viol, std::abs(s * wn - (n == mdeg ? 1.0 : 0.0)));
      }
    add_check(report, "meixner", "orthogonality", "App A", viol, 1e-10, "<=",
              watch.lap());
  }

  {
    // squared norm of the monic family: n! (a)_n p^n / (1-p)^{2n}
    const MeixnerParams prm{1.5, 0.4};
    const double onema = std::pow(1.0 - prm.p, prm.a);
    double viol = 0.0;
    for (std::uint32_t n = 0; n <= 8; ++n) {
      double s = 0.0;
      for (std::uint32_t x = 0; x <= 300; ++x) {
        const double w =
            negative_binomial_pmf(prm.a, prm.p, x) / onema * onema;
        const double v = meixner_monic(n, x, prm);
        s += v * v * w;
      }
      const double expect = factorial(n) * rising_factorial(prm.a, n) *
                            std::pow(prm.p, n) /
                            std::pow(1.0 - prm.p, 2.0 * n);
      viol = std::max(viol, std::abs(s / expect - 1.0));
    }
    add_check(report, "meixner", "l2_norm_monic", "App A", viol, 1e-9, "<=",
              watch.lap());
  }

  {
    const MeixnerParams prm{1.5, 0.3};
    double prev_err = 1e300;
    double monotone_bad = 0.0;
    double final_err = 0.0;
    for (std::uint32_t terms : {5u, 10u, 20u, 60u}) {
      const auto r = meixner_generating_function(0.4, 3.0, prm, terms);
      final_err = std::abs(r.partial_sum - r.closed_form);
      if (final_err > prev_err + 1e-15) monotone_bad += 1.0;
      prev_err = final_err;
    }
    add_check(report, "meixner", "generating_function", "Eq. (A.2)",
              final_err, 1e-10, "<=", watch.lap());
    add_check(report, "meixner", "generating_function_monotone", "Eq. (A.2)",
              monotone_bad, 0.0, "<=", watch.lap());
  }

  {
    // degree one explicitly: x - p a / (1-p)
    double viol = 0.0;
    for (const MeixnerParams prm :
         {MeixnerParams{0.7, 0.25}, MeixnerParams{2.0, 0.6}}) {
      for (double x : {0.0, 1.0, 3.5, 11.0}) {
        const double want = x - prm.p * prm.a / (1.0 - prm.p);
        viol = std::max(viol, std::abs(meixner_monic(1, x, prm) - want));
      }
    }
    add_check(report, "meixner", "monic_degree_one", "App A", viol, tol_exact,
              "<=", watch.lap());
  }

  {
    // recurrence coefficients against the terminating sum across the whole
    // low-degree range
    const MeixnerParams prm{1.2, 0.45};
    double viol = 0.0;
    for (std::uint32_t n = 1; n <= 30; ++n)
      for (double x : {0.0, 1.0, 2.5, 7.0, 16.0}) {
        const double via_sum = meixner_monic(n, x, prm);
        const double via_rec = meixner_monic_recurrence(n, x, prm);
        viol = std::max(viol, std::abs(via_rec - via_sum) /
                                  std::max(1.0, std::abs(via_sum)));
      }
    add_check(report, "meixner", "recurrence_matches_sum", "Eq. (A.1)", viol,
              1e-10, "<=", watch.lap());

    // cross-route above the sum cutoff: recurrence against the n <-> x
    // symmetry evaluation; the recurrence sheds precision near the support
    // edge, hence the wider tolerance
    double viol_high = 0.0;
    for (std::uint32_t n : {31u, 35u, 40u})
      for (std::uint32_t x = 0; x <= 6; ++x) {
        const double via_symmetry = meixner_monic(n, x, prm);
        const double via_rec = meixner_monic_recurrence(n, x, prm);
        viol_high = std::max(viol_high,
                             std::abs(via_rec - via_symmetry) /
                                 std::max(1.0, std::abs(via_symmetry)));
      }
    add_check(report, "meixner", "recurrence_high_degree", "Eq. (A.1)",
              viol_high, 1e-6, "<=", watch.lap());
  }

  {
    // multiset expansion reproduces the product of univariate monic
    // polynomials for an indicator tensor
    const SiteSpace space(2, {0.9, 1.4}, 0.35);
    const TruncatedSpace ts(space, 8);
    const std::uint32_t n = 3;
    const SectorBasis& basis = ts.sector(n);
    double viol = 0.0;
    for (std::size_t pick = 0; pick < basis.size(); ++pick) {
      const Configuration& kappa = basis.at(pick);
      std::vector<cplx> f_sector(basis.size(), cplx{});
      double multiplicity = 1.0;
      for (std::uint32_t kx : kappa.occ) multiplicity *= factorial(kx);
      f_sector[pick] = multiplicity / factorial(n);  // symmetric tensor value
      const PolynomialExpansion e = build_I_n(ts, f_sector, n);
      for (std::size_t g = 0; g < ts.dim(); ++g) {
        const Configuration& eta = ts.config_at(g);
        double prod = 1.0;
        for (std::size_t i = 0; i < space.m; ++i)
          prod *= meixner_monic(kappa.occ[i], eta.occ[i],
                                {space.alpha[i], space.p});
        viol = std::max(viol,
                        std::abs(evaluate_expansion(e, eta, space) - prod));
      }
    }
    add_check(report, "meixner", "product_formula", "Sec 2.5", viol,
              tol_exact, "<=", watch.lap());
  }

  {
    // merged block: the full-space indicator tensor must collapse to a
    // single univariate polynomial in the total count
    const SiteSpace space(2, {0.8, 1.3}, 0.4);
    const TruncatedSpace ts(space, 20);
    double viol = 0.0;
    for (std::uint32_t n : {1u, 2u, 3u}) {
      const std::vector<cplx> f_sector(ts.sector(n).size(), cplx{1.0});
      const PolynomialExpansion e = build_I_n(ts, f_sector, n);
      const MeixnerParams merged{space.total_mass(), space.p};
      for (std::size_t g = 0; g < ts.dim(); ++g) {
        const Configuration& eta = ts.config_at(g);
        const double want = meixner_monic(n, eta.total, merged);
        viol = std::max(
            viol, std::abs(evaluate_expansion(e, eta, space) - want) /
                      std::max(1.0, std::abs(want)));
      }
    }
    add_check(report, "meixner", "merged_block", "Sec 2.5", viol, 1e-10, "<=",
              watch.lap());
  }

  {
    // orthogonality against lower-degree monomials on a deep truncation
    const SiteSpace space(2, {1.0, 0.7}, 0.4);
    const TruncatedSpace ts(space, 70);
    double viol = 0.0;
    for (std::uint32_t n : {2u, 3u}) {
      std::vector<cplx> f_sector(ts.sector(n).size());
      RngStream rng(sc.seed, 0x3E1 + n);
      for (auto& v : f_sector) v = cplx{rng.uniform() + 0.25, 0.0};
      const PolynomialExpansion e = build_I_n(ts, f_sector, n);
      const std::vector<cplx> in_vals = evaluate_expansion_on(e, ts);
      const double in_norm = ts.weighted_norm(in_vals);
      // monomials eta_0^a eta_1^b with a+b <= n-1
      for (std::uint32_t a = 0; a + 1 <= n; ++a)
        for (std::uint32_t b = 0; a + b + 1 <= n; ++b) {
          std::vector<cplx> g(ts.dim());
          for (std::size_t gi = 0; gi < ts.dim(); ++gi) {
            const Configuration& eta = ts.config_at(gi);
            g[gi] = std::pow(static_cast<double>(eta.occ[0]), a) *
                    std::pow(static_cast<double>(eta.occ[1]), b);
          }
          const double g_norm = ts.weighted_norm(g);
          const cplx ip = ts.inner_product(g, in_vals);
          viol = std::max(viol, std::abs(ip) / (g_norm * in_norm));
        }
    }
    add_check(report, "meixner", "orthogonality_lower_degree", "Sec 2.5",
              viol, sc.thresholds.truncation_tight, "<=", watch.lap());
  }
}

void run_sip_suite(const Scenario& sc, Report& report) {
  Stopwatch watch;
  const SiteSpace space = sc.site_space();
  const RateKernel kernel = sc.rate_kernel();
  const RngStream base(sc.seed, 0x51B);

  {
    // reversibility battery over random masses, rates and p
    double rel = 0.0;
    for (std::size_t k = 0; k < 20; ++k) {
      RngStream rng = base.substream(k);
      const std::size_t m = 1 + (k % 3);
      std::vector<double> alpha(m);
      for (auto& a : alpha) a = 0.2 + 1.8 * rng.uniform();
      const SiteSpace sp(m, alpha, 0.1 + 0.75 * rng.uniform());
      const RateKernel c = random_symmetric_kernel(rng, m);
      for (std::uint32_t n = 1; n <= 4; ++n) {
        const DetailedBalanceResult r = check_detailed_balance(sp, c, n);
        if (r.scale > 0.0)
          rel = std::max(rel, r.max_violation / r.scale);
      }
    }
    add_check(report, "sip", "detailed_balance", "Sec 2.2", rel,
              sc.thresholds.exact_algebra, "<=", watch.lap());
  }

  {
    // W L symmetric on the scenario space
    double rel = 0.0;
    for (std::uint32_t n = 1; n <= std::min<std::uint32_t>(4, sc.n_max); ++n) {
      const SectorGenerator gen = build_generator(space, kernel, n);
      std::vector<double> w(gen.basis.size());
      for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = pascal_weight(space, gen.basis.at(i));
      double viol = 0.0, scale = 0.0;
      gen.mat.for_each([&](std::size_t i, std::size_t j, double v) {
        const double lhs = w[i] * v;
        const double rhs = w[j] * gen.mat.at(j, i);
        viol = std::max(viol, std::abs(lhs - rhs));
        scale = std::max(scale, std::abs(lhs));
      });
      if (scale > 0.0) rel = std::max(rel, viol / scale);
    }
    add_check(report, "sip", "weight_generator_symmetric", "Sec 2.2", rel,
              sc.thresholds.exact_algebra, "<=", watch.lap());
  }

  const std::uint32_t small_nmax = std::min<std::uint32_t>(sc.n_max, 8);
  const TruncatedSpace ts_small(space, small_nmax, sc.basis_limit);

  {
    // Eq. (2.7) assembly against the direct generator, below the boundary
    double viol = 0.0;
    for (std::size_t k = 0; k < 10; ++k) {
      RngStream rng = base.substream(100 + k);
      std::vector<double> phi(space.m);
      for (auto& v : phi) v = rng.uniform();  // c = 2 phi phi^T stays a rate
      const WeightedOperator alg = build_generator_algebraic(ts_small, phi);
      const RateKernel c = RateKernel::product_form(phi);
      std::vector<Triplet<cplx>> trips;
      for (std::uint32_t n = 0; n <= small_nmax; ++n) {
        const SectorGenerator gen = build_generator(space, c, n);
        const std::size_t off = ts_small.sector_offset(n);
        gen.mat.for_each([&](std::size_t i, std::size_t j, double v) {
          trips.push_back({off + i, off + j, cplx{v}});
        });
      }
      const WeightedOperator direct{
          SparseMatrix<cplx>::from_triplets(ts_small.dim(), ts_small.dim(),
                                            std::move(trips), 0.0),
          0};
      viol = std::max(viol, max_abs_diff_below(ts_small, alg, direct,
                                               small_nmax - 1));
    }
    add_check(report, "sip", "algebraic_rewrite", "Eq. (2.7)", viol,
              sc.thresholds.block_exact, "<=", watch.lap(), std::nullopt,
              small_nmax);
  }

  {
    double viol = check_consistency(ts_small, kernel);
    for (std::size_t k = 0; k < 3; ++k) {
      RngStream rng = base.substream(200 + k);
      const std::size_t m = 2 + (k % 2);
      std::vector<double> alpha(m);
      for (auto& a : alpha) a = 0.3 + 1.5 * rng.uniform();
      const SiteSpace sp(m, alpha, 0.15 + 0.6 * rng.uniform());
      const TruncatedSpace tsx(sp, 6);
      viol = std::max(viol,
                      check_consistency(tsx, random_symmetric_kernel(rng, m)));
    }
    add_check(report, "sip", "consistency_commutator", "Sec 2.4", viol,
              sc.thresholds.block_exact, "<=", watch.lap(), std::nullopt,
              small_nmax);
  }

  if (space.m >= 2 && small_nmax >= 2) {
    // negative control: one perturbed rate must break consistency
    std::vector<SparseMatrix<double>> gens;
    for (std::uint32_t n = 0; n <= small_nmax; ++n)
      gens.push_back(build_generator(space, kernel, n).mat);
    std::vector<Triplet<double>> trips;
    gens[2].for_each([&](std::size_t i, std::size_t j, double v) {
      trips.push_back({i, j, v});
    });
    // bump one off-diagonal transition and rebalance its diagonal
    trips.push_back({0, 1, 0.1});
    trips.push_back({0, 0, -0.1});
    gens[2] = SparseMatrix<double>::from_triplets(
        ts_small.sector(2).size(), ts_small.sector(2).size(),
        std::move(trips), 0.0);
    const double detected = check_consistency_family(ts_small, gens);
    add_check(report, "sip", "consistency_negative_control", "Sec 2.4",
              detected, 1e-4, ">=", watch.lap());
  }

  {
    const double t = sc.times.size() > 1 ? sc.times[1] : sc.times[0];
    double exact = 0.0, evolved = 0.0;
    for (std::uint32_t k = 1; k <= 3; ++k) {
      const FactorialCheckResult r =
          check_conservative_factorials(ts_small, kernel, t, k);
      exact = std::max(exact, r.exact_violation);
      evolved = std::max(evolved, r.semigroup_violation);
    }
    add_check(report, "sip", "factorials_exact", "Prop 4", exact, 0.0, "<=",
              watch.lap());
    add_check(report, "sip", "factorials_preserved", "Prop 4", evolved,
              sc.thresholds.block_exact, "<=", watch.lap());
  }

  {
    double viol = 0.0;
    for (std::uint32_t n = 0; n <= std::min<std::uint32_t>(6, sc.n_max); ++n) {
      const SectorGenerator gen = build_generator(space, kernel, n);
      const std::vector<double> ones(gen.basis.size(), 1.0);
      for (double t : sc.times) {
        const std::vector<double> out = semigroup_apply(gen, t, ones);
        for (double v : out) viol = std::max(viol, std::abs(v - 1.0));
      }
    }
    add_check(report, "sip", "semigroup_conservative", "Prop 4", viol,
              sc.thresholds.block_exact, "<=", watch.lap());
  }

  {
    // self-adjointness of exp(tL) in the weighted sector inner product
    double rel = 0.0;
    const double t = sc.times.front();
    for (std::uint32_t n = 1; n <= std::min<std::uint32_t>(6, sc.n_max); ++n) {
      const SectorGenerator gen = build_generator(space, kernel, n);
      const DenseMatrix<double> pt = sector_semigroup(gen, t);
      std::vector<double> w(gen.basis.size());
      for (std::size_t i = 0; i < w.size(); ++i)
        w[i] = pascal_weight(space, gen.basis.at(i));
      RngStream rng = base.substream(400 + n);
      const std::vector<cplx> f = random_vector(rng, w.size());
      const std::vector<cplx> g = random_vector(rng, w.size());
      const std::vector<cplx> ptf = apply(pt, std::span<const cplx>(f));
      const std::vector<cplx> ptg = apply(pt, std::span<const cplx>(g));
      const cplx lhs = kernels::weighted_dot(w.data(), f.data(), ptg.data(),
                                             w.size());
      const cplx rhs = kernels::weighted_dot(w.data(), ptf.data(), g.data(),
                                             w.size());
      rel = std::max(rel, std::abs(lhs - rhs) / (std::abs(lhs) + 1.0));
    }
    add_check(report, "sip", "semigroup_self_adjoint", "Sec 2.2", rel,
              sc.thresholds.block_exact, "<=", watch.lap());
  }

  if (space.m >= 2 && sc.n_max >= 2) {
    // trajectory statistics against the exact sector semigroup
    const std::uint32_t n = 2;
    const SectorGenerator gen = build_generator(space, kernel, n);
    const Configuration eta0 = gen.basis.at(0);
    const double t = 1.0;
    const DenseMatrix<double> pt = sector_semigroup(gen, t);
    const std::size_t dim = gen.basis.size();
    std::vector<double> observed(dim, 0.0);
    const std::uint64_t replicas = 10000;
    const RngStream gillespie_base = base.substream(500);
    for (std::uint64_t r = 0; r < replicas; ++r) {
      RngStream rng = gillespie_base.substream(r);
      const auto events = gillespie_simulate(space, kernel, eta0, t, rng);
      const Configuration final_state = replay_events(eta0, events);
      observed[*gen.basis.index_of(final_state.occ)] += 1.0;
    }
    std::vector<double> expected(dim);
    const std::size_t row0 = *gen.basis.index_of(eta0.occ);
    for (std::size_t j = 0; j < dim; ++j)
      expected[j] = pt(row0, j) * static_cast<double>(replicas);
    add_check(report, "sip", "gillespie_vs_semigroup", "Eq. (2.2)",
              chi2_gof_pvalue(observed, expected),
              sc.thresholds.chi2_significance, ">=", watch.lap());

    // deterministic replay for the exported trajectory; start a few sectors
    // up so the sample has some activity
    const std::uint32_t n_traj = std::min<std::uint32_t>(4, sc.n_max);
    const Configuration traj0 =
        SectorBasis(space.m, n_traj).at(0);
    const double t_traj =
        *std::max_element(sc.times.begin(), sc.times.end());
    RngStream rng_a = base.substream(501);
    RngStream rng_b = base.substream(501);
    const auto traj_a = gillespie_simulate(space, kernel, traj0, t_traj,
                                           rng_a);
    const auto traj_b = gillespie_simulate(space, kernel, traj0, t_traj,
                                           rng_b);
    double mismatches = traj_a.size() == traj_b.size() ? 0.0 : 1.0;
    if (mismatches == 0.0)
      for (std::size_t i = 0; i < traj_a.size(); ++i)
        if (traj_a[i].time != traj_b[i].time ||
            traj_a[i].from_site != traj_b[i].from_site ||
            traj_a[i].to_site != traj_b[i].to_site)
          mismatches += 1.0;
    add_check(report, "sip", "gillespie_determinism", "artifact", mismatches,
              0.0, "<=", watch.lap());
    report.trajectory = traj_a;
  }
}

void run_unitary_suite(const Scenario& sc, Report& report) {
  Stopwatch watch;
  const SiteSpace space = sc.site_space();
  const RateKernel kernel = sc.rate_kernel();
  const RngStream base(sc.seed, 0x713);
  const double xs = xi_star(space.p);

  const TruncatedSpace ts(space, sc.n_max, sc.basis_limit);
  const DenseMatrix<cplx> u_star = build_unitary_core(ts, xs);
  const DenseMatrix<cplx> u_full =
      apply_sector_phase(ts, u_star, 0.7);

  add_check(report, "unitary", "weighted_unitarity", "Eq. (2.5)",
            weighted_unitarity_violation(ts, u_full),
            sc.thresholds.block_exact, "<=", watch.lap(), ts.coverage(),
            sc.n_max);

  // orthogonalization residuals with monotone decay across truncations
  std::vector<std::uint32_t> nmax_points;
  for (std::uint32_t cand : {sc.n_max / 4, sc.n_max / 2, sc.n_max}) {
    const std::uint32_t nm =
        std::max<std::uint32_t>(4, std::min(cand, sc.n_max));
    if (nmax_points.empty() || nm > nmax_points.back())
      nmax_points.push_back(nm);
  }
  double decay_violations = 0.0;
  for (std::uint32_t n = 0; n <= std::min<std::uint32_t>(2, sc.n_max); ++n) {
    const std::string name = "theorem_residual_n" + std::to_string(n);
    double prev = -1.0;
    double final_residual = 0.0;
    for (std::uint32_t nm : nmax_points) {
      const TruncatedSpace tsk(space, nm, sc.basis_limit);
      std::vector<cplx> f_sector(tsk.sector(n).size(), cplx{});
      if (n <= 1) {
        f_sector[0] = 1.0;  // vacuum / single-particle indicator
      } else if (sc.m >= 2) {
        // indicator of one particle on each of the first two sites
        std::vector<std::uint32_t> occ(sc.m, 0);
        occ[0] = 1;
        occ[1] = 1;
        f_sector[*tsk.sector(n).index_of(occ)] = 1.0;
      } else {
        f_sector[0] = 1.0;
      }
      const TruncCheck r =
          nm == sc.n_max
              ? apply_theorem_check(tsk, n, f_sector, &u_star)
              : apply_theorem_check(tsk, n, f_sector, nullptr);
      report.convergence.push_back({name, nm, r.residual, r.coverage});
      if (prev >= 0.0 && r.residual >= prev) decay_violations += 1.0;
      prev = r.residual;
      final_residual = r.residual;
    }
    add_check(report, "unitary", name, "Thm 2.5", final_residual,
              sc.thresholds.truncation_tight, "<=", watch.lap(),
              ts.coverage(), sc.n_max);
  }
  add_check(report, "unitary", "theorem_monotone_decay", "Thm 2.5",
            decay_violations, 0.0, "<=", watch.lap());

  {
    const TestFunction z0(space.m, cplx{0.0});
    const TruncCheck r0 = check_exponential_transform(ts, xs, z0, &u_star);
    add_check(report, "unitary", "exp_transform_vacuum", "Prop 5",
              r0.residual, sc.thresholds.truncation, "<=", watch.lap(),
              r0.coverage, sc.n_max);
    const TestFunction z(space.m, cplx{0.3});
    const TruncCheck r = check_exponential_transform(ts, cplx{0.4}, z);
    add_check(report, "unitary", "exp_transform_generic", "Prop 5",
              r.residual, sc.thresholds.truncation, "<=", watch.lap(),
              r.coverage, sc.n_max);
    const TruncCheck rid = check_exponential_transform(ts, cplx{}, z);
    add_check(report, "unitary", "exp_transform_identity", "Prop 5",
              rid.residual, 0.0, "<=", watch.lap());
  }

  {
    // group structure of the Mobius action
    double viol = 0.0;
    for (double x1 : {0.3, -0.7}) {
      for (double x2 : {0.45, 1.1}) {
        const MobiusAction a1 = MobiusAction::from_xi(x1);
        const MobiusAction a2 = MobiusAction::from_xi(x2);
        const MobiusAction a12 = MobiusAction::from_xi(x1 + x2);
        // 2x2 product of [[a, b], [conj b, conj a]] blocks
        const cplx pa = a1.a * a2.a + a1.b * std::conj(a2.b);
        const cplx pb = a1.a * a2.b + a1.b * std::conj(a2.a);
        viol = std::max({viol, std::abs(pa - a12.a), std::abs(pb - a12.b)});
      }
    }
    for (const cplx xi : {cplx{0.5, 0.2}, cplx{-0.1, 0.9}}) {
      const MobiusAction ma = MobiusAction::from_xi(xi);
      viol = std::max(viol, std::abs(std::norm(ma.a) - std::norm(ma.b) - 1.0));
    }
    add_check(report, "unitary", "mobius_group_law", "Sec 5", viol,
              sc.thresholds.exact_algebra, "<=", watch.lap());

    double sup = 0.0;
    RngStream rng = base.substream(7);
    for (std::size_t k = 0; k < 50; ++k) {
      const cplx xi{2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0};
      TestFunction z(space.m);
      for (auto& v : z)
        v = 0.95 * cplx{rng.uniform() - 0.5, rng.uniform() - 0.5} * 2.0;
      for (auto& v : z)
        if (std::abs(v) >= 0.95) v *= 0.9 / std::abs(v);
      const TestFunction zx = mobius_transform(MobiusAction::from_xi(xi), z);
      for (const cplx& v : zx) sup = std::max(sup, std::abs(v));
    }
    add_check(report, "unitary", "mobius_disk_preserved", "Sec 5", sup, 1.0,
              "<=", watch.lap());
  }

  {
    // multiplier closed forms
    const MobiusAction ma = MobiusAction::from_xi(xs);
    const TestFunction z0(space.m, cplx{0.0});
    const cplx c0 = multiplier(ma, space, z0);
    const double want0 = std::pow(1.0 - space.p, space.total_mass() / 2.0);
    double viol = std::abs(c0 - want0) / want0;

    const double s = 0.45;
    TestFunction zb(space.m, cplx{0.0});
    zb[0] = s * std::sqrt(space.p);  // block B = {site 0}
    const cplx cb = multiplier(ma, space, zb);
    const double wantb = want0 * std::pow(1.0 + space.p * s, -space.alpha[0]);
    viol = std::max(viol, std::abs(cb - wantb) / wantb);
    add_check(report, "unitary", "multiplier_closed_forms", "Cor 5", viol,
              sc.thresholds.exact_algebra, "<=", watch.lap());
  }

  {
    // truncated norm of the exponential state increases to the closed form
    const SiteSpace sp(2, {1.0, 1.0}, 0.3);
    const TestFunction z(2, cplx{0.4});
    const double closed = exponential_state_norm_sq(sp, z);
    double prev = -1.0;
    double monotone_bad = 0.0, final_gap = 0.0;
    for (std::uint32_t nm : {20u, 40u, 60u}) {
      const TruncatedSpace tsn(sp, nm);
      const std::vector<cplx> ez = exponential_state(tsn, z);
      const double trunc_sq =
          tsn.inner_product(ez, ez).real();
      if (trunc_sq < prev) monotone_bad += 1.0;
      prev = trunc_sq;
      final_gap = std::abs(trunc_sq / closed - 1.0);
      report.convergence.push_back(
          {"exp_state_norm", nm, final_gap, tsn.coverage()});
    }
    add_check(report, "unitary", "exp_state_norm_gap", "Sec 5", final_gap,
              sc.thresholds.truncation_tight, "<=", watch.lap(), std::nullopt,
              60);
    add_check(report, "unitary", "exp_state_norm_monotone", "Sec 5",
              monotone_bad, 0.0, "<=", watch.lap());
  }

  {
    double worst = 0.0;
    const std::uint32_t n_probe = std::min<std::uint32_t>(3, sc.n_max);
    for (double t : sc.times)
      worst = std::max(
          worst, check_symmetry(ts, kernel, {cplx{xs}, 0.7}, t, n_probe, 5,
                                base.substream(900), &u_full));
    add_check(report, "unitary", "symmetry_commutation", "Thm 2.4", worst,
              sc.thresholds.truncation, "<=", watch.lap(), ts.coverage(),
              sc.n_max);
  }

  {
    std::vector<cplx> vac(ts.dim(), cplx{});
    vac[0] = 1.0;
    const std::vector<cplx> kt = k_transform(ts, vac);
    double viol = 0.0;
    for (const cplx& v : kt) viol = std::max(viol, std::abs(v - 1.0));
    add_check(report, "unitary", "k_transform_vacuum", "Sec 2.5", viol,
              sc.thresholds.exact_algebra, "<=", watch.lap());

    // commutation with the semigroup on low-sector probes
    const BlockSemigroup pt(ts, kernel, sc.times.front());
    RngStream rng = base.substream(901);
    double comm = 0.0;
    const std::size_t probe_dim =
        ts.sector_offset(std::min<std::uint32_t>(3, sc.n_max)) +
        ts.sector(std::min<std::uint32_t>(3, sc.n_max)).size();
    for (std::size_t k = 0; k < 3; ++k) {
      std::vector<cplx> f(ts.dim(), cplx{});
      for (std::size_t i = 0; i < probe_dim; ++i)
        f[i] = cplx{rng.uniform() - 0.5, rng.uniform() - 0.5};
      const double nrm = ts.weighted_norm(f);
      for (auto& v : f) v /= nrm;
      const std::vector<cplx> a = k_transform(ts, pt.apply(f));
      const std::vector<cplx> b = pt.apply(k_transform(ts, f));
      std::vector<cplx> diff(ts.dim());
      for (std::size_t i = 0; i < ts.dim(); ++i) diff[i] = a[i] - b[i];
      comm = std::max(comm, ts.weighted_norm(diff));
    }
    add_check(report, "unitary", "k_transform_commutes", "Sec 2.5", comm,
              1e-9, "<=", watch.lap());
  }
}

void run_intertwine_suite(const Scenario& sc, Report& report) {
  Stopwatch watch;
  const SiteSpace space = sc.site_space();
  const RateKernel kernel = sc.rate_kernel();
  const std::uint32_t k_max = std::min<std::uint32_t>(6, sc.n_max);
  const TruncatedSpace ts(space, k_max, sc.basis_limit);

  {
    RngStream rng(sc.seed, 0x17E1);
    std::vector<cplx> f_sector(ts.sector(1).size());
    for (auto& v : f_sector) v = cplx{rng.uniform() + 0.2, 0.0};
    const double r =
        check_intertwining(ts, kernel, 1, f_sector, 1.0, k_max);
    add_check(report, "intertwine", "intertwining_n1", "Cor 2.5", r,
              sc.thresholds.block_exact, "<=", watch.lap(), std::nullopt,
              k_max);
    const double r0 =
        check_intertwining(ts, kernel, 1, f_sector, 0.0, k_max);
    add_check(report, "intertwine", "intertwining_t0", "Cor 2.5", r0, 0.0,
              "<=", watch.lap());
  }

  if (sc.n_max >= 2) {
    const SiteSpace sp3(3, {0.8, 1.1, 0.6}, 0.35);
    const TruncatedSpace ts3(sp3, 6);
    RngStream rng(sc.seed, 0x17E2);
    const RateKernel c3 = random_symmetric_kernel(rng, 3);
    std::vector<cplx> f_sector(ts3.sector(2).size());
    for (auto& v : f_sector) v = cplx{rng.uniform() + 0.2, 0.0};
    const double r = check_intertwining(ts3, c3, 2, f_sector, 0.5, 6);
    add_check(report, "intertwine", "intertwining_n2", "Cor 2.5", r,
              sc.thresholds.block_exact, "<=", watch.lap(), std::nullopt, 6);

    // independent dense-arithmetic oracle for the same identity
    double oracle_residual = 0.0;
    double max_f = 0.0;
    for (const auto& v : f_sector) max_f = std::max(max_f, std::abs(v));
    std::vector<cplx> f(f_sector.begin(), f_sector.end());
    for (auto& v : f) v /= max_f;
    const PolynomialExpansion before = build_I_n(ts3, f, 2);
    DenseMatrix<double> ln =
        build_generator(sp3, c3, 2).mat.to_dense();
    ln.scale(0.5);
    const DenseMatrix<double> ptn = expm_taylor(ln);
    const std::vector<cplx> f_t = apply(ptn, std::span<const cplx>(f));
    const PolynomialExpansion after = build_I_n(ts3, f_t, 2);
    for (std::uint32_t k = 0; k <= 6; ++k) {
      const SectorBasis& basis = ts3.sector(k);
      std::vector<cplx> lhs(basis.size()), rhs(basis.size());
      for (std::size_t i = 0; i < basis.size(); ++i) {
        lhs[i] = evaluate_expansion(before, basis.at(i), sp3);
        rhs[i] = evaluate_expansion(after, basis.at(i), sp3);
      }
      DenseMatrix<double> lk = build_generator(sp3, c3, k).mat.to_dense();
      lk.scale(0.5);
      const DenseMatrix<double> ptk = expm_taylor(lk);
      const std::vector<cplx> lhs_t = apply(ptk, std::span<const cplx>(lhs));
      for (std::size_t i = 0; i < basis.size(); ++i)
        oracle_residual =
            std::max(oracle_residual, std::abs(lhs_t[i] - rhs[i]));
    }
    const double agreement = std::abs(oracle_residual - r);
    add_check(report, "intertwine", "intertwining_oracle", "Cor 2.5",
              std::max(oracle_residual, agreement),
              sc.thresholds.block_exact, "<=", watch.lap(), std::nullopt, 6);
  }
}

Report run_scenario(const Scenario& sc) {
  sc.validate();
  Report report;
  report.seed = sc.seed;
  report.scenario = sc.to_json();
  report.backend = kernels::backend_name(kernels::active_backend());
  const std::set<std::string> selected(sc.suites.begin(), sc.suites.end());
  if (selected.count("algebra")) run_algebra_suite(sc, report);
  if (selected.count("meixner")) run_meixner_suite(sc, report);
  if (selected.count("pascal")) run_pascal_suite(sc, report);
  if (selected.count("sip")) run_sip_suite(sc, report);
  if (selected.count("unitary")) run_unitary_suite(sc, report);
  if (selected.count("intertwine")) run_intertwine_suite(sc, report);
  report.finalize();
  return report;
}

}  // namespace su11::verify
