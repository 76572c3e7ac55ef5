#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "su11/sip.hpp"
#include "su11/stats.hpp"

using namespace su11;

namespace {

RateKernel random_kernel(RngStream& rng, std::size_t m) {
  std::vector<double> c(m * m);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t y = x; y < m; ++y) {
      const double v = 2.0 * rng.uniform();
      c[x * m + y] = v;
      c[y * m + x] = v;
    }
  return RateKernel::from_matrix(m, std::move(c));
}

}  // namespace

TEST_CASE("rate kernel validation") {
  CHECK_THROWS_AS(RateKernel::from_matrix(2, {0.0, 1.0, 2.0, 0.0}),
                  ValidationError);
  CHECK_THROWS_AS(RateKernel::from_matrix(2, {0.0, -1.0, -1.0, 0.0}),
                  ValidationError);
  const RateKernel pf = RateKernel::product_form({1.0, 0.5});
  CHECK(pf.at(0, 1) == doctest::Approx(1.0));
  CHECK(pf.at(1, 1) == doctest::Approx(0.5));
}

TEST_CASE("generator entries for one particle on two sites") {
  const SiteSpace sp(2, {0.8, 1.7}, 0.3);
  const RateKernel c = RateKernel::constant(2, 1.0);
  const SectorGenerator gen = build_generator(sp, c, 1);
  const std::size_t i10 = *gen.basis.index_of({1, 0});
  const std::size_t i01 = *gen.basis.index_of({0, 1});
  CHECK(gen.mat.at(i10, i01) == doctest::Approx(1.7));  // alpha_2
  CHECK(gen.mat.at(i01, i10) == doctest::Approx(0.8));  // alpha_1
  CHECK(gen.mat.at(i10, i10) == doctest::Approx(-1.7));
  CHECK(gen.mat.at(i01, i01) == doctest::Approx(-0.8));

  // empty sector and zero kernel give the zero generator
  CHECK(build_generator(sp, c, 0).mat.nnz() == 0);
  CHECK(build_generator(sp, RateKernel::constant(2, 0.0), 3).mat.nnz() == 0);
  // a single site has nowhere to jump
  CHECK(build_generator(SiteSpace(1, {1.0}, 0.3), RateKernel::constant(1, 1.0),
                        4)
            .mat.nnz() == 0);
}

TEST_CASE("generator rows annihilate constants") {
  RngStream rng(5, 0);
  const SiteSpace sp(3, {0.5, 1.2, 0.9}, 0.4);
  const RateKernel c = random_kernel(rng, 3);
  for (std::uint32_t n : {1u, 2u, 4u}) {
    const SectorGenerator gen = build_generator(sp, c, n);
    const std::vector<double> ones(gen.basis.size(), 1.0);
    const auto out = gen.mat.apply(std::span<const double>(ones));
    for (double v : out) CHECK(std::abs(v) < 1e-12);
  }
}

TEST_CASE("detailed balance with respect to the pascal weights") {
  RngStream rng(11, 0);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t m = 1 + (rep % 3);
    std::vector<double> alpha(m);
    for (auto& a : alpha) a = 0.2 + 1.8 * rng.uniform();
    const SiteSpace sp(m, alpha, 0.1 + 0.75 * rng.uniform());
    const RateKernel c = random_kernel(rng, m);
    for (std::uint32_t n = 1; n <= 4; ++n) {
      const DetailedBalanceResult r = check_detailed_balance(sp, c, n);
      if (r.scale > 0.0) CHECK(r.max_violation <= 1e-12 * r.scale);
    }
  }
  // degenerate cases
  const SiteSpace sp(2, {1.0, 1.0}, 0.5);
  CHECK(check_detailed_balance(sp, RateKernel::constant(2, 0.0), 3)
            .max_violation == 0.0);
  CHECK(check_detailed_balance(sp, RateKernel::constant(2, 1.0), 0)
            .max_violation == 0.0);
}

TEST_CASE("algebraic generator assembly matches the direct one") {
  const SiteSpace sp2(2, {1.0, 1.0}, 0.3);
  const TruncatedSpace ts2(sp2, 7);
  // phi == (1,1) corresponds to the constant kernel c == 2
  const WeightedOperator alg = build_generator_algebraic(ts2, {1.0, 1.0});
  const RateKernel c2 = RateKernel::constant(2, 2.0);
  double viol = 0.0;
  for (std::uint32_t n = 0; n + 1 <= 7; ++n) {
    const SectorGenerator gen = build_generator(sp2, c2, n);
    const std::size_t off = ts2.sector_offset(n);
    for (std::size_t i = 0; i < gen.basis.size(); ++i)
      for (std::size_t j = 0; j < gen.basis.size(); ++j)
        viol = std::max(viol, std::abs(alg.mat.at(off + i, off + j) -
                                       gen.mat.at(i, j)));
  }
  CHECK(viol < 1e-10);

  // a kernel with a zeroed site
  const SiteSpace sp3(3, {0.7, 1.1, 0.9}, 0.4);
  const TruncatedSpace ts3(sp3, 6);
  const std::vector<double> phi{1.0, 0.5, 0.0};
  const WeightedOperator alg3 = build_generator_algebraic(ts3, phi);
  const RateKernel c3 = RateKernel::product_form(phi);
  double viol3 = 0.0;
  for (std::uint32_t n = 0; n + 1 <= 6; ++n) {
    const SectorGenerator gen = build_generator(sp3, c3, n);
    const std::size_t off = ts3.sector_offset(n);
    for (std::size_t i = 0; i < gen.basis.size(); ++i)
      for (std::size_t j = 0; j < gen.basis.size(); ++j)
        viol3 = std::max(viol3, std::abs(alg3.mat.at(off + i, off + j) -
                                         gen.mat.at(i, j)));
  }
  CHECK(viol3 < 1e-10);

  // phi == 0 gives the zero operator
  CHECK(build_generator_algebraic(ts2, {0.0, 0.0}).mat.max_abs() < 1e-15);
}

TEST_CASE("semigroup basics") {
  const SiteSpace sp(2, {1.0, 2.0}, 0.35);
  const RateKernel c = RateKernel::constant(2, 1.0);
  const SectorGenerator gen = build_generator(sp, c, 3);
  std::vector<double> f(gen.basis.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::sin(1.0 + i);

  CHECK_THROWS_AS(semigroup_apply(gen, -0.5, f), ValidationError);
  const auto f0 = semigroup_apply(gen, 0.0, f);
  for (std::size_t i = 0; i < f.size(); ++i)
    CHECK(f0[i] == doctest::Approx(f[i]).epsilon(1e-13));

  // conservativity at several times
  const std::vector<double> ones(gen.basis.size(), 1.0);
  for (double t : {0.1, 1.0, 5.0}) {
    const auto out = semigroup_apply(gen, t, ones);
    for (double v : out) CHECK(v == doctest::Approx(1.0).epsilon(1e-10));
  }

  // long-time limit is the weight-averaged sector mean
  std::vector<double> w(gen.basis.size());
  double wsum = 0.0, favg = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    w[i] = pascal_weight(sp, gen.basis.at(i));
    wsum += w[i];
    favg += w[i] * f[i];
  }
  favg /= wsum;
  const auto flim = semigroup_apply(gen, 60.0, f);
  for (double v : flim) CHECK(v == doctest::Approx(favg).epsilon(1e-9));
}

TEST_CASE("semigroup is self-adjoint in the weighted inner product") {
  RngStream rng(17, 0);
  const SiteSpace sp(2, {0.9, 1.4}, 0.45);
  const RateKernel c = random_kernel(rng, 2);
  const SectorGenerator gen = build_generator(sp, c, 4);
  const DenseMatrix<double> pt = sector_semigroup(gen, 0.8);
  std::vector<double> w(gen.basis.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = pascal_weight(sp, gen.basis.at(i));
  std::vector<double> f(w.size()), g(w.size());
  for (auto& v : f) v = rng.uniform() - 0.5;
  for (auto& v : g) v = rng.uniform() - 0.5;
  const auto ptf = apply(pt, std::span<const double>(f));
  const auto ptg = apply(pt, std::span<const double>(g));
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    lhs += w[i] * f[i] * ptg[i];
    rhs += w[i] * ptf[i] * g[i];
  }
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("generator-level consistency and its negative control") {
  RngStream rng(23, 0);
  for (std::size_t m : {2u, 3u}) {
    std::vector<double> alpha(m);
    for (auto& a : alpha) a = 0.3 + 1.5 * rng.uniform();
    const SiteSpace sp(m, alpha, 0.2 + 0.5 * rng.uniform());
    const TruncatedSpace ts(sp, 6);
    CHECK(check_consistency(ts, random_kernel(rng, m)) < 1e-10);
  }

  // perturb one transition: the commutator must light up
  const SiteSpace sp(2, {1.0, 1.0}, 0.3);
  const TruncatedSpace ts(sp, 5);
  const RateKernel c = RateKernel::constant(2, 1.0);
  std::vector<SparseMatrix<double>> gens;
  for (std::uint32_t n = 0; n <= 5; ++n)
    gens.push_back(build_generator(sp, c, n).mat);
  CHECK(check_consistency_family(ts, gens) < 1e-10);
  std::vector<Triplet<double>> trips;
  gens[2].for_each([&](std::size_t i, std::size_t j, double v) {
    trips.push_back({i, j, v});
  });
  trips.push_back({0, 1, 0.1});
  trips.push_back({0, 0, -0.1});
  gens[2] = SparseMatrix<double>::from_triplets(3, 3, std::move(trips), 0.0);
  CHECK(check_consistency_family(ts, gens) > 1e-3);

  // zero rates are trivially consistent
  const TruncatedSpace tsz(sp, 4);
  CHECK(check_consistency(tsz, RateKernel::constant(2, 0.0)) == 0.0);
}

TEST_CASE("removal powers give falling factorials and stay invariant") {
  RngStream rng(31, 0);
  const SiteSpace sp(2, {1.1, 0.6}, 0.4);
  const TruncatedSpace ts(sp, 5);
  const RateKernel c = random_kernel(rng, 2);
  for (std::uint32_t k = 1; k <= 4; ++k) {
    const FactorialCheckResult r =
        check_conservative_factorials(ts, c, 1.0, k);
    CHECK(r.exact_violation == 0.0);  // integer arithmetic in double
    CHECK(r.semigroup_violation < 1e-10);
  }
}

TEST_CASE("gillespie trajectories") {
  const SiteSpace sp(2, {1.0, 2.0}, 0.3);
  const RateKernel c = RateKernel::constant(2, 1.0);

  // vacuum never moves
  RngStream rng(3, 0);
  CHECK(gillespie_simulate(sp, c, Configuration({0, 0}), 10.0, rng).empty());

  // event times strictly increase
  RngStream rng2(4, 0);
  const auto events =
      gillespie_simulate(sp, c, Configuration({3, 1}), 5.0, rng2);
  for (std::size_t i = 1; i < events.size(); ++i)
    CHECK(events[i].time > events[i - 1].time);

  // single particle occupancy settles at alpha_1/(alpha_1+alpha_2)
  const std::uint64_t replicas = 6000;
  RunningStat occupancy;
  const RngStream base(42, 9);
  for (std::uint64_t r = 0; r < replicas; ++r) {
    RngStream stream = base.substream(r);
    const auto evts = gillespie_simulate(sp, c, Configuration({1, 0}), 25.0,
                                         stream);
    const Configuration final_state = replay_events(Configuration({1, 0}),
                                                    evts);
    occupancy.add(final_state.occ[0]);
  }
  const double want = 1.0 / 3.0;
  CHECK(std::abs(occupancy.estimate().mean - want) <
        4.0 * occupancy.estimate().std_error);
}

TEST_CASE("gillespie mean jump count matches the semigroup quadrature") {
  const SiteSpace sp(2, {1.0, 1.0}, 0.3);
  const RateKernel c = RateKernel::constant(2, 1.0);
  const std::uint32_t n = 2;
  const SectorGenerator gen = build_generator(sp, c, n);
  const Configuration eta0({2, 0});
  const double t_end = 1.0;

  // expected jumps = int_0^t (exp(sL) r)(eta0) ds with r the total exit rate
  std::vector<double> exit_rate(gen.basis.size(), 0.0);
  gen.mat.for_each([&](std::size_t i, std::size_t j, double v) {
    if (i != j) exit_rate[i] += v;
  });
  const std::size_t row0 = *gen.basis.index_of(eta0.occ);
  const int panels = 128;  // Simpson
  double integral = 0.0;
  for (int k = 0; k <= panels; ++k) {
    const double s = t_end * k / panels;
    const double v = semigroup_apply(gen, s, exit_rate)[row0];
    const double wgt = (k == 0 || k == panels) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    integral += wgt * v;
  }
  integral *= t_end / (3.0 * panels);

  RunningStat jumps;
  const RngStream base(42, 10);
  for (std::uint64_t r = 0; r < 6000; ++r) {
    RngStream stream = base.substream(r);
    jumps.add(static_cast<double>(
        gillespie_simulate(sp, c, eta0, t_end, stream).size()));
  }
  CHECK(std::abs(jumps.estimate().mean - integral) <
        4.0 * jumps.estimate().std_error);
}

TEST_CASE("gillespie sector occupation matches the exact semigroup row") {
  const SiteSpace sp(2, {1.0, 1.0}, 0.3);
  const RateKernel c = RateKernel::constant(2, 1.0);
  const SectorGenerator gen = build_generator(sp, c, 2);
  const Configuration eta0({2, 0});
  const double t = 1.0;
  const DenseMatrix<double> pt = sector_semigroup(gen, t);
  const std::size_t row0 = *gen.basis.index_of(eta0.occ);
  const std::uint64_t replicas = 10000;
  std::vector<double> observed(gen.basis.size(), 0.0);
  const RngStream base(42, 11);
  for (std::uint64_t r = 0; r < replicas; ++r) {
    RngStream stream = base.substream(r);
    const auto events = gillespie_simulate(sp, c, eta0, t, stream);
    observed[*gen.basis.index_of(replay_events(eta0, events).occ)] += 1.0;
  }
  std::vector<double> expected(gen.basis.size());
  for (std::size_t j = 0; j < expected.size(); ++j)
    expected[j] = pt(row0, j) * static_cast<double>(replicas);
  CHECK(chi2_gof_pvalue(observed, expected) > 0.001);
}
