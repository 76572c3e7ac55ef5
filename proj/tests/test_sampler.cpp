#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "su11/pascal.hpp"
#include "su11/stats.hpp"

using namespace su11;

TEST_CASE("streams are reproducible and substreams are keyed") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  RngStream c(42, 8);
  bool all_equal = true;
  RngStream a2(42, 7);
  for (int i = 0; i < 16; ++i)
    if (a2.next_u64() != c.next_u64()) all_equal = false;
  CHECK(!all_equal);
  // substream keying is stable regardless of draw order
  RngStream parent(1, 2);
  RngStream s1 = parent.substream(5);
  parent.next_u64();
  RngStream s2 = parent.substream(5);
  CHECK(s1.next_u64() == s2.next_u64());
}

TEST_CASE("gamma and poisson moments") {
  RngStream rng(1234, 0);
  RunningStat g;
  const double shape = 0.7, scale = 1.8;
  for (int i = 0; i < 60000; ++i) g.add(rng.gamma(shape, scale));
  const McEstimate ge = g.estimate();
  CHECK(std::abs(ge.mean - shape * scale) < 4.0 * ge.std_error);

  RunningStat p;
  for (int i = 0; i < 60000; ++i) p.add(static_cast<double>(rng.poisson(3.7)));
  const McEstimate pe = p.estimate();
  CHECK(std::abs(pe.mean - 3.7) < 4.0 * pe.std_error);

  // the recursive split for large means stays unbiased
  RunningStat big;
  for (int i = 0; i < 20000; ++i)
    big.add(static_cast<double>(rng.poisson(75.0)));
  const McEstimate be = big.estimate();
  CHECK(std::abs(be.mean - 75.0) < 4.0 * be.std_error);
}

TEST_CASE("logarithmic series sampler matches its pmf") {
  const double p = 0.6;
  const LogSeriesSampler ls(p);
  RngStream rng(99, 1);
  const std::uint64_t n = 200000;
  std::vector<double> counts(32, 0.0);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint64_t v = ls.sample(rng);
    counts[std::min<std::uint64_t>(v, 31)] += 1.0;
  }
  std::vector<double> expected(32, 0.0);
  double cum = 0.0;
  for (std::uint64_t k = 1; k < 31; ++k) {
    expected[k] = ls.pmf(k) * static_cast<double>(n);
    cum += expected[k];
  }
  expected[31] = static_cast<double>(n) - cum;
  CHECK(chi2_gof_pvalue(counts, expected) > 0.001);
}

TEST_CASE("direct sampler moments and vacuum mass") {
  const SiteSpace sp(2, {1.0, 2.5}, 0.4);
  const RngStream base(42, 0);
  const std::uint64_t n = 50000;
  RunningStat m0, m1, vac;
  for (std::uint64_t r = 0; r < n; ++r) {
    RngStream replica = base.substream(r);
    const Configuration eta = sample_pascal_direct(sp, replica);
    m0.add(eta.occ[0]);
    m1.add(eta.occ[1]);
    vac.add(eta.total == 0 ? 1.0 : 0.0);
  }
  const double want0 = 0.4 * 1.0 / 0.6;
  const double want1 = 0.4 * 2.5 / 0.6;
  CHECK(std::abs(m0.estimate().mean - want0) < 4.0 * m0.estimate().std_error);
  CHECK(std::abs(m1.estimate().mean - want1) < 4.0 * m1.estimate().std_error);
  const double vac_want = std::pow(0.6, 3.5);
  CHECK(std::abs(vac.estimate().mean - vac_want) <
        4.0 * vac.estimate().std_error);

  // zero-mass site never fires
  const SiteSpace spz(2, {0.0, 1.0}, 0.4);
  for (std::uint64_t r = 0; r < 200; ++r) {
    RngStream replica = base.substream(r);
    CHECK(sample_pascal_direct(spz, replica).occ[0] == 0);
    RngStream replica2 = base.substream(r);
    CHECK(sample_pascal_compound(spz, replica2).occ[0] == 0);
  }
}

TEST_CASE("compound sampler at small p is nearly a sparse poisson") {
  // clusters of size one dominate; the mean stays alpha p/(1-p)
  const double p = 0.02;
  const SiteSpace sp(1, {1.4}, p);
  const RngStream base(3, 0);
  RunningStat mean, multi;
  for (std::uint64_t r = 0; r < 50000; ++r) {
    RngStream replica = base.substream(r);
    const Configuration eta = sample_pascal_compound(sp, replica);
    mean.add(eta.occ[0]);
    multi.add(eta.occ[0] >= 2 ? 1.0 : 0.0);
  }
  const double want = p * 1.4 / (1.0 - p);
  CHECK(std::abs(mean.estimate().mean - want) <
        4.0 * mean.estimate().std_error);
  // P(count >= 2) = O(p^2)
  CHECK(multi.estimate().mean < 10.0 * p * p + 4.0 * multi.estimate().std_error);
}

TEST_CASE("compound sampler agrees with the direct one in distribution") {
  const SiteSpace sp(2, {1.0, 1.0}, 0.3);
  const RngStream base(7, 0);
  const std::uint64_t n = 40000;
  std::vector<double> h_direct(32, 0.0), h_compound(32, 0.0);
  for (std::uint64_t r = 0; r < n; ++r) {
    RngStream d = base.substream(2 * r);
    RngStream c = base.substream(2 * r + 1);
    h_direct[std::min<std::uint32_t>(sample_pascal_direct(sp, d).occ[0], 31)] +=
        1.0;
    h_compound[std::min<std::uint32_t>(
        sample_pascal_compound(sp, c).occ[0], 31)] += 1.0;
  }
  CHECK(chi2_two_sample_pvalue(h_direct, h_compound) > 0.001);

  // the direct histogram alone must match the negative binomial pmf
  std::vector<double> expected(32, 0.0);
  double cum = 0.0;
  for (std::uint32_t k = 0; k < 31; ++k) {
    expected[k] = negative_binomial_pmf(1.0, 0.3, k) * static_cast<double>(n);
    cum += expected[k];
  }
  expected[31] = static_cast<double>(n) - cum;
  CHECK(chi2_gof_pvalue(h_direct, expected) > 0.001);
}

TEST_CASE("removal/insertion identity for pinned functionals") {
  const SiteSpace sp(2, {1.0, 1.0}, 0.3);
  const RngStream base(42, 3);

  // F == 1: both sides are the expected total count
  const auto [l1, r1] = check_papangelou(
      sp, [](std::size_t, const Configuration&) { return 1.0; }, 40000, base);
  const double want_total = 0.3 * 2.0 / 0.7;
  CHECK(std::abs(l1.mean - want_total) < 4.0 * l1.std_error);
  CHECK(std::abs(r1.mean - want_total) < 4.0 * r1.std_error);
  const double combined1 =
      std::sqrt(l1.std_error * l1.std_error + r1.std_error * r1.std_error);
  CHECK(std::abs(l1.mean - r1.mean) < 4.0 * combined1);

  // site indicator: per-site mean
  const auto [l2, r2] = check_papangelou(
      sp,
      [](std::size_t x, const Configuration&) { return x == 0 ? 1.0 : 0.0; },
      40000, base.substream(1));
  const double want_site = 0.3 * 1.0 / 0.7;
  CHECK(std::abs(l2.mean - want_site) < 4.0 * l2.std_error);
  const double combined2 =
      std::sqrt(l2.std_error * l2.std_error + r2.std_error * r2.std_error);
  CHECK(std::abs(l2.mean - r2.mean) < 4.0 * combined2);

  // F == 0 vanishes on both sides
  const auto [l3, r3] = check_papangelou(
      sp, [](std::size_t, const Configuration&) { return 0.0; }, 1000,
      base.substream(2));
  CHECK(l3.mean == 0.0);
  CHECK(r3.mean == 0.0);
  CHECK(l3.std_error == 0.0);
  CHECK(r3.std_error == 0.0);
}

TEST_CASE("laplace functional") {
  const SiteSpace sp(1, {1.0}, 0.5);
  const RngStream base(42, 4);

  // f == 0: both sides exactly one
  const auto [mc0, closed0] =
      check_laplace(sp, std::vector<double>{0.0}, 2000, base);
  CHECK(mc0.mean == 1.0);
  CHECK(closed0 == doctest::Approx(1.0));

  // pinned point: closed form 0.5/(1 - 0.5 e^{-1})
  const auto [mc1, closed1] =
      check_laplace(sp, std::vector<double>{1.0}, 60000, base.substream(1));
  const double want = 0.5 / (1.0 - 0.5 * std::exp(-1.0));
  CHECK(closed1 == doctest::Approx(want).epsilon(1e-14));
  CHECK(std::abs(mc1.mean - closed1) < 4.0 * mc1.std_error);

  // large f collapses to the vacuum probability
  const auto [mc2, closed2] =
      check_laplace(sp, std::vector<double>{40.0}, 2000, base.substream(2));
  CHECK(closed2 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("sampling is bit-for-bit deterministic per (seed, stream)") {
  const SiteSpace sp(3, {0.5, 1.0, 1.5}, 0.45);
  for (std::uint64_t r = 0; r < 50; ++r) {
    RngStream a = RngStream(9, 100).substream(r);
    RngStream b = RngStream(9, 100).substream(r);
    CHECK(sample_pascal_direct(sp, a) == sample_pascal_direct(sp, b));
    RngStream c = RngStream(9, 101).substream(r);
    RngStream d = RngStream(9, 101).substream(r);
    CHECK(sample_pascal_compound(sp, c) == sample_pascal_compound(sp, d));
  }
}
