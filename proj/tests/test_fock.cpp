#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "su11/fock.hpp"
#include "su11/numeric.hpp"

using namespace su11;

TEST_CASE("site space invariants") {
  CHECK_THROWS_AS(SiteSpace(2, {1.0, 1.0}, 1.2), ValidationError);
  CHECK_THROWS_AS(SiteSpace(2, {1.0, 1.0}, 0.0), ValidationError);
  CHECK_THROWS_AS(SiteSpace(2, {-0.5, 1.0}, 0.3), ValidationError);
  CHECK_THROWS_AS(SiteSpace(2, {0.0, 0.0}, 0.3), ValidationError);
  CHECK_THROWS_AS(SiteSpace(0, {}, 0.3), ValidationError);
  CHECK_THROWS_AS(SiteSpace(2, {1.0}, 0.3), ValidationError);
  const SiteSpace ok(3, {0.0, 1.0, 2.0}, 0.5);  // zero masses are allowed
  CHECK(ok.total_mass() == doctest::Approx(3.0));
}

TEST_CASE("sector enumeration counts and order") {
  const SiteSpace sp3(3, {1.0, 1.0, 1.0}, 0.5);
  CHECK(enumerate_sector(sp3, 0).size() == 1);
  CHECK(enumerate_sector(sp3, 2).size() == 6);
  const SiteSpace sp1(1, {1.0}, 0.5);
  CHECK(enumerate_sector(sp1, 5).size() == 1);
  CHECK(enumerate_sector(sp1, 5).at(0).occ[0] == 5);

  // binomial(n+m-1, m-1) across a grid
  for (std::size_t m : {1u, 2u, 4u}) {
    const SiteSpace sp(m, std::vector<double>(m, 1.0), 0.4);
    for (std::uint32_t n : {0u, 1u, 3u, 6u}) {
      const SectorBasis basis = enumerate_sector(sp, n);
      CHECK(basis.size() == binomial_capped(n + m - 1, m - 1, 1u << 30));
      // index map inverts the enumeration
      for (std::size_t i = 0; i < basis.size(); ++i)
        CHECK(*basis.index_of(basis.at(i).occ) == i);
    }
  }

  // graded reverse-lexicographic: the documented order for m=3, n=2
  const SectorBasis basis = enumerate_sector(sp3, 2);
  const std::vector<std::vector<std::uint32_t>> want = {
      {2, 0, 0}, {1, 1, 0}, {0, 2, 0}, {1, 0, 1}, {0, 1, 1}, {0, 0, 2}};
  for (std::size_t i = 0; i < want.size(); ++i)
    CHECK(basis.at(i).occ == want[i]);
}

TEST_CASE("basis capacity guard") {
  const SiteSpace sp(12, std::vector<double>(12, 1.0), 0.5);
  CHECK_THROWS_AS(enumerate_sector(sp, 30, 100000), CapacityError);
  CHECK_THROWS_AS(TruncatedSpace(sp, 30, 100000), CapacityError);
}

TEST_CASE("pascal weights at pinned values") {
  const SiteSpace sp(1, {1.0}, 0.5);
  CHECK(pascal_weight(sp, Configuration({0})) == doctest::Approx(0.5));
  CHECK(pascal_weight(sp, Configuration({2})) == doctest::Approx(0.125));
  const SiteSpace sp2(1, {2.0}, 0.3);
  CHECK(pascal_weight(sp2, Configuration({1})) ==
        doctest::Approx(0.294).epsilon(1e-12));

  // negative binomial pmf as the independent one-site oracle
  for (double a : {0.5, 1.0, 3.7}) {
    for (double p : {0.2, 0.55}) {
      const SiteSpace sp1(1, {a}, p);
      for (std::uint32_t n = 0; n <= 20; ++n) {
        CHECK(pascal_weight(sp1, Configuration({n})) ==
              doctest::Approx(negative_binomial_pmf(a, p, n)).epsilon(1e-12));
      }
    }
  }

  // zero-mass site occupied -> zero weight
  const SiteSpace spz(2, {0.0, 1.0}, 0.4);
  CHECK(pascal_weight(spz, Configuration({1, 0})) == 0.0);
  CHECK(pascal_weight(spz, Configuration({0, 2})) > 0.0);
}

TEST_CASE("log-space weight path matches the direct product") {
  // alpha + n over the cutoff exercises the lgamma route; the oracle is the
  // plain product evaluated without any log-space switching
  const SiteSpace sp(1, {2.5}, 0.6);
  for (std::uint32_t n : {28u, 29u, 31u, 40u}) {
    const double direct = std::pow(0.4, 2.5) * std::pow(0.6, n) *
                          rising_factorial(2.5, n) / factorial(n);
    CHECK(pascal_weight(sp, Configuration({n})) ==
          doctest::Approx(direct).epsilon(1e-11));
  }
}

TEST_CASE("one-site weights sum to unity within the tail bound") {
  const SiteSpace sp(1, {1.5}, 0.45);
  const TruncatedSpace ts(sp, 80);
  double tail = 0.0;  // crude geometric bound on the missing mass
  for (std::uint32_t n = 81; n <= 400; ++n)
    tail += negative_binomial_pmf(1.5, 0.45, n);
  CHECK(ts.coverage() >= 1.0 - tail - 1e-12);
  CHECK(ts.coverage() <= 1.0 + 1e-12);
}

TEST_CASE("merging: disjoint groups carry independent negative binomials") {
  const SiteSpace sp(3, {0.7, 1.1, 0.4}, 0.35);
  const std::uint32_t n_max = 10;
  const TruncatedSpace ts(sp, n_max);
  const double a0 = 0.7, a_rest = 1.5;
  for (std::uint32_t i = 0; i <= 6; ++i)
    for (std::uint32_t j = 0; i + j <= n_max; ++j) {
      double fiber = 0.0;
      for (std::size_t g = 0; g < ts.dim(); ++g) {
        const Configuration& eta = ts.config_at(g);
        if (eta.occ[0] == i && eta.total - eta.occ[0] == j)
          fiber += ts.weight_at(g);
      }
      const double want = negative_binomial_pmf(a0, sp.p, i) *
                          negative_binomial_pmf(a_rest, sp.p, j);
      CHECK(fiber == doctest::Approx(want).epsilon(1e-11));
    }
}

TEST_CASE("refining a site leaves the total-count law unchanged") {
  const double p = 0.4;
  const TruncatedSpace coarse(SiteSpace(1, {1.6}, p), 14);
  const TruncatedSpace fine(SiteSpace(2, {0.8, 0.8}, p), 14);
  for (std::uint32_t n = 0; n <= 14; ++n) {
    double mass_coarse = 0.0, mass_fine = 0.0;
    for (std::size_t g = 0; g < coarse.dim(); ++g)
      if (coarse.config_at(g).total == n) mass_coarse += coarse.weight_at(g);
    for (std::size_t g = 0; g < fine.dim(); ++g)
      if (fine.config_at(g).total == n) mass_fine += fine.weight_at(g);
    CHECK(mass_fine == doctest::Approx(mass_coarse).epsilon(1e-12));
  }
}

TEST_CASE("inner product") {
  const SiteSpace sp(1, {1.0}, 0.5);
  const TruncatedSpace ts(sp, 30);
  std::vector<cplx> vac(ts.dim(), cplx{});
  vac[0] = 1.0;
  CHECK(ts.inner_product(vac, vac).real() == doctest::Approx(0.5));

  // disjoint sector supports are orthogonal
  std::vector<cplx> s1(ts.dim(), cplx{}), s2(ts.dim(), cplx{});
  s1[ts.sector_offset(1)] = cplx{1.0, 2.0};
  s2[ts.sector_offset(2)] = cplx{-0.5, 0.3};
  CHECK(std::abs(ts.inner_product(s1, s2)) == 0.0);

  // constant function picks up the captured mass
  std::vector<cplx> ones(ts.dim(), cplx{1.0});
  CHECK(ts.inner_product(ones, ones).real() ==
        doctest::Approx(ts.coverage()).epsilon(1e-13));

  // conjugate symmetry and positivity
  const cplx a = ts.inner_product(s1, ones);
  const cplx b = ts.inner_product(ones, s1);
  CHECK(std::abs(a - std::conj(b)) < 1e-15);
  std::vector<cplx> v(ts.dim());
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = cplx{std::sin(0.7 * i + 0.2), std::cos(1.3 * i)};
  CHECK(ts.inner_product(v, v).real() > 0.0);
  CHECK(std::abs(ts.inner_product(v, v).imag()) < 1e-15);

  std::vector<cplx> wrong(ts.dim() + 1, cplx{});
  CHECK_THROWS_AS(ts.inner_product(wrong, ones), DimensionMismatch);
}

TEST_CASE("shifted index lookups") {
  const SiteSpace sp(2, {1.0, 2.0}, 0.3);
  const TruncatedSpace ts(sp, 4);
  const std::size_t g = *ts.index_of(Configuration({1, 2}));
  const auto up = ts.shifted_index(g, 0, +1);
  REQUIRE(up.has_value());
  CHECK(ts.config_at(*up).occ == std::vector<std::uint32_t>{2, 2});
  const auto down = ts.shifted_index(g, 1, -1);
  REQUIRE(down.has_value());
  CHECK(ts.config_at(*down).occ == std::vector<std::uint32_t>{1, 1});
  CHECK(!ts.shifted_index(*ts.index_of(Configuration({0, 4})), 0, +1));
  CHECK(!ts.shifted_index(*ts.index_of(Configuration({0, 4})), 0, -1));
}
