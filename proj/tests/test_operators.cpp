#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "su11/operators.hpp"
#include "su11/rng.hpp"

using namespace su11;

namespace {

TestFunction random_phi(RngStream& rng, std::size_t m) {
  TestFunction phi(m);
  for (auto& v : phi) v = cplx{rng.uniform() - 0.5, rng.uniform() - 0.5};
  return phi;
}

std::vector<cplx> random_vec(RngStream& rng, std::size_t n) {
  std::vector<cplx> v(n);
  for (auto& x : v) x = cplx{rng.uniform() - 0.5, rng.uniform() - 0.5};
  return v;
}

}  // namespace

TEST_CASE("raising operator on the vacuum") {
  const SiteSpace sp(2, {1.0, 1.0}, 0.3);
  const TruncatedSpace ts(sp, 5);
  const WeightedOperator kp = build_k_plus(ts, constant_one(2));
  std::vector<cplx> vac(ts.dim(), cplx{});
  vac[0] = 1.0;
  const auto out = kp.mat.apply(std::span<const cplx>(vac));
  const double inv_sqrt_p = 1.0 / std::sqrt(0.3);
  for (std::size_t g = 0; g < ts.dim(); ++g) {
    if (ts.config_at(g).total == 1)
      CHECK(std::abs(out[g] - inv_sqrt_p) < 1e-14);
    else
      CHECK(std::abs(out[g]) == 0.0);
  }

  // zero test function annihilates everything
  const WeightedOperator kp0 = build_k_plus(ts, TestFunction(2, cplx{}));
  CHECK(kp0.mat.nnz() == 0);
}

TEST_CASE("lowering operator on the vacuum and one-particle states") {
  const SiteSpace sp(2, {0.8, 1.7}, 0.41);
  const TruncatedSpace ts(sp, 5);
  RngStream rng(21, 0);
  const WeightedOperator km = build_k_minus(ts, random_phi(rng, 2));
  // vacuum annihilated: column 0 empty
  bool vacuum_column_empty = true;
  km.mat.for_each([&](std::size_t, std::size_t j, cplx) {
    if (j == 0) vacuum_column_empty = false;
  });
  CHECK(vacuum_column_empty);

  // value sqrt(p) alpha_1 at the vacuum from the (1,0) indicator
  const WeightedOperator km1 = build_k_minus(ts, constant_one(2));
  std::vector<cplx> one_particle(ts.dim(), cplx{});
  one_particle[*ts.index_of(Configuration({1, 0}))] = 1.0;
  const auto out = km1.mat.apply(std::span<const cplx>(one_particle));
  CHECK(std::abs(out[0] - std::sqrt(0.41) * 0.8) < 1e-14);
}

TEST_CASE("neutral operator eigenvalues") {
  const SiteSpace sp(3, {0.5, 1.5, 2.0}, 0.25);
  const TruncatedSpace ts(sp, 4);
  const WeightedOperator k0 = build_k_zero(ts, constant_one(3));
  for (std::size_t g = 0; g < ts.dim(); ++g) {
    const double want = ts.config_at(g).total + sp.total_mass() / 2.0;
    CHECK(std::abs(k0.mat.at(g, g) - want) < 1e-13);
  }
  const WeightedOperator kz = build_k_zero(ts, TestFunction(3, cplx{}));
  CHECK(kz.mat.nnz() == 0);
}

TEST_CASE("shift tags and structural patterns") {
  const SiteSpace sp(2, {1.0, 0.5}, 0.37);
  const TruncatedSpace ts(sp, 6);
  RngStream rng(5, 0);
  const TestFunction phi = random_phi(rng, 2);
  const WeightedOperator kp = build_k_plus(ts, phi);
  const WeightedOperator km = build_k_minus(ts, phi);
  const WeightedOperator k0 = build_k_zero(ts, phi);
  CHECK(*kp.shift == 1);
  CHECK(*km.shift == -1);
  CHECK(*k0.shift == 0);
  CHECK(shift_pattern_ok(ts, kp));
  CHECK(shift_pattern_ok(ts, km));
  CHECK(shift_pattern_ok(ts, k0));
  CHECK(*commutator(km, kp).shift == 0);
  CHECK(!multiply(kp, kp).shift.has_value());  // +2 leaves the tag set
}

TEST_CASE("commutation relations hold below the truncation boundary") {
  RngStream rng(33, 0);
  for (std::size_t m : {1u, 2u, 3u}) {
    const std::vector<double> alpha(m, 0.9);
    const SiteSpace sp(m, alpha, 0.45);
    const TruncatedSpace ts(sp, 6);
    for (int rep = 0; rep < 8; ++rep) {
      const TestFunction phi = random_phi(rng, m);
      const TestFunction theta = random_phi(rng, m);
      TestFunction conj_phi_theta(m), phi_theta(m), phi_conj_theta(m);
      for (std::size_t i = 0; i < m; ++i) {
        conj_phi_theta[i] = std::conj(phi[i]) * theta[i];
        phi_theta[i] = phi[i] * theta[i];
        phi_conj_theta[i] = phi[i] * std::conj(theta[i]);
      }
      const WeightedOperator km = build_k_minus(ts, phi);
      const WeightedOperator kp = build_k_plus(ts, theta);
      const WeightedOperator c1 = commutator(km, kp);
      const WeightedOperator want1{
          build_k_zero(ts, conj_phi_theta).mat.scaled(2.0), 0};
      CHECK(max_abs_diff_below(ts, c1, want1, 5) < 1e-12);

      const WeightedOperator k0t = build_k_zero(ts, theta);
      const WeightedOperator kpp = build_k_plus(ts, phi);
      CHECK(max_abs_diff_below(ts, commutator(k0t, kpp),
                               build_k_plus(ts, phi_theta), 5) < 1e-12);

      const WeightedOperator kmp = build_k_minus(ts, phi);
      const WeightedOperator want3{
          build_k_minus(ts, phi_conj_theta).mat.scaled(-1.0), -1};
      CHECK(max_abs_diff_below(ts, commutator(k0t, kmp), want3, 6) < 1e-12);

      // [A, A] = 0
      CHECK(commutator(kpp, kpp).mat.max_abs() < 1e-13);
    }
  }
}

TEST_CASE("weighted adjoint pairs raising with lowering") {
  const SiteSpace sp(2, {1.2, 0.7}, 0.3);
  const TruncatedSpace ts(sp, 6);
  RngStream rng(7, 0);
  const TestFunction phi = random_phi(rng, 2);
  const WeightedOperator kp = build_k_plus(ts, phi);
  const WeightedOperator km = build_k_minus(ts, phi);
  const WeightedOperator kp_star = weighted_adjoint(ts, kp);
  CHECK(max_abs_diff_below(ts, kp_star, km, ts.n_max()) < 1e-12);

  // diagonal case conjugates the test function
  const WeightedOperator k0 = build_k_zero(ts, phi);
  TestFunction phi_conj(2);
  for (std::size_t i = 0; i < 2; ++i) phi_conj[i] = std::conj(phi[i]);
  CHECK(max_abs_diff_below(ts, weighted_adjoint(ts, k0),
                           build_k_zero(ts, phi_conj), ts.n_max()) < 1e-13);

  // identity is self-adjoint
  const WeightedOperator ident{SparseMatrix<cplx>::identity(ts.dim()), 0};
  CHECK(max_abs_diff_below(ts, weighted_adjoint(ts, ident), ident,
                           ts.n_max()) < 1e-15);

  // inner-product form of adjointness
  for (int rep = 0; rep < 20; ++rep) {
    const auto f = random_vec(rng, ts.dim());
    const auto g = random_vec(rng, ts.dim());
    const auto kpg = kp.mat.apply(std::span<const cplx>(g));
    const auto kmf = km.mat.apply(std::span<const cplx>(f));
    const cplx lhs = ts.inner_product(f, kpg);
    const cplx rhs = ts.inner_product(kmf, g);
    CHECK(std::abs(lhs - rhs) <=
          1e-12 * (ts.weighted_norm(f) * ts.weighted_norm(kpg) + 1.0));
  }
}

TEST_CASE("adjoint refuses zero-weight configurations") {
  const SiteSpace sp(2, {0.0, 1.0}, 0.3);  // site 0 carries no mass
  const TruncatedSpace ts(sp, 3);
  const WeightedOperator kp = build_k_plus(ts, constant_one(2));
  CHECK_THROWS_AS(weighted_adjoint(ts, kp), DegenerateWeightError);
}

TEST_CASE("compressed skew combination is weighted-Hermitian") {
  const SiteSpace sp(2, {1.0, 1.0}, 0.3);
  const TruncatedSpace ts(sp, 8);
  const WeightedOperator kp = build_k_plus(ts, constant_one(2));
  const WeightedOperator km = build_k_minus(ts, constant_one(2));
  for (const cplx xi : {cplx{0.6}, cplx{0.2, -0.8}, cplx{-1.1, 0.4}}) {
    const SparseMatrix<cplx> h =
        kp.mat.scaled(xi * cplx{0.0, -1.0})
            .plus(km.mat.scaled(std::conj(xi) * cplx{0.0, -1.0}), cplx{-1.0});
    CHECK(weighted_hermiticity_violation(ts, h) < 1e-12);
  }
}
