#include "su11/meixner.hpp"

#include <cmath>

#include "su11/numeric.hpp"

namespace su11 {

namespace {

constexpr std::uint32_t kSumDegreeCutoff = 30;

// Terminating hypergeometric sum with compensated accumulation; exact
// representation, preferred for low degrees. Stops as soon as a term is
// exactly zero ((-x)_k or (-n)_k ran out), which keeps the summation
// sequence identical under the n <-> x symmetry.
double meixner_sum(std::uint32_t n, double x, const MeixnerParams& params) {
  const double q = 1.0 - 1.0 / params.p;
  double term = 1.0;  // k = 0
  double sum = 1.0, comp = 0.0;
  for (std::uint32_t k = 0; k < n; ++k) {
    term *= (k - x) * (static_cast<double>(k) - n) * q /
            ((params.a + k) * (k + 1.0));
    if (term == 0.0) break;
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

// monic_n = (a)_n (1 - 1/p)^{-n} M_n, assembled in log space
double monic_from_sum(std::uint32_t n, double sum_value,
                      const MeixnerParams& params) {
  if (n == 0) return sum_value;
  const double log_scale = log_rising_factorial(params.a, n) -
                           n * std::log((1.0 - params.p) / params.p);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;  // (1-1/p) < 0
  return sign * std::exp(log_scale) * sum_value;
}

bool is_small_integer(double x, std::uint32_t& out) {
  if (x < 0.0 || x > kSumDegreeCutoff) return false;
  const double r = std::nearbyint(x);
  if (x != r) return false;
  out = static_cast<std::uint32_t>(r);
  return true;
}

}  // namespace

double meixner_monic_recurrence(std::uint32_t n, double x,
                                const MeixnerParams& params) {
  // The forward recurrence sheds about one bit per step near the edge of
  // the support; extended precision keeps high degrees serviceable.
  const long double a = params.a, p = params.p, xl = x;
  const long double omp = 1.0L - p;
  long double prev = 1.0L;
  if (n == 0) return static_cast<double>(prev);
  long double cur = xl - p * a / omp;
  for (std::uint32_t k = 1; k < n; ++k) {
    const long double b = (k + (k + a) * p) / omp;
    const long double c = k * (k + a - 1.0L) * p / (omp * omp);
    const long double next = (xl - b) * cur - c * prev;
    prev = cur;
    cur = next;
  }
  return static_cast<double>(cur);
}

double meixner_M(std::uint32_t n, double x, const MeixnerParams& params) {
  if (n <= kSumDegreeCutoff) return meixner_sum(n, x, params);
  std::uint32_t xi;
  if (is_small_integer(x, xi)) return meixner_sum(xi, n, params);  // symmetry
  const double v = meixner_monic_recurrence(n, x, params);
  const double log_scale = n * std::log((1.0 - params.p) / params.p) -
                           log_rising_factorial(params.a, n);
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return v * sign * std::exp(log_scale);
}

double meixner_monic(std::uint32_t n, double x, const MeixnerParams& params) {
  if (n <= kSumDegreeCutoff)
    return monic_from_sum(n, meixner_sum(n, x, params), params);
  std::uint32_t xi;
  if (is_small_integer(x, xi))
    return monic_from_sum(n, meixner_sum(xi, n, params), params);
  return meixner_monic_recurrence(n, x, params);
}

GeneratingFunctionCheck meixner_generating_function(
    double s, double x, const MeixnerParams& params, std::uint32_t terms) {
  double sum = 0.0, comp = 0.0;
  double factor = 1.0;  // s^n (1-p)^n / n!
  for (std::uint32_t n = 0; n < terms; ++n) {
    if (n > 0) factor *= s * (1.0 - params.p) / n;
    const double term = factor * meixner_monic(n, x, params);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
    if (std::abs(term) < 1e-16 * std::abs(sum) && n > 2) break;
  }
  const double closed =
      std::pow(1.0 + s, x) * std::pow(1.0 + params.p * s, -x - params.a);
  return {sum, closed};
}

PolynomialExpansion build_I_n(const TruncatedSpace& ts,
                              std::span<const cplx> f_sector,
                              std::uint32_t n) {
  const SectorBasis& basis = ts.sector(n);
  if (f_sector.size() != basis.size())
    throw DimensionMismatch("build_I_n: f_sector size != sector basis size");
  PolynomialExpansion e;
  e.degree = n;
  const double n_fact = factorial(n);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (f_sector[i] == cplx{}) continue;
    const Configuration& kappa = basis.at(i);
    double denom = 1.0;
    for (std::uint32_t k : kappa.occ) denom *= factorial(k);
    e.terms.emplace_back(kappa, f_sector[i] * (n_fact / denom));
    if (f_sector[i].imag() != 0.0) e.all_real = false;
  }
  return e;
}

namespace {

double monic_product(const Configuration& kappa, const Configuration& eta,
                     const SiteSpace& space) {
  double prod = 1.0;
  for (std::size_t i = 0; i < space.m; ++i) {
    if (kappa.occ[i] == 0) continue;
    prod *= meixner_monic(kappa.occ[i], static_cast<double>(eta.occ[i]),
                          {space.alpha[i], space.p});
  }
  return prod;
}

}  // namespace

cplx evaluate_expansion(const PolynomialExpansion& expansion,
                        const Configuration& eta, const SiteSpace& space) {
  if (expansion.all_real) {
    double sum = 0.0;
    for (const auto& [kappa, c] : expansion.terms)
      sum += c.real() * monic_product(kappa, eta, space);
    return sum;
  }
  cplx sum{};
  for (const auto& [kappa, c] : expansion.terms)
    sum += c * monic_product(kappa, eta, space);
  return sum;
}

std::vector<cplx> evaluate_expansion_on(const PolynomialExpansion& expansion,
                                        const TruncatedSpace& ts) {
  std::vector<cplx> out(ts.dim());
  for (std::size_t g = 0; g < ts.dim(); ++g)
    out[g] = evaluate_expansion(expansion, ts.config_at(g), ts.space());
  return out;
}

}  // namespace su11
