#include "su11/fock.hpp"

#include <algorithm>
#include <cmath>

#include "su11/kernels.hpp"
#include "su11/numeric.hpp"

namespace su11 {

SiteSpace::SiteSpace(std::size_t m_, std::vector<double> alpha_, double p_)
    : m(m_), alpha(std::move(alpha_)), p(p_) {
  validate();
}

double SiteSpace::total_mass() const {
  double s = 0.0;
  for (double a : alpha) s += a;
  return s;
}

void SiteSpace::validate() const {
  if (m < 1) throw ValidationError("site space needs at least one site");
  if (alpha.size() != m)
    throw ValidationError("alpha must have one entry per site");
  for (double a : alpha) {
    if (!(a >= 0.0) || !std::isfinite(a))
      throw ValidationError("site masses must be finite and non-negative");
  }
  if (!(total_mass() > 0.0))
    throw ValidationError("total mass must be positive");
  if (!(p > 0.0) || !(p < 1.0))
    throw ValidationError("p must lie strictly inside (0,1)");
}

Configuration::Configuration(std::vector<std::uint32_t> occ_)
    : occ(std::move(occ_)) {
  std::uint64_t t = 0;
  for (std::uint32_t n : occ) t += n;
  total = static_cast<std::uint32_t>(t);
}

namespace {

// Grevlex within a sector: configurations grouped by ascending last
// coordinate, recursively. First entry is (n,0,...,0), last is (0,...,0,n).
void emit_compositions(std::size_t m, std::uint32_t n,
                       std::vector<std::uint32_t>& scratch, std::size_t site,
                       std::vector<Configuration>& out) {
  if (m == 1) {
    scratch[site] = n;
    out.emplace_back(scratch);
    return;
  }
  for (std::uint32_t tail = 0; tail <= n; ++tail) {
    scratch[site + m - 1] = tail;
    emit_compositions(m - 1, n - tail, scratch, site, out);
  }
}

}  // namespace

SectorBasis::SectorBasis(std::size_t m, std::uint32_t n,
                         std::size_t basis_limit)
    : n_(n) {
  const std::uint64_t count = binomial_capped(n + m - 1, m - 1, basis_limit);
  if (count > basis_limit)
    throw CapacityError("sector basis exceeds configured size limit");
  configs_.reserve(count);
  std::vector<std::uint32_t> scratch(m, 0);
  emit_compositions(m, n, scratch, 0, configs_);
  index_.reserve(configs_.size());
  for (std::size_t i = 0; i < configs_.size(); ++i)
    index_.emplace(configs_[i].occ, i);
}

std::optional<std::size_t> SectorBasis::index_of(
    const std::vector<std::uint32_t>& occ) const {
  auto it = index_.find(occ);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

SectorBasis enumerate_sector(const SiteSpace& space, std::uint32_t n,
                             std::size_t basis_limit) {
  return SectorBasis(space.m, n, basis_limit);
}

double pascal_weight(const SiteSpace& space, const Configuration& eta) {
  bool log_path = false;
  for (std::size_t i = 0; i < space.m; ++i) {
    const std::uint32_t n = eta.occ[i];
    if (n > 0 && space.alpha[i] == 0.0) return 0.0;  // (0)_n = 0
    if (space.alpha[i] + n > 30.0) log_path = true;
  }
  if (!log_path) {
    double w = 1.0;
    for (std::size_t i = 0; i < space.m; ++i) {
      const std::uint32_t n = eta.occ[i];
      w *= std::pow(1.0 - space.p, space.alpha[i]) * std::pow(space.p, n) *
           rising_factorial(space.alpha[i], n) / factorial(n);
    }
    return w;
  }
  double lw = 0.0;
  for (std::size_t i = 0; i < space.m; ++i) {
    const std::uint32_t n = eta.occ[i];
    lw += space.alpha[i] * std::log1p(-space.p) +
          static_cast<double>(n) * std::log(space.p);
    if (n > 0)
      lw += log_rising_factorial(space.alpha[i], n) - log_factorial(n);
  }
  return std::exp(lw);
}

double negative_binomial_pmf(double a, double p, std::uint32_t n) {
  if (a == 0.0) return n == 0 ? 1.0 : 0.0;
  if (a + n > 30.0) {
    return std::exp(a * std::log1p(-p) + n * std::log(p) +
                    log_rising_factorial(a, n) - log_factorial(n));
  }
  return std::pow(1.0 - p, a) * std::pow(p, n) * rising_factorial(a, n) /
         factorial(n);
}

TruncatedSpace::TruncatedSpace(SiteSpace space, std::uint32_t n_max,
                               std::size_t basis_limit)
    : space_(std::move(space)), n_max_(n_max) {
  space_.validate();
  // Check the total size before enumerating anything.
  const std::uint64_t total =
      binomial_capped(static_cast<std::uint64_t>(n_max) + space_.m, space_.m,
                      basis_limit);
  if (total > basis_limit)
    throw CapacityError("truncated basis exceeds configured size limit");

  sectors_.reserve(n_max + 1);
  offsets_.reserve(n_max + 1);
  std::size_t off = 0;
  for (std::uint32_t n = 0; n <= n_max; ++n) {
    sectors_.emplace_back(space_.m, n, basis_limit);
    offsets_.push_back(off);
    off += sectors_.back().size();
  }
  weights_.reserve(off);
  for (const auto& sec : sectors_)
    for (const auto& eta : sec.configs())
      weights_.push_back(pascal_weight(space_, eta));
  coverage_ = 0.0;
  for (double w : weights_) coverage_ += w;
}

std::uint32_t TruncatedSpace::sector_of(std::size_t g) const {
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), g);
  return static_cast<std::uint32_t>(it - offsets_.begin() - 1);
}

const Configuration& TruncatedSpace::config_at(std::size_t g) const {
  const std::uint32_t n = sector_of(g);
  return sectors_[n].at(g - offsets_[n]);
}

std::optional<std::size_t> TruncatedSpace::index_of(
    const Configuration& eta) const {
  if (eta.total > n_max_) return std::nullopt;
  auto local = sectors_[eta.total].index_of(eta.occ);
  if (!local) return std::nullopt;
  return offsets_[eta.total] + *local;
}

std::optional<std::size_t> TruncatedSpace::shifted_index(std::size_t g,
                                                         std::size_t site,
                                                         int dn) const {
  const Configuration& eta = config_at(g);
  if (dn < 0 && eta.occ[site] == 0) return std::nullopt;
  const std::uint32_t n = eta.total;
  if (dn > 0 && n + 1 > n_max_) return std::nullopt;
  std::vector<std::uint32_t> occ = eta.occ;
  occ[site] = static_cast<std::uint32_t>(static_cast<int>(occ[site]) + dn);
  const std::uint32_t tn = static_cast<std::uint32_t>(static_cast<int>(n) + dn);
  auto local = sectors_[tn].index_of(occ);
  if (!local) return std::nullopt;
  return offsets_[tn] + *local;
}

cplx TruncatedSpace::inner_product(std::span<const cplx> f,
                                   std::span<const cplx> g) const {
  if (f.size() != dim() || g.size() != dim())
    throw DimensionMismatch("inner_product: vector size != basis size");
  return kernels::weighted_dot(weights_.data(), f.data(), g.data(), dim());
}

double TruncatedSpace::weighted_norm(std::span<const cplx> f) const {
  return std::sqrt(std::abs(inner_product(f, f).real()));
}

}  // namespace su11
