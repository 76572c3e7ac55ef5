#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "su11/errors.hpp"

namespace su11 {

using cplx = std::complex<double>;

// Finite measured site space: m sites carrying masses alpha_i >= 0 and a
// success parameter p in (0,1). Everything else in the library is built
// over one of these.
struct SiteSpace {
  std::size_t m = 0;
  std::vector<double> alpha;
  double p = 0.0;

  SiteSpace() = default;
  SiteSpace(std::size_t m_, std::vector<double> alpha_, double p_);

  double total_mass() const;
  void validate() const;  // throws ValidationError
};

// Occupation vector with cached total particle number.
struct Configuration {
  std::vector<std::uint32_t> occ;
  std::uint32_t total = 0;

  Configuration() = default;
  explicit Configuration(std::vector<std::uint32_t> occ_);

  bool operator==(const Configuration& other) const { return occ == other.occ; }
};

struct OccVectorHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (std::uint32_t x : v)
      h = (h ^ (x + 0x9e3779b97f4a7c15ull)) * 1099511628211ull;
    return static_cast<std::size_t>(h);
  }
};

inline constexpr std::size_t kDefaultBasisLimit = 2'000'000;

// All occupation vectors with a fixed total, in graded reverse-lexicographic
// order, with the inverse index map.
class SectorBasis {
 public:
  SectorBasis() = default;
  SectorBasis(std::size_t m, std::uint32_t n,
              std::size_t basis_limit = kDefaultBasisLimit);

  std::uint32_t n() const { return n_; }
  std::size_t size() const { return configs_.size(); }
  const std::vector<Configuration>& configs() const { return configs_; }
  const Configuration& at(std::size_t i) const { return configs_[i]; }
  std::optional<std::size_t> index_of(
      const std::vector<std::uint32_t>& occ) const;

 private:
  std::uint32_t n_ = 0;
  std::vector<Configuration> configs_;
  std::unordered_map<std::vector<std::uint32_t>, std::size_t, OccVectorHash>
      index_;
};

SectorBasis enumerate_sector(const SiteSpace& space, std::uint32_t n,
                             std::size_t basis_limit = kDefaultBasisLimit);

// Probability that a Pascal point process with parameters (p, alpha) equals
// eta: prod_i (1-p)^{alpha_i} p^{n_i} (alpha_i)_{n_i} / n_i!.
double pascal_weight(const SiteSpace& space, const Configuration& eta);

// Negative binomial pmf with mass a: (1-p)^a p^n (a)_n / n!.
double negative_binomial_pmf(double a, double p, std::uint32_t n);

// Sectors 0..n_max stacked into one index space, with the Pascal weight of
// every configuration. Immutable after construction.
class TruncatedSpace {
 public:
  TruncatedSpace(SiteSpace space, std::uint32_t n_max,
                 std::size_t basis_limit = kDefaultBasisLimit);

  const SiteSpace& space() const { return space_; }
  std::uint32_t n_max() const { return n_max_; }
  std::size_t dim() const { return weights_.size(); }

  const SectorBasis& sector(std::uint32_t n) const { return sectors_[n]; }
  std::size_t sector_offset(std::uint32_t n) const { return offsets_[n]; }
  std::uint32_t sector_of(std::size_t g) const;
  const Configuration& config_at(std::size_t g) const;

  std::optional<std::size_t> index_of(const Configuration& eta) const;
  // Global index of eta +/- e_site, nullopt if outside the truncation.
  std::optional<std::size_t> shifted_index(std::size_t g, std::size_t site,
                                           int dn) const;

  const std::vector<double>& weights() const { return weights_; }
  double weight_at(std::size_t g) const { return weights_[g]; }
  // Captured probability mass sum_{|eta| <= n_max} weight(eta), in (0,1].
  double coverage() const { return coverage_; }

  cplx inner_product(std::span<const cplx> f, std::span<const cplx> g) const;
  double weighted_norm(std::span<const cplx> f) const;

 private:
  SiteSpace space_;
  std::uint32_t n_max_ = 0;
  std::vector<SectorBasis> sectors_;
  std::vector<std::size_t> offsets_;
  std::vector<double> weights_;
  double coverage_ = 0.0;
};

}  // namespace su11
