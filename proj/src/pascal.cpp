#include "su11/pascal.hpp"

#include <cmath>

namespace su11 {

Configuration sample_pascal_direct(const SiteSpace& space, RngStream& rng) {
  std::vector<std::uint32_t> occ(space.m, 0);
  const double scale = space.p / (1.0 - space.p);
  for (std::size_t i = 0; i < space.m; ++i) {
    if (space.alpha[i] == 0.0) continue;
    RngStream site_rng = rng.substream(i);
    const double rate = site_rng.gamma(space.alpha[i], scale);
    occ[i] = static_cast<std::uint32_t>(site_rng.poisson(rate));
  }
  return Configuration(std::move(occ));
}

Configuration sample_pascal_compound(const SiteSpace& space, RngStream& rng) {
  std::vector<std::uint32_t> occ(space.m, 0);
  const LogSeriesSampler cluster_size(space.p);
  const double cluster_intensity = -std::log1p(-space.p);
  for (std::size_t i = 0; i < space.m; ++i) {
    if (space.alpha[i] == 0.0) continue;
    RngStream site_rng = rng.substream(i);
    const std::uint64_t clusters =
        site_rng.poisson(space.alpha[i] * cluster_intensity);
    std::uint64_t count = 0;
    for (std::uint64_t c = 0; c < clusters; ++c)
      count += cluster_size.sample(site_rng);
    occ[i] = static_cast<std::uint32_t>(count);
  }
  return Configuration(std::move(occ));
}

std::pair<McEstimate, McEstimate> check_papangelou(
    const SiteSpace& space, const PapangelouFunctional& f,
    std::uint64_t n_samples, const RngStream& base) {
  RunningStat lhs, rhs;
  Configuration bumped;
  for (std::uint64_t r = 0; r < n_samples; ++r) {
    RngStream replica = base.substream(r);
    const Configuration eta = sample_pascal_direct(space, replica);
    double l = 0.0, rr = 0.0;
    for (std::size_t x = 0; x < space.m; ++x) {
      if (eta.occ[x] > 0) l += eta.occ[x] * f(x, eta);
      bumped = eta;
      ++bumped.occ[x];
      ++bumped.total;
      rr += space.p * (space.alpha[x] + eta.occ[x]) * f(x, bumped);
    }
    lhs.add(l);
    rhs.add(rr);
  }
  return {lhs.estimate(), rhs.estimate()};
}

double laplace_functional_closed_form(const SiteSpace& space,
                                      const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t x = 0; x < space.m; ++x)
    s += space.alpha[x] *
         std::log((1.0 - space.p * std::exp(-f[x])) / (1.0 - space.p));
  return std::exp(-s);
}

std::pair<McEstimate, double> check_laplace(const SiteSpace& space,
                                            const std::vector<double>& f,
                                            std::uint64_t n_samples,
                                            const RngStream& base) {
  if (f.size() != space.m)
    throw DimensionMismatch("check_laplace: f needs one value per site");
  RunningStat stat;
  for (std::uint64_t r = 0; r < n_samples; ++r) {
    RngStream replica = base.substream(r);
    const Configuration eta = sample_pascal_direct(space, replica);
    double expo = 0.0;
    for (std::size_t x = 0; x < space.m; ++x) expo += f[x] * eta.occ[x];
    stat.add(std::exp(-expo));
  }
  return {stat.estimate(), laplace_functional_closed_form(space, f)};
}

}  // namespace su11
