#pragma once

#include <functional>
#include <utility>

#include "su11/fock.hpp"
#include "su11/rng.hpp"
#include "su11/stats.hpp"

namespace su11 {

// One draw of the Pascal point process, per-site negative binomials via the
// Gamma-Poisson mixture. Site i consumes rng.substream(i).
Configuration sample_pascal_direct(const SiteSpace& space, RngStream& rng);

// Same law via the compound-Poisson representation: Poisson many clusters
// per site, logarithmic-series cluster sizes.
Configuration sample_pascal_compound(const SiteSpace& space, RngStream& rng);

using PapangelouFunctional =
    std::function<double(std::size_t site, const Configuration& eta)>;

// Monte Carlo estimates of both sides of the removal/insertion identity
//   E int F(x, eta) eta(dx)  =  E int F(x, eta + delta_x) p (alpha+eta)(dx).
std::pair<McEstimate, McEstimate> check_papangelou(
    const SiteSpace& space, const PapangelouFunctional& f,
    std::uint64_t n_samples, const RngStream& base);

// Empirical Laplace functional E exp(-sum f_x eta_x) next to its closed form
// exp(-sum_x alpha_x log((1 - p e^{-f_x}) / (1 - p))).
std::pair<McEstimate, double> check_laplace(const SiteSpace& space,
                                            const std::vector<double>& f,
                                            std::uint64_t n_samples,
                                            const RngStream& base);

double laplace_functional_closed_form(const SiteSpace& space,
                                      const std::vector<double>& f);

}  // namespace su11
