#pragma once

#include "su11/verify/report.hpp"
#include "su11/verify/scenario.hpp"

namespace su11::verify {

// Commutation relations, adjointness, shift discipline, weighted Hermiticity.
void run_algebra_suite(const Scenario& sc, Report& report);
// Sampler moments and agreement, removal/insertion identity, Laplace
// functional, merging.
void run_pascal_suite(const Scenario& sc, Report& report);
// Univariate polynomial identities and the multivariate expansion.
void run_meixner_suite(const Scenario& sc, Report& report);
// Reversibility, consistency, conservativity, algebraic rewrite, trajectory
// statistics.
void run_sip_suite(const Scenario& sc, Report& report);
// Unitary construction, orthogonalization residuals, exponential states,
// semigroup symmetry.
void run_unitary_suite(const Scenario& sc, Report& report);
// Semigroup / orthogonal-expansion intertwining, block exact.
void run_intertwine_suite(const Scenario& sc, Report& report);

// Runs the selected suites in canonical order and assembles the report.
Report run_scenario(const Scenario& sc);

}  // namespace su11::verify
