#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "su11/fock.hpp"
#include "su11/sip.hpp"

namespace su11::verify {

// Acceptance thresholds, overridable from the scenario file. Defaults:
// 1e-12 for exact algebra, 1e-10 for block-exact identities, 1e-8/1e-7 for
// truncation-sensitive residuals, 4 sigma for Monte Carlo moments, 0.001
// chi-square significance.
struct Thresholds {
  double exact_algebra = 1e-12;
  double block_exact = 1e-10;
  double truncation_tight = 1e-8;
  double truncation = 1e-7;
  double mc_sigma = 4.0;
  double chi2_significance = 1e-3;
};

struct RateKernelSpec {
  enum class Kind { constant, product, matrix };
  Kind kind = Kind::constant;
  double value = 1.0;
  std::vector<double> phi;
  std::vector<double> entries;  // row-major m x m

  RateKernel build(std::size_t m) const;
};

struct Scenario {
  int schema_version = 1;
  std::string name = "default";
  std::size_t m = 2;
  std::vector<double> alpha{1.0, 1.0};
  double p = 0.3;
  RateKernelSpec kernel;
  std::uint32_t n_max = 40;
  std::vector<double> times{0.1, 1.0, 5.0};
  std::uint64_t mc_samples = 100000;
  std::uint64_t seed = 42;
  std::vector<std::string> suites{"algebra", "pascal",  "sip",
                                  "meixner", "unitary", "intertwine"};
  Thresholds thresholds;
  std::size_t basis_limit = kDefaultBasisLimit;

  SiteSpace site_space() const { return SiteSpace(m, alpha, p); }
  RateKernel rate_kernel() const { return kernel.build(m); }
  void validate() const;  // throws ValidationError

  nlohmann::ordered_json to_json() const;
  static Scenario from_json(const nlohmann::json& j);
};

// Reads and parses a scenario file; throws ParseError on malformed JSON and
// ValidationError on out-of-range values.
Scenario load_scenario(const std::string& path);

}  // namespace su11::verify
