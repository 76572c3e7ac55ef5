#include "su11/verify/scenario.hpp"

#include <fstream>
#include <set>

namespace su11::verify {

namespace {

const std::set<std::string> kKnownSuites = {"algebra", "pascal",  "sip",
                                            "meixner", "unitary", "intertwine"};

}  // namespace

RateKernel RateKernelSpec::build(std::size_t m) const {
  switch (kind) {
    case Kind::constant:
      return RateKernel::constant(m, value);
    case Kind::product:
      if (phi.size() != m)
        throw ValidationError("product kernel needs one phi value per site");
      return RateKernel::product_form(phi);
    case Kind::matrix:
      if (entries.size() != m * m)
        throw ValidationError("matrix kernel needs m*m entries");
      return RateKernel::from_matrix(m, entries);
  }
  throw ValidationError("unknown rate kernel kind");
}

void Scenario::validate() const {
  if (schema_version != 1)
    throw ValidationError("unsupported scenario schema version");
  site_space();     // SiteSpace invariants
  rate_kernel();    // kernel invariants
  // the library tolerates zero-mass sites, but the adjoint/unitary checks
  // need nondegenerate weights
  for (double a : alpha)
    if (!(a > 0.0))
      throw ValidationError("suites require strictly positive site masses");
  if (n_max < 4)
    throw ValidationError("suites need a truncation depth of at least 4");
  if (times.empty()) throw ValidationError("time grid must not be empty");
  for (double t : times)
    if (!(t >= 0.0)) throw ValidationError("times must be non-negative");
  if (mc_samples < 100) throw ValidationError("mc_samples is too small");
  for (const auto& s : suites)
    if (!kKnownSuites.count(s))
      throw ValidationError("unknown suite name: " + s);
  if (!(thresholds.exact_algebra > 0.0) || !(thresholds.block_exact > 0.0) ||
      !(thresholds.truncation > 0.0) || !(thresholds.truncation_tight > 0.0) ||
      !(thresholds.mc_sigma > 0.0) || !(thresholds.chi2_significance > 0.0))
    throw ValidationError("thresholds must be positive");
}

nlohmann::ordered_json Scenario::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = schema_version;
  j["name"] = name;
  j["space"] = {{"m", m}, {"alpha", alpha}, {"p", p}};
  switch (kernel.kind) {
    case RateKernelSpec::Kind::constant:
      j["rate_kernel"] = {{"kind", "constant"}, {"value", kernel.value}};
      break;
    case RateKernelSpec::Kind::product:
      j["rate_kernel"] = {{"kind", "product"}, {"phi", kernel.phi}};
      break;
    case RateKernelSpec::Kind::matrix:
      j["rate_kernel"] = {{"kind", "matrix"}, {"entries", kernel.entries}};
      break;
  }
  j["n_max"] = n_max;
  j["times"] = times;
  j["mc_samples"] = mc_samples;
  j["seed"] = seed;
  j["suites"] = suites;
  j["thresholds"] = {{"exact_algebra", thresholds.exact_algebra},
                     {"block_exact", thresholds.block_exact},
                     {"truncation_tight", thresholds.truncation_tight},
                     {"truncation", thresholds.truncation},
                     {"mc_sigma", thresholds.mc_sigma},
                     {"chi2_significance", thresholds.chi2_significance}};
  j["basis_limit"] = basis_limit;
  return j;
}

Scenario Scenario::from_json(const nlohmann::json& j) {
  Scenario sc;
  try {
    sc.schema_version = j.value("schema_version", 1);
    sc.name = j.value("name", std::string("scenario"));
    const auto& space = j.at("space");
    sc.m = space.at("m").get<std::size_t>();
    sc.alpha = space.at("alpha").get<std::vector<double>>();
    sc.p = space.at("p").get<double>();
    if (j.contains("rate_kernel")) {
      const auto& rk = j["rate_kernel"];
      const std::string kind = rk.value("kind", std::string("constant"));
      if (kind == "constant") {
        sc.kernel.kind = RateKernelSpec::Kind::constant;
        sc.kernel.value = rk.value("value", 1.0);
      } else if (kind == "product") {
        sc.kernel.kind = RateKernelSpec::Kind::product;
        sc.kernel.phi = rk.at("phi").get<std::vector<double>>();
      } else if (kind == "matrix") {
        sc.kernel.kind = RateKernelSpec::Kind::matrix;
        sc.kernel.entries = rk.at("entries").get<std::vector<double>>();
      } else {
        throw ValidationError("unknown rate kernel kind: " + kind);
      }
    }
    sc.n_max = j.value("n_max", 40u);
    if (j.contains("times"))
      sc.times = j["times"].get<std::vector<double>>();
    sc.mc_samples = j.value("mc_samples", std::uint64_t{100000});
    sc.seed = j.value("seed", std::uint64_t{42});
    if (j.contains("suites"))
      sc.suites = j["suites"].get<std::vector<std::string>>();
    if (j.contains("thresholds")) {
      const auto& th = j["thresholds"];
      sc.thresholds.exact_algebra =
          th.value("exact_algebra", sc.thresholds.exact_algebra);
      sc.thresholds.block_exact =
          th.value("block_exact", sc.thresholds.block_exact);
      sc.thresholds.truncation_tight =
          th.value("truncation_tight", sc.thresholds.truncation_tight);
      sc.thresholds.truncation =
          th.value("truncation", sc.thresholds.truncation);
      sc.thresholds.mc_sigma = th.value("mc_sigma", sc.thresholds.mc_sigma);
      sc.thresholds.chi2_significance =
          th.value("chi2_significance", sc.thresholds.chi2_significance);
    }
    sc.basis_limit = j.value("basis_limit", kDefaultBasisLimit);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("scenario field error: ") + e.what());
  }
  sc.validate();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("scenario parse error: ") + e.what());
  }
  return Scenario::from_json(j);
}

}  // namespace su11::verify
