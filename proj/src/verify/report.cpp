#include "su11/verify/report.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

namespace su11::verify {

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckRecord& c) { return c.passed; });
}

void Report::finalize() {
  std::sort(checks.begin(), checks.end(),
            [](const CheckRecord& a, const CheckRecord& b) {
              return a.suite != b.suite ? a.suite < b.suite : a.name < b.name;
            });
  std::sort(convergence.begin(), convergence.end(),
            [](const ConvergencePoint& a, const ConvergencePoint& b) {
              return a.check != b.check ? a.check < b.check
                                        : a.n_max < b.n_max;
            });
}

nlohmann::ordered_json Report::to_json(bool include_runtime) const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["backend"] = backend;
  j["scenario"] = scenario;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json rec;
    rec["suite"] = c.suite;
    rec["name"] = c.name;
    rec["anchor"] = c.anchor;
    rec["statistic"] = c.statistic;
    rec["threshold"] = c.threshold;
    rec["comparison"] = c.comparison;
    rec["passed"] = c.passed;
    if (include_runtime) rec["runtime_s"] = c.runtime_s;
    if (c.coverage) rec["coverage"] = *c.coverage;
    if (c.n_max) rec["n_max"] = *c.n_max;
    j["checks"].push_back(std::move(rec));
  }
  j["convergence"] = nlohmann::ordered_json::array();
  for (const auto& p : convergence)
    j["convergence"].push_back({{"check", p.check},
                                {"n_max", p.n_max},
                                {"residual", p.residual},
                                {"coverage", p.coverage}});
  j["trajectory"] = nlohmann::ordered_json::array();
  for (const auto& e : trajectory)
    j["trajectory"].push_back({{"time", e.time},
                               {"from_site", e.from_site},
                               {"to_site", e.to_site}});
  j["passed"] = passed();
  return j;
}

Report Report::from_json(const nlohmann::ordered_json& j) {
  Report r;
  r.seed = j.at("seed").get<std::uint64_t>();
  r.backend = j.value("backend", std::string());
  r.scenario = j.value("scenario", nlohmann::ordered_json());
  for (const auto& rec : j.at("checks")) {
    CheckRecord c;
    c.suite = rec.at("suite").get<std::string>();
    c.name = rec.at("name").get<std::string>();
    c.anchor = rec.at("anchor").get<std::string>();
    c.statistic = rec.at("statistic").get<double>();
    c.threshold = rec.at("threshold").get<double>();
    c.comparison = rec.at("comparison").get<std::string>();
    c.passed = rec.at("passed").get<bool>();
    if (rec.contains("runtime_s")) c.runtime_s = rec["runtime_s"].get<double>();
    if (rec.contains("coverage")) c.coverage = rec["coverage"].get<double>();
    if (rec.contains("n_max")) c.n_max = rec["n_max"].get<std::uint32_t>();
    r.checks.push_back(std::move(c));
  }
  for (const auto& rec : j.value("convergence", nlohmann::ordered_json::array())) {
    ConvergencePoint p;
    p.check = rec.at("check").get<std::string>();
    p.n_max = rec.at("n_max").get<std::uint32_t>();
    p.residual = rec.at("residual").get<double>();
    p.coverage = rec.at("coverage").get<double>();
    r.convergence.push_back(std::move(p));
  }
  for (const auto& rec : j.value("trajectory", nlohmann::ordered_json::array())) {
    TrajectoryEvent e;
    e.time = rec.at("time").get<double>();
    e.from_site = rec.at("from_site").get<std::uint32_t>();
    e.to_site = rec.at("to_site").get<std::uint32_t>();
    r.trajectory.push_back(e);
  }
  return r;
}

void add_check(Report& report, std::string suite, std::string name,
               std::string anchor, double statistic, double threshold,
               std::string comparison, double runtime_s,
               std::optional<double> coverage,
               std::optional<std::uint32_t> n_max) {
  CheckRecord c;
  c.suite = std::move(suite);
  c.name = std::move(name);
  c.anchor = std::move(anchor);
  c.statistic = statistic;
  c.threshold = threshold;
  c.comparison = std::move(comparison);
  c.passed = c.comparison == ">=" ? statistic >= threshold
                                  : statistic <= threshold;
  c.runtime_s = runtime_s;
  c.coverage = coverage;
  c.n_max = n_max;
  report.checks.push_back(std::move(c));
}

void write_report_files(const Report& report, const std::string& dir,
                        const std::string& format) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  {
    std::ofstream out(fs::path(dir) / "report.json");
    if (!out) throw std::runtime_error("cannot write report.json in " + dir);
    out << report.to_json().dump(2) << "\n";
  }
  if (format == "csv") {
    {
      std::ofstream out(fs::path(dir) / "convergence.csv");
      if (!out) throw std::runtime_error("cannot write convergence.csv");
      out << "check,n_max,residual,coverage\n";
      for (const auto& p : report.convergence)
        out << p.check << ',' << p.n_max << ',' << p.residual << ','
            << p.coverage << '\n';
    }
    {
      std::ofstream out(fs::path(dir) / "trajectory.csv");
      if (!out) throw std::runtime_error("cannot write trajectory.csv");
      out << "time,from_site,to_site\n";
      for (const auto& e : report.trajectory)
        out << e.time << ',' << e.from_site << ',' << e.to_site << '\n';
    }
  }
}

}  // namespace su11::verify
