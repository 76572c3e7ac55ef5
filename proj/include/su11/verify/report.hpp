#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "su11/sip.hpp"
#include "su11/verify/scenario.hpp"

namespace su11::verify {

// One verification record. `comparison` is "<=" (residual at most threshold)
// or ">=" (p-value at least significance).
struct CheckRecord {
  std::string suite;
  std::string name;
  std::string anchor;  // theorem/equation tag the check certifies
  double statistic = 0.0;
  double threshold = 0.0;
  std::string comparison = "<=";
  bool passed = false;
  double runtime_s = 0.0;
  std::optional<double> coverage;
  std::optional<std::uint32_t> n_max;
};

struct ConvergencePoint {
  std::string check;
  std::uint32_t n_max = 0;
  double residual = 0.0;
  double coverage = 0.0;
};

struct Report {
  std::uint64_t seed = 0;
  nlohmann::ordered_json scenario;
  std::string backend;
  std::vector<CheckRecord> checks;
  std::vector<ConvergencePoint> convergence;
  std::vector<TrajectoryEvent> trajectory;

  bool passed() const;
  // Deterministic ordered merge: records sorted by (suite, name).
  void finalize();

  nlohmann::ordered_json to_json(bool include_runtime = true) const;
  static Report from_json(const nlohmann::ordered_json& j);
};

void add_check(Report& report, std::string suite, std::string name,
               std::string anchor, double statistic, double threshold,
               std::string comparison, double runtime_s,
               std::optional<double> coverage = std::nullopt,
               std::optional<std::uint32_t> n_max = std::nullopt);

// report.json always; convergence.csv + trajectory.csv in csv mode.
void write_report_files(const Report& report, const std::string& dir,
                        const std::string& format);

}  // namespace su11::verify
