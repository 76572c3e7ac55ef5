#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "su11/verify/suites.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void print_report(const su11::verify::Report& report) {
  for (const auto& c : report.checks) {
    std::printf("[%s] %s/%s  statistic=%.3e %s %.3e  (%s)\n",
                c.passed ? "PASS" : "FAIL", c.suite.c_str(), c.name.c_str(),
                c.statistic, c.comparison.c_str(), c.threshold,
                c.anchor.c_str());
  }
  std::size_t passed = 0;
  for (const auto& c : report.checks) passed += c.passed ? 1 : 0;
  std::printf("%zu/%zu checks passed (backend: %s)\n", passed,
              report.checks.size(), report.backend.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification toolkit for Pascal point processes, su(1,1) "
               "raising/lowering operators, Meixner expansions and the "
               "symmetric inclusion process"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run suites from a scenario file");
  std::string scenario_path;
  std::string out_dir;
  std::string format = "json";
  std::string suites_csv;
  std::uint64_t seed = 0;
  run->add_option("scenario", scenario_path, "scenario JSON file")->required();
  run->add_option("--out", out_dir, "output directory for report files");
  run->add_option("--suites", suites_csv,
                  "comma-separated subset of suites to run");
  auto* seed_opt = run->add_option("--seed", seed, "override scenario seed");
  run->add_option("--format", format, "report format")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI11_PARSE(app, argc, argv);

  try {
    su11::verify::Scenario sc = su11::verify::load_scenario(scenario_path);
    if (*seed_opt) sc.seed = seed;
    if (!suites_csv.empty()) sc.suites = split_csv(suites_csv);
    sc.validate();

    const su11::verify::Report report = su11::verify::run_scenario(sc);

    std::string dir = out_dir;
    if (dir.empty()) {
      // environment override applies to the output directory only
      if (const char* env = std::getenv("SU11_VERIFY_OUT")) dir = env;
    }
    if (dir.empty()) dir = ".";
    su11::verify::write_report_files(report, dir, format);
    print_report(report);
    return report.passed() ? 0 : 1;
  } catch (const su11::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const su11::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 3;
  } catch (const su11::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
