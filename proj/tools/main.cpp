// Command-line front end: loads a scenario, validates it, computes the
// orientation-averaged current sets over the requested scan, and emits
// CSV/JSON tables. Exit codes: 0 success, 1 validation failure,
// 2 oracle-check failure, 3 I/O error.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spincur/scenario.hpp"

int main(int argc, char** argv) {
  CLI::App app{"spin-resolved photoelectron currents from partial-wave dipoles"};

  std::string scenario_path;
  std::optional<std::string> out_path;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::optional<int> lmax_report;
  bool check_oracle = false;
  bool validate_only = false;
  int threads = 1;

  app.add_option("--scenario", scenario_path, "scenario file (JSON)")->required();
  app.add_option("--out", out_path, "override output path");
  app.add_option("--format", format, "override output format (csv|json)");
  app.add_option("--seed", seed, "override random-dipole seed");
  app.add_option("--lmax-report", lmax_report, "override multipole report band");
  app.add_option("--threads", threads, "worker threads (affects speed only, never values)");
  app.add_flag("--check-oracle", check_oracle,
               "verify every emitted current against the orientation-averaging oracle");
  app.add_flag("--validate", validate_only, "validate the scenario and exit");

  CLI11_PARSE(app, argc, argv);

  spincur::cli::Scenario scenario;
  try {
    scenario = spincur::cli::load_scenario(scenario_path);
  } catch (const spincur::cli::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return spincur::cli::exit_io;
  } catch (const spincur::cli::ScenarioParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return spincur::cli::exit_validation;
  }

  if (out_path) scenario.output.path = *out_path;
  if (seed) scenario.dipole.seed = *seed;
  if (lmax_report) scenario.output.lmax_report = *lmax_report;
  if (format) {
    if (*format == "csv")
      scenario.output.format = spincur::cli::OutputSpec::Format::csv;
    else if (*format == "json")
      scenario.output.format = spincur::cli::OutputSpec::Format::json;
    else {
      std::cerr << "error: --format must be csv or json\n";
      return spincur::cli::exit_validation;
    }
  }

  const auto report = spincur::cli::validate(scenario);
  if (validate_only) {
    for (const std::string& msg : report) std::cout << msg << "\n";
    if (report.empty()) std::cout << "scenario valid\n";
    return report.empty() ? spincur::cli::exit_ok : spincur::cli::exit_validation;
  }
  if (!report.empty()) {
    for (const std::string& msg : report) std::cerr << "error: " << msg << "\n";
    return spincur::cli::exit_validation;
  }

  spincur::cli::RunOptions opt;
  opt.check_oracle = check_oracle;
  opt.threads = threads;
  return spincur::cli::run(scenario, opt, std::cerr);
}
