#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spincur/dipole.hpp"
#include "spincur/vec3.hpp"

// Config-driven front end: scenario ingestion and validation, scan
// execution, and CSV/JSON emission of current sets and multipole tables.
namespace spincur::cli {

struct PhotonSpec {
  int xi = +1;
  double intensity = 1.0;  // |E|^2
  std::string omega_label;
};

struct DipoleSource {
  enum class Kind { file, channel, random };
  Kind kind = Kind::random;
  std::string path;            // file source
  std::uint64_t seed = 1;      // random source
  int l_max = 2;               // random source
  double k = 1.0;              // random and channel sources
  dipole::ChannelSpec channel; // channel source
};

struct ScanSpec {
  std::vector<double> phi_mix;  // channel mixing-angle sweep
  std::vector<double> k;        // wavenumber sweep (channel/random)
};

struct OutputSpec {
  enum class Format { csv, json };
  Format format = Format::csv;
  std::string path;        // empty: stdout
  bool per_n = true;       // include |j|/N columns
  int lmax_report = -1;    // multipole report band; <0 selects 2*l_max+1
  bool multipoles = false;
  bool a_table = false;
};

struct Scenario {
  DipoleSource dipole;
  PhotonSpec photon;
  std::vector<Vec3> spin_axes;
  ScanSpec scan;
  OutputSpec output;
};

// Thrown for unreadable/unwritable files (exit code 3).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown for malformed scenario text (exit code 1).
struct ScenarioParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Scenario load_scenario(const std::string& path);

// Schema and physics checks without computing; one message per violation.
std::vector<std::string> validate(const Scenario& s);

struct RunOptions {
  bool check_oracle = false;
  int threads = 1;  // affects speed only, never values
};

// Exit codes shared with the executable.
enum ExitCode : int {
  exit_ok = 0,
  exit_validation = 1,
  exit_oracle = 2,
  exit_io = 3,
};

// Executes the scenario; returns an ExitCode value. Diagnostics (including
// the oracle-check deviation report) go to diag.
int run(const Scenario& s, const RunOptions& opt, std::ostream& diag);

}  // namespace spincur::cli
