#pragma once

#include <string>
#include <vector>

#include "vacns/integrator.hpp"
#include "vacns/model.hpp"

namespace vacns {

/// Raised on malformed configuration text, unknown keys or inadmissible
/// values. The message names the offending section/key.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

enum class RunMode { run, converge, perturb, audit };

std::string to_string(RunMode m);
RunMode run_mode_from_string(const std::string& s);

/// Fully resolved description of one invocation.
struct RunSpec {
  RunMode mode = RunMode::run;
  PhysicalParameters params;
  InitialData init;
  ForceModel force;
  StepController controller;
  RunConfig run_config;
  int N = 64;
  std::vector<int> refinements;  ///< converge mode mesh list
  double epsilon = 0.0;          ///< perturb mode amplitude
  long seed = 0;                 ///< perturb mode provenance tag
  std::string out_dir = ".";
  std::string audit_csv;         ///< audit mode input; empty = out_dir/snapshots.csv
  bool quiet = false;
  ValidationReport validation;   ///< admissibility report for the parsed data
  std::vector<std::string> warnings;
};

/// Parses the INI-style configuration text. Unknown sections or keys are
/// hard errors, as are constitutive violations (dimension, core radius,
/// gamma/theta/viscosity signs). Admissibility-window and integrability
/// failures are warnings in run/audit modes and errors in converge/perturb
/// modes. Mode-specific requirements: converge needs [mesh] refinements,
/// perturb needs [initial] epsilon and seed.
RunSpec parse_config(const std::string& text, RunMode mode,
                     const std::string& out_dir, bool quiet);

/// The documented template with every key at its default value.
std::string config_template();

}  // namespace vacns
