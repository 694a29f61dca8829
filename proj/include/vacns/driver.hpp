#pragma once

#include "vacns/config.hpp"

namespace vacns {

/// Exit codes shared by every mode: 0 success, 1 usage or I/O error,
/// 2 physics guard tripped.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitGuard = 2;

/// Simulates the configured data, writes snapshots.csv and report.json into
/// out_dir. Returns kExitGuard when a guard ends the run early.
int cmd_run(const RunSpec& spec);

/// Runs the refinement list, reports pairwise reconstruction errors at 512
/// common mass points and the observed orders; writes report.json. Returns
/// kExitOk only when every error decreases monotonically.
int cmd_converge(const RunSpec& spec);

/// Runs base and perturbed twins (u0 + eps*sin(pi x), rho0 * (1+eps x(1-x))),
/// writes distance.csv and report.json with the growth-rate fit. A zero
/// epsilon asserts the determinism bound D(t) <= 1e-10.
int cmd_perturb(const RunSpec& spec);

/// Re-reads a snapshot CSV, recomputes every estimate and writes
/// report.json. The input path comes from [output] audit_csv or defaults to
/// out_dir/snapshots.csv.
int cmd_audit(const RunSpec& spec);

/// Dispatches on spec.mode.
int dispatch(const RunSpec& spec);

}  // namespace vacns
