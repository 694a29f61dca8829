#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vacns/reconstruct.hpp"
#include "vacns/scheme.hpp"

namespace vacns {

/// Raised when error control or positivity rejection pushes dt below dt_min.
class StepUnderflowError : public std::runtime_error {
 public:
  explicit StepUnderflowError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Adaptive step-size control for the embedded Runge-Kutta pair.
struct StepController {
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  double safety = 0.9;
  double dt_min = 1e-12;
  double dt_max = 1e-2;
  double cfl = 0.9;  ///< fraction of the parabolic stability limit
};

/// Run horizon, output cadence and the physics guards.
struct RunConfig {
  double t_final = 1.0;
  double snapshot_interval = 0.05;
  double max_velocity = 50.0;        ///< guard on max |u| including ghost
  double sandwich_factor = 3.0;      ///< guard on rho_i vs its initial value
  double max_energy_growth = 10.0;   ///< guard on E(t)/E(0)
  /// Densities the sandwich guard compares against; defaults to the run's
  /// own initial densities.
  std::optional<std::vector<double>> guard_reference_rho;
};

enum class TerminationReason {
  completed,
  sandwich_violated,
  velocity_blowup,
  vacuum_collapse,
  step_underflow,
};

std::string to_string(TerminationReason r);

/// Parabolic stability limit cfl * h^2 / (2 * max_j D_j) with diffusion
/// scale D_j = (2c1+c2) * rho_j^{theta+1} * r_{j+1}^{2(n-1)} over the outer
/// cell radius, clamped to [dt_min, dt_max]. A fully degenerate state
/// (all D_j = 0) returns dt_max.
double stable_dt(const GridState& s, const PhysicalParameters& p,
                 const StepController& ctl);

struct StepResult {
  GridState state;
  double dt_used = 0.0;
  double dt_next = 0.0;       ///< controller suggestion for the next step
  double error_ratio = 0.0;   ///< local error estimate / tolerance, <= 1
  int rejected = 0;           ///< rejected attempts within this step
};

/// One adaptive embedded Runge-Kutta 4(5) step of the (rho, u) system.
/// Radii are recomputed and the ghost re-closed at every internal stage.
/// Rejected attempts (error too large, or a stage losing density
/// positivity) retry with a smaller dt; dropping below dt_min throws
/// StepUnderflowError or VacuumCollapseError according to the last cause.
/// dt = 0 returns the state unchanged.
StepResult step(const GridState& s, double dt, const ForceModel& force,
                const PhysicalParameters& p, const StepController& ctl);

struct RunResult {
  std::vector<Snapshot> trajectory;
  TerminationReason reason = TerminationReason::completed;
  std::string detail;
  long steps = 0;
  long rejected = 0;
  double max_boundary_residual = 0.0;  ///< worst closure residual, scaled
  double max_radius_residual = 0.0;    ///< worst radius-law relative defect
};

/// Advances the state to t_final or the first guard trip, emitting
/// snapshots at t = 0, every snapshot_interval, and the final time. Steps
/// land exactly on snapshot times; guards are evaluated after every
/// accepted step, and the closure/radius-law residuals are tracked.
RunResult run(const GridState& initial, const RunConfig& cfg,
              const StepController& ctl, const ForceModel& force,
              const PhysicalParameters& p);

}  // namespace vacns
