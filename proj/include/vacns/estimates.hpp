#pragma once

#include <vector>

#include "vacns/model.hpp"
#include "vacns/reconstruct.hpp"

namespace vacns {

struct EnergyBreakdown {
  double total = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;
};

/// sum_j (u_j^2/2 + rho_j^{gamma-1}/(gamma-1)) * h with its split.
EnergyBreakdown discrete_energy(const Snapshot& s,
                                const PhysicalParameters& p);

/// The two discrete dissipation sums entering the energy inequality:
///   flux:  (2c1+c2) * sum_j rho_j^{theta+1} (d(r^{n-1}u)_j)^2 * h
///   shear: (2(n-1)/n) c1 * sum_j rho_j^{theta+1}
///              (r_j^{n-1} du_j - (u_j/r_j) rho_j)^2 * h
/// both over j = 0..N with the ghost value closing the j = N stencil.
struct DissipationTerms {
  double flux = 0.0;
  double shear = 0.0;
  double total() const { return flux + shear; }
};

DissipationTerms dissipation_terms(const Snapshot& s,
                                   const PhysicalParameters& p);

/// Energy inequality E(t) + D(t) <= exp(t/2) * (E(0) + int_0^t fbar^2 ds)
/// checked at every snapshot; D is the time-trapezoid of the dissipation
/// sums and the force integral a time-trapezoid of the envelope squared.
struct EnergyCheck {
  bool pass = false;
  double worst_margin = 0.0;
  std::vector<double> energy;           ///< E(t_k)
  std::vector<double> kinetic;
  std::vector<double> potential;
  std::vector<double> dissipation_cum;  ///< D(t_k)
  std::vector<double> margin;           ///< bound minus (E + D)
};

EnergyCheck energy_inequality_check(const std::vector<Snapshot>& traj,
                                    const ForceModel& force,
                                    const PhysicalParameters& p);

/// Pointwise density sandwich rho_i(t) / rho_i(0): the loose band [1/3, 3]
/// and the tight band [1/2, 2], each with its earliest violation.
struct SandwichCheck {
  bool loose_pass = true;
  double loose_first_violation = 0.0;  ///< +inf when never violated
  int loose_cell = -1;
  bool tight_pass = true;
  double tight_first_violation = 0.0;  ///< +inf when never violated
  int tight_cell = -1;
};

SandwichCheck density_sandwich_check(const std::vector<Snapshot>& traj);

/// Even velocity moments int u^{2k} dx = sum_j u_j^{2k} h for k = 1..2m.
/// Overflowing entries come back as +inf.
std::vector<double> velocity_moment_norms(const Snapshot& s, int m);

/// Weighted derivative norm sum_{j<N} (1-jh)^{alpha0} (d(rho^theta)_j)^2 h.
double weighted_rho_derivative_norm(const Snapshot& s, double alpha0,
                                    double theta);

/// Sup norms of the viscous flux and mass flux, total variation of rho and
/// the lambda0-norm of du; the j = N stencils use the ghost value.
struct StressNorms {
  double visc_flux_sup = 0.0;   ///< max_j rho_j^{theta+1} |d(r^{n-1}u)_j|
  double mass_flux_sup = 0.0;   ///< max_j rho_j |d(r^{n-1}u)_j|
  double tv_rho = 0.0;          ///< sum_{j<N} |rho_{j+1} - rho_j|
  double du_lambda0 = 0.0;      ///< sum_j |du_j|^{lambda0} h
};

StressNorms stress_sup_norms(const Snapshot& s, const PhysicalParameters& p,
                             double lambda0);

/// Finite-difference L2 proxy of du/dt per snapshot interval:
/// sum_j ((u_j(t_{k+1}) - u_j(t_k)) / dt_k)^2 * h, one entry per interval.
std::vector<double> ut_norm_fd(const std::vector<Snapshot>& traj);

/// Central-difference audit of dr_i/dt = u_i over interior snapshot times;
/// returns the worst node deviation.
double rdot_drift(const std::vector<Snapshot>& traj);

/// Finite propagation check |b(t) - b(0)| <= sup|u| * t + tol at every
/// snapshot, with sup over the whole trajectory including the ghost, plus
/// the adjacent-snapshot variant.
struct SpeedCheck {
  bool pass = true;
  double worst_slack = 0.0;  ///< min over snapshots of bound minus |b-b0|
  double sup_u = 0.0;
};

SpeedCheck free_boundary_speed_check(const std::vector<Snapshot>& traj,
                                     double tol = 1e-8);

/// Weighted distance between two states on the same grid:
///   sum_j (w^2 + rho1^{l1} rho2^{l2} q^2 + rho1^theta rho2^{-1} R^2) h
/// with w = u1-u2, q = rho1-rho2, R = r1-r2 over j = 0..N. The weight
/// exponents must satisfy l1 + l2 = theta - 3; defaults l1 = 1-theta,
/// l2 = 2theta-4. Throws std::invalid_argument on mismatched grids.
double weighted_distance(const Snapshot& s1, const Snapshot& s2, double theta);
double weighted_distance(const Snapshot& s1, const Snapshot& s2, double theta,
                         double l1, double l2);

struct DistanceSeries {
  std::vector<double> times;
  std::vector<double> D;
};

/// Growth-rate fit C = max_{k>=1} log(D(t_k)/D(0)) / t_k. A zero D(0)
/// switches to the uniqueness verdict: pass iff every D(t) <= tol.
struct GronwallFit {
  double C_hat = 0.0;
  bool identical_start = false;  ///< D(0) == 0
  bool uniqueness_pass = true;   ///< meaningful when identical_start
};

GronwallFit gronwall_fit(const DistanceSeries& series, double tol = 1e-10);

/// Ratio of the final series value to the maximum over the first quarter
/// of the time range; the bounded-trend diagnostic.
double trend_ratio(const std::vector<double>& times,
                   const std::vector<double>& values);

/// Everything the auditor evaluates on one trajectory.
struct EstimateReport {
  std::vector<double> times;
  EnergyCheck energy;
  SandwichCheck sandwich;
  std::vector<std::vector<double>> moments;  ///< [k-1][snapshot]
  std::vector<double> weighted_rho_norm;
  std::vector<double> visc_flux_sup;
  std::vector<double> mass_flux_sup;
  std::vector<double> tv_rho;
  std::vector<double> du_lambda0;
  std::vector<double> ut_l2;                 ///< per interval
  std::vector<double> free_boundary_radius;
  std::vector<double> eulerian_mass;
  double eulerian_mass_drift = 0.0;          ///< max |M(t) - 1|
  double lagrangian_mass = 0.0;
  SpeedCheck speed;
  double rdot_drift_max = 0.0;
};

EstimateReport evaluate_estimates(const std::vector<Snapshot>& traj,
                                  const PhysicalParameters& p,
                                  const InitialData& data,
                                  const ForceModel& force);

}  // namespace vacns
