#include "vacns/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "vacns/scheme.hpp"

namespace vacns {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// d(r^{n-1}u)_j over cell j; j = N closes with the ghost velocity.
double momentum_difference(const Snapshot& s, const PhysicalParameters& p,
                           int j) {
  const double un = (j == s.N) ? s.u_ghost : s.u[j + 1];
  return (ipow(s.r[j + 1], p.n - 1) * un - ipow(s.r[j], p.n - 1) * s.u[j]) /
         s.h;
}

double velocity_difference(const Snapshot& s, int j) {
  const double un = (j == s.N) ? s.u_ghost : s.u[j + 1];
  return (un - s.u[j]) / s.h;
}

}  // namespace

EnergyBreakdown discrete_energy(const Snapshot& s,
                                const PhysicalParameters& p) {
  EnergyBreakdown out;
  for (int j = 0; j <= s.N; ++j) {
    out.kinetic += 0.5 * s.u[j] * s.u[j];
    out.potential += rho_pow(s.rho[j], p.gamma - 1.0) / (p.gamma - 1.0);
  }
  out.kinetic *= s.h;
  out.potential *= s.h;
  out.total = out.kinetic + out.potential;
  return out;
}

DissipationTerms dissipation_terms(const Snapshot& s,
                                   const PhysicalParameters& p) {
  DissipationTerms out;
  for (int j = 0; j <= s.N; ++j) {
    const double w = rho_pow(s.rho[j], p.theta + 1.0);
    const double md = momentum_difference(s, p, j);
    const double sh =
        ipow(s.r[j], p.n - 1) * velocity_difference(s, j) -
        s.u[j] / s.r[j] * s.rho[j];
    out.flux += w * md * md;
    out.shear += w * sh * sh;
  }
  out.flux *= (2.0 * p.c1 + p.c2) * s.h;
  out.shear *= 2.0 * (p.n - 1) * p.c1 / p.n * s.h;
  return out;
}

EnergyCheck energy_inequality_check(const std::vector<Snapshot>& traj,
                                    const ForceModel& force,
                                    const PhysicalParameters& p) {
  EnergyCheck out;
  if (traj.empty()) return out;
  const size_t K = traj.size();
  out.energy.reserve(K);
  out.kinetic.reserve(K);
  out.potential.reserve(K);
  out.dissipation_cum.reserve(K);
  out.margin.reserve(K);

  double diss_cum = 0.0;
  double force_cum = 0.0;
  double prev_diss = dissipation_terms(traj[0], p).total();
  double prev_force = force.bound(traj[0].t);
  prev_force *= prev_force;
  const double e0 = discrete_energy(traj[0], p).total;
  const double t0 = traj[0].t;

  for (size_t k = 0; k < K; ++k) {
    const Snapshot& s = traj[k];
    if (k > 0) {
      const double dt = s.t - traj[k - 1].t;
      const double cur_diss = dissipation_terms(s, p).total();
      double cur_force = force.bound(s.t);
      cur_force *= cur_force;
      diss_cum += 0.5 * (prev_diss + cur_diss) * dt;
      force_cum += 0.5 * (prev_force + cur_force) * dt;
      prev_diss = cur_diss;
      prev_force = cur_force;
    }
    const EnergyBreakdown e = discrete_energy(s, p);
    const double bound = std::exp(0.5 * (s.t - t0)) * (e0 + force_cum);
    out.energy.push_back(e.total);
    out.kinetic.push_back(e.kinetic);
    out.potential.push_back(e.potential);
    out.dissipation_cum.push_back(diss_cum);
    out.margin.push_back(bound - (e.total + diss_cum));
  }
  out.worst_margin = *std::min_element(out.margin.begin(), out.margin.end());
  out.pass = out.worst_margin >= 0.0;
  return out;
}

SandwichCheck density_sandwich_check(const std::vector<Snapshot>& traj) {
  SandwichCheck out;
  out.loose_first_violation = kInf;
  out.tight_first_violation = kInf;
  if (traj.empty()) return out;
  const std::vector<double>& rho0 = traj[0].rho;
  for (const Snapshot& s : traj) {
    for (int i = 0; i <= s.N; ++i) {
      const double ratio = s.rho[i] / rho0[i];
      if (out.loose_pass && (ratio < 1.0 / 3.0 || ratio > 3.0)) {
        out.loose_pass = false;
        out.loose_first_violation = s.t;
        out.loose_cell = i;
      }
      if (out.tight_pass && (ratio < 0.5 || ratio > 2.0)) {
        out.tight_pass = false;
        out.tight_first_violation = s.t;
        out.tight_cell = i;
      }
    }
  }
  return out;
}

std::vector<double> velocity_moment_norms(const Snapshot& s, int m) {
  std::vector<double> out(2 * std::max(m, 0), 0.0);
  for (int k = 1; k <= 2 * m; ++k) {
    double acc = 0.0;
    for (int j = 0; j <= s.N; ++j)
      acc += std::pow(s.u[j] * s.u[j], double(k));
    out[k - 1] = acc * s.h;
  }
  return out;
}

double weighted_rho_derivative_norm(const Snapshot& s, double alpha0,
                                    double theta) {
  double acc = 0.0;
  for (int j = 0; j < s.N; ++j) {
    const double d =
        (rho_pow(s.rho[j + 1], theta) - rho_pow(s.rho[j], theta)) / s.h;
    acc += std::pow(1.0 - j * s.h, alpha0) * d * d;
  }
  return acc * s.h;
}

StressNorms stress_sup_norms(const Snapshot& s, const PhysicalParameters& p,
                             double lambda0) {
  StressNorms out;
  for (int j = 0; j <= s.N; ++j) {
    const double md = std::abs(momentum_difference(s, p, j));
    out.visc_flux_sup =
        std::max(out.visc_flux_sup, rho_pow(s.rho[j], p.theta + 1.0) * md);
    out.mass_flux_sup = std::max(out.mass_flux_sup, s.rho[j] * md);
    out.du_lambda0 +=
        std::pow(std::abs(velocity_difference(s, j)), lambda0) * s.h;
    if (j < s.N) out.tv_rho += std::abs(s.rho[j + 1] - s.rho[j]);
  }
  return out;
}

std::vector<double> ut_norm_fd(const std::vector<Snapshot>& traj) {
  std::vector<double> out;
  for (size_t k = 0; k + 1 < traj.size(); ++k) {
    const Snapshot& a = traj[k];
    const Snapshot& b = traj[k + 1];
    const double dt = b.t - a.t;
    double acc = 0.0;
    for (int j = 0; j <= a.N; ++j) {
      const double d = (b.u[j] - a.u[j]) / dt;
      acc += d * d;
    }
    out.push_back(acc * a.h);
  }
  return out;
}

double rdot_drift(const std::vector<Snapshot>& traj) {
  double worst = 0.0;
  for (size_t k = 1; k + 1 < traj.size(); ++k) {
    const Snapshot& lo = traj[k - 1];
    const Snapshot& mid = traj[k];
    const Snapshot& hi = traj[k + 1];
    const double dt = hi.t - lo.t;
    for (int i = 0; i <= mid.N + 1; ++i) {
      const double fd = (hi.r[i] - lo.r[i]) / dt;
      const double u = (i <= mid.N) ? mid.u[i] : mid.u_ghost;
      worst = std::max(worst, std::abs(fd - u));
    }
  }
  return worst;
}

SpeedCheck free_boundary_speed_check(const std::vector<Snapshot>& traj,
                                     double tol) {
  SpeedCheck out;
  if (traj.empty()) return out;
  for (const Snapshot& s : traj) {
    for (int j = 0; j <= s.N; ++j) out.sup_u = std::max(out.sup_u, std::abs(s.u[j]));
    out.sup_u = std::max(out.sup_u, std::abs(s.u_ghost));
  }
  const double b0 = free_boundary(traj[0]);
  const double t0 = traj[0].t;
  out.worst_slack = kInf;
  for (size_t k = 0; k < traj.size(); ++k) {
    const Snapshot& s = traj[k];
    double slack = out.sup_u * (s.t - t0) + tol - std::abs(free_boundary(s) - b0);
    out.worst_slack = std::min(out.worst_slack, slack);
    if (k > 0) {
      const Snapshot& prev = traj[k - 1];
      slack = out.sup_u * (s.t - prev.t) + tol -
              std::abs(free_boundary(s) - free_boundary(prev));
      out.worst_slack = std::min(out.worst_slack, slack);
    }
  }
  out.pass = out.worst_slack >= 0.0;
  return out;
}

double weighted_distance(const Snapshot& s1, const Snapshot& s2, double theta,
                         double l1, double l2) {
  if (s1.N != s2.N)
    throw std::invalid_argument("weighted_distance: mismatched grids");
  if (std::abs(l1 + l2 - (theta - 3.0)) > 1e-12)
    throw std::invalid_argument(
        "weighted_distance: weight exponents must satisfy l1 + l2 = theta - 3");
  double acc = 0.0;
  for (int j = 0; j <= s1.N; ++j) {
    const double w = s1.u[j] - s2.u[j];
    const double q = s1.rho[j] - s2.rho[j];
    const double R = s1.r[j] - s2.r[j];
    acc += w * w + rho_pow(s1.rho[j], l1) * rho_pow(s2.rho[j], l2) * q * q +
           rho_pow(s1.rho[j], theta) / s2.rho[j] * R * R;
  }
  return acc * s1.h;
}

double weighted_distance(const Snapshot& s1, const Snapshot& s2,
                         double theta) {
  return weighted_distance(s1, s2, theta, 1.0 - theta, 2.0 * theta - 4.0);
}

GronwallFit gronwall_fit(const DistanceSeries& series, double tol) {
  GronwallFit out;
  if (series.D.empty()) return out;
  const double d0 = series.D[0];
  if (d0 <= 0.0) {
    out.identical_start = true;
    out.uniqueness_pass =
        *std::max_element(series.D.begin(), series.D.end()) <= tol;
    return out;
  }
  out.C_hat = -kInf;
  for (size_t k = 1; k < series.D.size(); ++k) {
    const double dt = series.times[k] - series.times[0];
    if (dt <= 0.0) continue;
    out.C_hat = std::max(out.C_hat, std::log(series.D[k] / d0) / dt);
  }
  if (out.C_hat == -kInf) out.C_hat = 0.0;  // single-point series
  return out;
}

double trend_ratio(const std::vector<double>& times,
                   const std::vector<double>& values) {
  if (times.empty() || times.size() != values.size())
    throw std::invalid_argument("trend_ratio: mismatched series");
  const double cutoff = times.front() + 0.25 * (times.back() - times.front());
  double head_max = 0.0;
  for (size_t k = 0; k < times.size() && (k == 0 || times[k] <= cutoff); ++k)
    head_max = std::max(head_max, values[k]);
  if (head_max <= 0.0) return values.back() <= 0.0 ? 0.0 : kInf;
  return values.back() / head_max;
}

EstimateReport evaluate_estimates(const std::vector<Snapshot>& traj,
                                  const PhysicalParameters& p,
                                  const InitialData& data,
                                  const ForceModel& force) {
  EstimateReport out;
  if (traj.empty()) return out;
  out.energy = energy_inequality_check(traj, force, p);
  out.sandwich = density_sandwich_check(traj);
  out.moments.assign(2 * std::max(data.m, 0), {});
  out.lagrangian_mass = traj[0].N * traj[0].h;
  for (const Snapshot& s : traj) {
    out.times.push_back(s.t);
    const auto mom = velocity_moment_norms(s, data.m);
    for (size_t k = 0; k < mom.size(); ++k) out.moments[k].push_back(mom[k]);
    out.weighted_rho_norm.push_back(
        weighted_rho_derivative_norm(s, data.alpha0, p.theta));
    const StressNorms sn = stress_sup_norms(s, p, data.lambda0);
    out.visc_flux_sup.push_back(sn.visc_flux_sup);
    out.mass_flux_sup.push_back(sn.mass_flux_sup);
    out.tv_rho.push_back(sn.tv_rho);
    out.du_lambda0.push_back(sn.du_lambda0);
    out.free_boundary_radius.push_back(free_boundary(s));
    const double mass = total_mass(s, p).eulerian;
    out.eulerian_mass.push_back(mass);
    out.eulerian_mass_drift =
        std::max(out.eulerian_mass_drift, std::abs(mass - 1.0));
  }
  out.ut_l2 = ut_norm_fd(traj);
  out.speed = free_boundary_speed_check(traj);
  out.rdot_drift_max = rdot_drift(traj);
  return out;
}

}  // namespace vacns
