#include "vacns/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vacns {

namespace {

// Cash-Karp embedded pair: six stages, fifth-order propagation with a
// fourth-order companion for the error estimate.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 3.0 / 10.0, kA42 = -9.0 / 10.0, kA43 = 6.0 / 5.0;
constexpr double kA51 = -11.0 / 54.0, kA52 = 5.0 / 2.0, kA53 = -70.0 / 27.0,
                 kA54 = 35.0 / 27.0;
constexpr double kA61 = 1631.0 / 55296.0, kA62 = 175.0 / 512.0,
                 kA63 = 575.0 / 13824.0, kA64 = 44275.0 / 110592.0,
                 kA65 = 253.0 / 4096.0;
constexpr double kC[6] = {0.0, 1.0 / 5.0, 3.0 / 10.0, 3.0 / 5.0, 1.0, 7.0 / 8.0};
constexpr double kB5[6] = {37.0 / 378.0,  0.0, 250.0 / 621.0,
                           125.0 / 594.0, 0.0, 512.0 / 1771.0};
constexpr double kB4[6] = {2825.0 / 27648.0,  0.0,           18575.0 / 48384.0,
                           13525.0 / 55296.0, 277.0 / 14336.0, 1.0 / 4.0};

using Vec = std::vector<double>;

// Evolved unknowns packed as [rho_0..rho_N, u_1..u_N].
Vec pack(const GridState& s) {
  Vec y(2 * s.N + 1);
  std::copy(s.rho.begin(), s.rho.end(), y.begin());
  std::copy(s.u.begin() + 1, s.u.end(), y.begin() + s.N + 1);
  return y;
}

GridState unpack(const Vec& y, const GridState& like,
                 const PhysicalParameters& p, double t) {
  GridState s;
  s.N = like.N;
  s.h = like.h;
  s.t = t;
  s.rho.assign(y.begin(), y.begin() + s.N + 1);
  s.u.resize(s.N + 1);
  s.u[0] = 0.0;
  std::copy(y.begin() + s.N + 1, y.end(), s.u.begin() + 1);
  refresh_geometry(s, p);
  return s;
}

Vec eval_rhs(const Vec& y, const GridState& like, const ForceModel& force,
             const PhysicalParameters& p, double t) {
  const GridState s = unpack(y, like, p, t);
  const RhsVector rhs = assemble_rhs(s, force, p);
  Vec dy(y.size());
  std::copy(rhs.drho.begin(), rhs.drho.end(), dy.begin());
  std::copy(rhs.du.begin(), rhs.du.end(), dy.begin() + s.N + 1);
  return dy;
}

double inf_norm(const Vec& v) {
  double acc = 0.0;
  for (double x : v) acc = std::max(acc, std::abs(x));
  return acc;
}

}  // namespace

std::string to_string(TerminationReason r) {
  switch (r) {
    case TerminationReason::completed: return "completed";
    case TerminationReason::sandwich_violated: return "sandwich-violated";
    case TerminationReason::velocity_blowup: return "velocity-blowup";
    case TerminationReason::vacuum_collapse: return "vacuum-collapse";
    case TerminationReason::step_underflow: return "step-underflow";
  }
  return "unknown";
}

double stable_dt(const GridState& s, const PhysicalParameters& p,
                 const StepController& ctl) {
  double dmax = 0.0;
  for (int j = 0; j <= s.N; ++j) {
    const double d = (2.0 * p.c1 + p.c2) * rho_pow(s.rho[j], p.theta + 1.0) *
                     ipow(s.r[j + 1], 2 * (p.n - 1));
    dmax = std::max(dmax, d);
  }
  if (dmax <= 0.0) return ctl.dt_max;
  const double dt = ctl.cfl * s.h * s.h / (2.0 * dmax);
  return std::clamp(dt, ctl.dt_min, ctl.dt_max);
}

StepResult step(const GridState& s, double dt, const ForceModel& force,
                const PhysicalParameters& p, const StepController& ctl) {
  if (dt == 0.0) return {s, 0.0, ctl.dt_min, 0.0, 0};
  if (dt < 0.0) throw std::invalid_argument("step: negative dt");

  const Vec y0 = pack(s);
  const Vec k1 = eval_rhs(y0, s, force, p, s.t);
  const size_t dim = y0.size();

  StepResult out;
  out.rejected = 0;
  double ratio_prev = 1.0;

  while (true) {
    bool vacuum = false;
    Vec y5(dim), err(dim);
    try {
      Vec k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), tmp(dim);
      auto stage = [&](Vec& k, double c, auto&& combine) {
        for (size_t i = 0; i < dim; ++i) tmp[i] = y0[i] + dt * combine(i);
        k = eval_rhs(tmp, s, force, p, s.t + c * dt);
      };
      stage(k2, kC[1], [&](size_t i) { return kA21 * k1[i]; });
      stage(k3, kC[2], [&](size_t i) { return kA31 * k1[i] + kA32 * k2[i]; });
      stage(k4, kC[3], [&](size_t i) {
        return kA41 * k1[i] + kA42 * k2[i] + kA43 * k3[i];
      });
      stage(k5, kC[4], [&](size_t i) {
        return kA51 * k1[i] + kA52 * k2[i] + kA53 * k3[i] + kA54 * k4[i];
      });
      stage(k6, kC[5], [&](size_t i) {
        return kA61 * k1[i] + kA62 * k2[i] + kA63 * k3[i] + kA64 * k4[i] +
               kA65 * k5[i];
      });
      for (size_t i = 0; i < dim; ++i) {
        const double b5 = kB5[0] * k1[i] + kB5[2] * k3[i] + kB5[3] * k4[i] +
                          kB5[5] * k6[i];
        const double b4 = kB4[0] * k1[i] + kB4[2] * k3[i] + kB4[3] * k4[i] +
                          kB4[4] * k5[i] + kB4[5] * k6[i];
        y5[i] = y0[i] + dt * b5;
        err[i] = dt * (b5 - b4);
      }
      // The propagated solution must keep every density positive.
      for (int i = 0; i <= s.N; ++i) {
        if (!(y5[i] > 0.0)) {
          vacuum = true;
          break;
        }
      }
    } catch (const VacuumCollapseError&) {
      vacuum = true;
    }

    if (vacuum) {
      ++out.rejected;
      dt *= 0.5;
      if (dt < ctl.dt_min)
        throw VacuumCollapseError(
            "vacuum collapse: density positivity unrecoverable at dt_min");
      continue;
    }

    const double scale =
        std::max(ctl.rel_tol * std::max(inf_norm(y0), inf_norm(y5)),
                 ctl.abs_tol);
    const double ratio = inf_norm(err) / scale;

    if (ratio <= 1.0) {
      out.state = unpack(y5, s, p, s.t + dt);
      out.dt_used = dt;
      out.error_ratio = ratio;
      const double r = std::max(ratio, 1e-16);
      const double grow = ctl.safety * std::pow(r, -0.7 / 5.0) *
                          std::pow(std::max(ratio_prev, 1e-16), 0.4 / 5.0);
      out.dt_next = dt * std::clamp(grow, 0.2, 5.0);
      return out;
    }

    ++out.rejected;
    ratio_prev = ratio;
    dt *= std::clamp(ctl.safety * std::pow(ratio, -0.2), 0.1, 0.9);
    if (dt < ctl.dt_min) {
      std::ostringstream os;
      os << "step underflow: required dt " << dt << " below dt_min "
         << ctl.dt_min;
      throw StepUnderflowError(os.str());
    }
  }
}

namespace {

struct GuardTrip {
  TerminationReason reason;
  std::string detail;
};

std::optional<GuardTrip> check_guards(const GridState& s,
                                      const std::vector<double>& ref_rho,
                                      double e0, const RunConfig& cfg,
                                      const PhysicalParameters& p) {
  for (int i = 0; i <= s.N; ++i) {
    const double ratio = s.rho[i] / ref_rho[i];
    if (ratio > cfg.sandwich_factor || ratio < 1.0 / cfg.sandwich_factor) {
      std::ostringstream os;
      os << "density sandwich violated at cell " << i << ": ratio " << ratio;
      return GuardTrip{TerminationReason::sandwich_violated, os.str()};
    }
  }
  double umax = std::abs(s.u_ghost);
  for (double u : s.u) umax = std::max(umax, std::abs(u));
  if (umax > cfg.max_velocity) {
    std::ostringstream os;
    os << "velocity guard: max |u| = " << umax;
    return GuardTrip{TerminationReason::velocity_blowup, os.str()};
  }
  const double e = grid_energy(s.rho, s.u, s.h, p.gamma);
  if (e > cfg.max_energy_growth * e0) {
    std::ostringstream os;
    os << "energy growth guard: E = " << e << " vs E0 = " << e0;
    return GuardTrip{TerminationReason::velocity_blowup, os.str()};
  }
  return std::nullopt;
}

}  // namespace

RunResult run(const GridState& initial, const RunConfig& cfg,
              const StepController& ctl, const ForceModel& force,
              const PhysicalParameters& p) {
  if (!(cfg.t_final >= 0.0))
    throw std::invalid_argument("run: t_final must be nonnegative");
  if (!(cfg.snapshot_interval > 0.0))
    throw std::invalid_argument("run: snapshot_interval must be positive");

  GridState s = initial;
  refresh_geometry(s, p);

  RunResult out;
  const std::vector<double> ref_rho =
      cfg.guard_reference_rho ? *cfg.guard_reference_rho : s.rho;
  const double e0 = grid_energy(s.rho, s.u, s.h, p.gamma);

  auto track_residuals = [&](const GridState& st) {
    const double scale = std::max(1.0, rho_pow(st.rho[st.N], p.gamma));
    out.max_boundary_residual = std::max(
        out.max_boundary_residual, std::abs(boundary_residual(st, p)) / scale);
    out.max_radius_residual =
        std::max(out.max_radius_residual, radius_law_residual(st, p));
  };

  out.trajectory.push_back(Snapshot::of(s));
  track_residuals(s);
  if (auto trip = check_guards(s, ref_rho, e0, cfg, p)) {
    out.reason = trip->reason;
    out.detail = trip->detail;
    return out;
  }
  if (cfg.t_final == 0.0) return out;

  // Snapshot times: every cadence point plus the final time.
  std::vector<double> events;
  for (long k = 1; k * cfg.snapshot_interval <
                   cfg.t_final * (1.0 - 1e-12);
       ++k)
    events.push_back(k * cfg.snapshot_interval);
  events.push_back(cfg.t_final);

  double dt_next = stable_dt(s, p, ctl);
  for (double te : events) {
    while (s.t < te) {
      const double remaining = te - s.t;
      double dt = std::min({dt_next, stable_dt(s, p, ctl), remaining});
      try {
        StepResult res = step(s, dt, force, p, ctl);
        s = std::move(res.state);
        dt_next = res.dt_next;
        out.steps += 1;
        out.rejected += res.rejected;
      } catch (const VacuumCollapseError& e) {
        out.reason = TerminationReason::vacuum_collapse;
        out.detail = e.what();
        out.trajectory.push_back(Snapshot::of(s));
        return out;
      } catch (const StepUnderflowError& e) {
        out.reason = TerminationReason::step_underflow;
        out.detail = e.what();
        out.trajectory.push_back(Snapshot::of(s));
        return out;
      }
      if (te - s.t < 1e-12 * std::max(1.0, te)) s.t = te;
      track_residuals(s);
      if (auto trip = check_guards(s, ref_rho, e0, cfg, p)) {
        out.reason = trip->reason;
        out.detail = trip->detail;
        out.trajectory.push_back(Snapshot::of(s));
        return out;
      }
    }
    out.trajectory.push_back(Snapshot::of(s));
  }
  out.reason = TerminationReason::completed;
  return out;
}

}  // namespace vacns
