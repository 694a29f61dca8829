#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vacns/config.hpp"
#include "vacns/driver.hpp"
#include "vacns/estimates.hpp"
#include "vacns/integrator.hpp"
#include "vacns/io.hpp"
#include "vacns/model.hpp"
#include "vacns/reconstruct.hpp"
#include "vacns/scheme.hpp"

namespace py = pybind11;
using namespace vacns;

namespace {

/// Opaque handle so Python can hold and combine immutable profiles.
struct ProfileHandle {
  ProfilePtr ptr;
};

ProfileHandle require(const ProfileHandle& h) {
  if (!h.ptr) throw std::invalid_argument("empty profile handle");
  return h;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Lagrangian solver and estimate auditor for spherically "
            "symmetric viscous flow around a solid core with a vacuum free "
            "boundary";

  py::class_<PhysicalParameters>(m, "PhysicalParameters")
      .def(py::init<>())
      .def_readwrite("n", &PhysicalParameters::n)
      .def_readwrite("a", &PhysicalParameters::a)
      .def_readwrite("gamma", &PhysicalParameters::gamma)
      .def_readwrite("theta", &PhysicalParameters::theta)
      .def_readwrite("c1", &PhysicalParameters::c1)
      .def_readwrite("c2", &PhysicalParameters::c2)
      .def("beta", &PhysicalParameters::beta);

  m.def("pressure", &pressure);
  m.def("viscosity_mu", &viscosity_mu);
  m.def("viscosity_lambda", &viscosity_lambda);

  py::class_<ProfileHandle>(m, "Profile")
      .def("value", [](const ProfileHandle& h, double x) {
        return require(h).ptr->value(x);
      })
      .def("derivative", [](const ProfileHandle& h, double x) {
        return require(h).ptr->derivative(x);
      })
      .def("mean", [](const ProfileHandle& h, double x0, double x1) {
        return require(h).ptr->mean(x0, x1);
      })
      .def("describe", [](const ProfileHandle& h) {
        return require(h).ptr->describe();
      });

  m.def("power_profile", [](double coef, double alpha) {
    return ProfileHandle{power_profile(coef, alpha)};
  });
  m.def("polynomial_profile", [](std::vector<double> coeffs) {
    return ProfileHandle{polynomial_profile(std::move(coeffs))};
  });
  m.def("table_profile", [](std::vector<double> xs, std::vector<double> vals) {
    return ProfileHandle{table_profile(std::move(xs), std::move(vals))};
  });
  m.def("bump_perturbed", [](const ProfileHandle& base, double eps) {
    return ProfileHandle{bump_perturbed(require(base).ptr, eps)};
  });
  m.def("wave_perturbed", [](const ProfileHandle& base, double eps) {
    return ProfileHandle{wave_perturbed(require(base).ptr, eps)};
  });

  py::class_<InitialData>(m, "InitialData")
      .def(py::init<>())
      .def_readwrite("alpha", &InitialData::alpha)
      .def_readwrite("A", &InitialData::A)
      .def_readwrite("B", &InitialData::B)
      .def_readwrite("alpha0", &InitialData::alpha0)
      .def_readwrite("lambda0", &InitialData::lambda0)
      .def_readwrite("m", &InitialData::m)
      .def_property(
          "rho0",
          [](const InitialData& d) { return ProfileHandle{d.rho0}; },
          [](InitialData& d, const ProfileHandle& h) { d.rho0 = require(h).ptr; })
      .def_property(
          "u0", [](const InitialData& d) { return ProfileHandle{d.u0}; },
          [](InitialData& d, const ProfileHandle& h) { d.u0 = require(h).ptr; });

  py::class_<ForceModel>(m, "ForceModel")
      .def(py::init<>())
      .def_readonly("kind", &ForceModel::kind)
      .def_static("zero", &ForceModel::zero)
      .def_static("radial", &ForceModel::radial)
      .def("__call__", &ForceModel::operator())
      .def("bound", &ForceModel::bound);

  py::class_<Check>(m, "Check")
      .def_readonly("name", &Check::name)
      .def_readonly("pass_", &Check::pass)
      .def_readonly("lhs", &Check::lhs)
      .def_readonly("rhs", &Check::rhs)
      .def_readonly("note", &Check::note);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("checks", &ValidationReport::checks)
      .def("ok", &ValidationReport::ok);

  m.def("validate_assumptions", &validate_assumptions, py::arg("params"),
        py::arg("data"), py::arg("force") = ForceModel::zero());

  py::class_<ExponentWindows>(m, "ExponentWindows")
      .def_readonly("beta", &ExponentWindows::beta)
      .def_readonly("alpha_lo", &ExponentWindows::alpha_lo)
      .def_readonly("alpha_hi", &ExponentWindows::alpha_hi)
      .def_readonly("alpha0_lo", &ExponentWindows::alpha0_lo)
      .def_readonly("alpha0_hi", &ExponentWindows::alpha0_hi)
      .def_readonly("alpha0_default", &ExponentWindows::alpha0_default)
      .def_readonly("lambda0_lo", &ExponentWindows::lambda0_lo)
      .def_readonly("lambda0_hi", &ExponentWindows::lambda0_hi)
      .def_readonly("lambda0_default", &ExponentWindows::lambda0_default)
      .def_readonly("m_min", &ExponentWindows::m_min);

  m.def("derived_exponents", &derived_exponents, py::arg("params"),
        py::arg("alpha"), py::arg("m") = -1);

  py::class_<GridState>(m, "GridState")
      .def(py::init<>())
      .def_readwrite("N", &GridState::N)
      .def_readwrite("h", &GridState::h)
      .def_readwrite("t", &GridState::t)
      .def_readwrite("rho", &GridState::rho)
      .def_readwrite("u", &GridState::u)
      .def_readwrite("u_ghost", &GridState::u_ghost)
      .def_readwrite("r", &GridState::r);

  py::class_<RhsVector>(m, "RhsVector")
      .def_readonly("drho", &RhsVector::drho)
      .def_readonly("du", &RhsVector::du);

  m.def("make_initial_state", &make_initial_state);
  m.def("recompute_radii", [](std::vector<double> rho,
                              const PhysicalParameters& p, double h) {
    return recompute_radii(rho, p, h);
  });
  m.def("close_boundary", &close_boundary);
  m.def("boundary_residual", &boundary_residual);
  m.def("radius_law_residual", &radius_law_residual);
  m.def("refresh_geometry", &refresh_geometry);
  m.def("assemble_rhs", &assemble_rhs);
  m.def("grid_energy", [](std::vector<double> rho, std::vector<double> u,
                          double h, double gamma) {
    return grid_energy(rho, u, h, gamma);
  });

  py::class_<StepController>(m, "StepController")
      .def(py::init<>())
      .def_readwrite("rel_tol", &StepController::rel_tol)
      .def_readwrite("abs_tol", &StepController::abs_tol)
      .def_readwrite("safety", &StepController::safety)
      .def_readwrite("dt_min", &StepController::dt_min)
      .def_readwrite("dt_max", &StepController::dt_max)
      .def_readwrite("cfl", &StepController::cfl);

  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("t_final", &RunConfig::t_final)
      .def_readwrite("snapshot_interval", &RunConfig::snapshot_interval)
      .def_readwrite("max_velocity", &RunConfig::max_velocity)
      .def_readwrite("sandwich_factor", &RunConfig::sandwich_factor)
      .def_readwrite("max_energy_growth", &RunConfig::max_energy_growth);

  py::enum_<TerminationReason>(m, "TerminationReason")
      .value("completed", TerminationReason::completed)
      .value("sandwich_violated", TerminationReason::sandwich_violated)
      .value("velocity_blowup", TerminationReason::velocity_blowup)
      .value("vacuum_collapse", TerminationReason::vacuum_collapse)
      .value("step_underflow", TerminationReason::step_underflow);

  m.def("stable_dt", &stable_dt);

  py::class_<StepResult>(m, "StepResult")
      .def_readonly("state", &StepResult::state)
      .def_readonly("dt_used", &StepResult::dt_used)
      .def_readonly("dt_next", &StepResult::dt_next)
      .def_readonly("error_ratio", &StepResult::error_ratio)
      .def_readonly("rejected", &StepResult::rejected);

  m.def("step", &step);

  py::class_<Snapshot>(m, "Snapshot")
      .def_static("of", &Snapshot::of)
      .def_readonly("t", &Snapshot::t)
      .def_readonly("N", &Snapshot::N)
      .def_readonly("h", &Snapshot::h)
      .def_readonly("rho", &Snapshot::rho)
      .def_readonly("u", &Snapshot::u)
      .def_readonly("u_ghost", &Snapshot::u_ghost)
      .def_readonly("r", &Snapshot::r);

  py::class_<RunResult>(m, "RunResult")
      .def_readonly("trajectory", &RunResult::trajectory)
      .def_readonly("reason", &RunResult::reason)
      .def_readonly("detail", &RunResult::detail)
      .def_readonly("steps", &RunResult::steps)
      .def_readonly("rejected", &RunResult::rejected)
      .def_readonly("max_boundary_residual", &RunResult::max_boundary_residual)
      .def_readonly("max_radius_residual", &RunResult::max_radius_residual);

  m.def("run", &run);

  py::class_<NodeValues>(m, "NodeValues")
      .def_readonly("rho", &NodeValues::rho)
      .def_readonly("u", &NodeValues::u)
      .def_readonly("r", &NodeValues::r);

  py::class_<EulerianSample>(m, "EulerianSample")
      .def_readonly("r", &EulerianSample::r)
      .def_readonly("rho", &EulerianSample::rho)
      .def_readonly("u", &EulerianSample::u);

  py::class_<MassReport>(m, "MassReport")
      .def_readonly("lagrangian", &MassReport::lagrangian)
      .def_readonly("eulerian", &MassReport::eulerian);

  m.def("piecewise_linear_eval", &piecewise_linear_eval);
  m.def("step_eval", &step_eval);
  m.def("eulerian_profile", &eulerian_profile);
  m.def("free_boundary", &free_boundary);
  m.def("total_mass", &total_mass);

  py::class_<EnergyBreakdown>(m, "EnergyBreakdown")
      .def_readonly("total", &EnergyBreakdown::total)
      .def_readonly("kinetic", &EnergyBreakdown::kinetic)
      .def_readonly("potential", &EnergyBreakdown::potential);

  py::class_<DissipationTerms>(m, "DissipationTerms")
      .def_readonly("flux", &DissipationTerms::flux)
      .def_readonly("shear", &DissipationTerms::shear)
      .def("total", &DissipationTerms::total);

  py::class_<EnergyCheck>(m, "EnergyCheck")
      .def_readonly("pass_", &EnergyCheck::pass)
      .def_readonly("worst_margin", &EnergyCheck::worst_margin)
      .def_readonly("energy", &EnergyCheck::energy)
      .def_readonly("kinetic", &EnergyCheck::kinetic)
      .def_readonly("potential", &EnergyCheck::potential)
      .def_readonly("dissipation_cum", &EnergyCheck::dissipation_cum)
      .def_readonly("margin", &EnergyCheck::margin);

  py::class_<SandwichCheck>(m, "SandwichCheck")
      .def_readonly("loose_pass", &SandwichCheck::loose_pass)
      .def_readonly("loose_first_violation", &SandwichCheck::loose_first_violation)
      .def_readonly("loose_cell", &SandwichCheck::loose_cell)
      .def_readonly("tight_pass", &SandwichCheck::tight_pass)
      .def_readonly("tight_first_violation", &SandwichCheck::tight_first_violation)
      .def_readonly("tight_cell", &SandwichCheck::tight_cell);

  py::class_<StressNorms>(m, "StressNorms")
      .def_readonly("visc_flux_sup", &StressNorms::visc_flux_sup)
      .def_readonly("mass_flux_sup", &StressNorms::mass_flux_sup)
      .def_readonly("tv_rho", &StressNorms::tv_rho)
      .def_readonly("du_lambda0", &StressNorms::du_lambda0);

  py::class_<SpeedCheck>(m, "SpeedCheck")
      .def_readonly("pass_", &SpeedCheck::pass)
      .def_readonly("worst_slack", &SpeedCheck::worst_slack)
      .def_readonly("sup_u", &SpeedCheck::sup_u);

  py::class_<DistanceSeries>(m, "DistanceSeries")
      .def(py::init<>())
      .def_readwrite("times", &DistanceSeries::times)
      .def_readwrite("D", &DistanceSeries::D);

  py::class_<GronwallFit>(m, "GronwallFit")
      .def_readonly("C_hat", &GronwallFit::C_hat)
      .def_readonly("identical_start", &GronwallFit::identical_start)
      .def_readonly("uniqueness_pass", &GronwallFit::uniqueness_pass);

  py::class_<EstimateReport>(m, "EstimateReport")
      .def_readonly("times", &EstimateReport::times)
      .def_readonly("energy", &EstimateReport::energy)
      .def_readonly("sandwich", &EstimateReport::sandwich)
      .def_readonly("moments", &EstimateReport::moments)
      .def_readonly("weighted_rho_norm", &EstimateReport::weighted_rho_norm)
      .def_readonly("visc_flux_sup", &EstimateReport::visc_flux_sup)
      .def_readonly("mass_flux_sup", &EstimateReport::mass_flux_sup)
      .def_readonly("tv_rho", &EstimateReport::tv_rho)
      .def_readonly("du_lambda0", &EstimateReport::du_lambda0)
      .def_readonly("ut_l2", &EstimateReport::ut_l2)
      .def_readonly("free_boundary_radius", &EstimateReport::free_boundary_radius)
      .def_readonly("eulerian_mass", &EstimateReport::eulerian_mass)
      .def_readonly("eulerian_mass_drift", &EstimateReport::eulerian_mass_drift)
      .def_readonly("lagrangian_mass", &EstimateReport::lagrangian_mass)
      .def_readonly("speed", &EstimateReport::speed)
      .def_readonly("rdot_drift_max", &EstimateReport::rdot_drift_max);

  m.def("discrete_energy", &discrete_energy);
  m.def("dissipation_terms", &dissipation_terms);
  m.def("energy_inequality_check", &energy_inequality_check);
  m.def("density_sandwich_check", &density_sandwich_check);
  m.def("velocity_moment_norms", &velocity_moment_norms);
  m.def("weighted_rho_derivative_norm", &weighted_rho_derivative_norm);
  m.def("stress_sup_norms", &stress_sup_norms);
  m.def("ut_norm_fd", &ut_norm_fd);
  m.def("rdot_drift", &rdot_drift);
  m.def("free_boundary_speed_check", &free_boundary_speed_check,
        py::arg("trajectory"), py::arg("tol") = 1e-8);
  m.def("weighted_distance",
        py::overload_cast<const Snapshot&, const Snapshot&, double>(
            &weighted_distance));
  m.def("weighted_distance",
        py::overload_cast<const Snapshot&, const Snapshot&, double, double,
                          double>(&weighted_distance));
  m.def("gronwall_fit", &gronwall_fit, py::arg("series"),
        py::arg("tol") = 1e-10);
  m.def("trend_ratio", &trend_ratio);
  m.def("evaluate_estimates", &evaluate_estimates);

  py::enum_<RunMode>(m, "RunMode")
      .value("run", RunMode::run)
      .value("converge", RunMode::converge)
      .value("perturb", RunMode::perturb)
      .value("audit", RunMode::audit);

  py::class_<RunSpec>(m, "RunSpec")
      .def_readwrite("mode", &RunSpec::mode)
      .def_readwrite("params", &RunSpec::params)
      .def_readwrite("init", &RunSpec::init)
      .def_readwrite("force", &RunSpec::force)
      .def_readwrite("controller", &RunSpec::controller)
      .def_readwrite("run_config", &RunSpec::run_config)
      .def_readwrite("N", &RunSpec::N)
      .def_readwrite("refinements", &RunSpec::refinements)
      .def_readwrite("epsilon", &RunSpec::epsilon)
      .def_readwrite("seed", &RunSpec::seed)
      .def_readwrite("out_dir", &RunSpec::out_dir)
      .def_readwrite("audit_csv", &RunSpec::audit_csv)
      .def_readwrite("quiet", &RunSpec::quiet)
      .def_readonly("validation", &RunSpec::validation)
      .def_readonly("warnings", &RunSpec::warnings);

  m.def("parse_config", &parse_config, py::arg("text"), py::arg("mode"),
        py::arg("out_dir") = ".", py::arg("quiet") = false);
  m.def("config_template", &config_template);
  m.def("dispatch", &dispatch);

  m.def("format_double", &format_double);
  m.def("write_snapshots_csv", &write_snapshots_csv);
  m.def("read_snapshots_csv", &read_snapshots_csv);
}
