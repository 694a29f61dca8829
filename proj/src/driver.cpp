#include "vacns/driver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <vector>

#include "vacns/estimates.hpp"
#include "vacns/integrator.hpp"
#include "vacns/io.hpp"
#include "vacns/scheme.hpp"

namespace vacns {

namespace {

void note(const RunSpec& spec, const std::string& msg) {
  if (!spec.quiet) std::cout << msg << "\n";
}

void print_warnings(const RunSpec& spec) {
  if (spec.quiet) return;
  for (const std::string& w : spec.warnings) std::cout << "warning: " << w << "\n";
}

std::string out_path(const RunSpec& spec, const std::string& name) {
  return (std::filesystem::path(spec.out_dir) / name).string();
}

nlohmann::ordered_json report_base(const RunSpec& spec) {
  nlohmann::ordered_json report;
  report["params"] = spec_to_json(spec);
  return report;
}

void attach_estimates(nlohmann::ordered_json& report, const RunSpec& spec,
                      const EstimateReport& est) {
  const nlohmann::ordered_json estj = estimates_to_json(est);
  report["verdicts"] = estj["verdicts"];
  report["verdicts"]["assumptions"] = validation_to_json(spec.validation);
  report["series"] = estj["series"];
}

nlohmann::ordered_json run_entry(int N, const RunResult& r) {
  return {{"N", N},
          {"reason", to_string(r.reason)},
          {"detail", r.detail},
          {"steps", r.steps},
          {"rejected", r.rejected}};
}

}  // namespace

int cmd_run(const RunSpec& spec) {
  print_warnings(spec);
  std::filesystem::create_directories(spec.out_dir);
  const GridState s0 = make_initial_state(spec.params, spec.init, spec.N);
  const RunResult result =
      run(s0, spec.run_config, spec.controller, spec.force, spec.params);
  write_snapshots_csv(out_path(spec, "snapshots.csv"), result.trajectory);

  const EstimateReport est =
      evaluate_estimates(result.trajectory, spec.params, spec.init, spec.force);
  nlohmann::ordered_json report = report_base(spec);
  attach_estimates(report, spec, est);
  report["termination"] = termination_to_json(result);
  write_json(out_path(spec, "report.json"), report);

  note(spec, "run: " + to_string(result.reason) + " at t = " +
                 format_double(result.trajectory.back().t) + " after " +
                 std::to_string(result.steps) + " steps");
  return result.reason == TerminationReason::completed ? kExitOk : kExitGuard;
}

int cmd_converge(const RunSpec& spec) {
  print_warnings(spec);
  std::filesystem::create_directories(spec.out_dir);

  struct MeshRun {
    int N = 0;
    RunResult result;
  };
  std::vector<MeshRun> runs;
  bool all_completed = true;
  for (int N : spec.refinements) {
    const GridState s0 = make_initial_state(spec.params, spec.init, N);
    runs.push_back(
        {N, run(s0, spec.run_config, spec.controller, spec.force, spec.params)});
    all_completed &=
        runs.back().result.reason == TerminationReason::completed;
  }

  // Pairwise L2 differences of the reconstructed fields at 512 shared mass
  // points, cell midpoints of the finest common refinement.
  constexpr int kSamples = 512;
  const auto l2_diff = [&](const Snapshot& a, const Snapshot& b) {
    std::array<double, 3> acc = {0.0, 0.0, 0.0};
    for (int s = 0; s < kSamples; ++s) {
      const double x = (s + 0.5) / kSamples;
      const NodeValues va = piecewise_linear_eval(a, spec.params, x);
      const NodeValues vb = piecewise_linear_eval(b, spec.params, x);
      acc[0] += (va.rho - vb.rho) * (va.rho - vb.rho);
      acc[1] += (va.u - vb.u) * (va.u - vb.u);
      acc[2] += (va.r - vb.r) * (va.r - vb.r);
    }
    for (double& v : acc) v = std::sqrt(v / kSamples);
    return acc;
  };

  nlohmann::ordered_json errors = nlohmann::ordered_json::array();
  std::vector<std::array<double, 3>> e;
  for (size_t k = 0; k + 1 < runs.size(); ++k) {
    e.push_back(l2_diff(runs[k].result.trajectory.back(),
                        runs[k + 1].result.trajectory.back()));
    errors.push_back({{"coarse", runs[k].N},
                      {"fine", runs[k + 1].N},
                      {"rho", e.back()[0]},
                      {"u", e.back()[1]},
                      {"r", e.back()[2]}});
  }
  nlohmann::ordered_json orders = nlohmann::ordered_json::array();
  bool monotone = true;
  for (size_t k = 0; k + 1 < e.size(); ++k) {
    nlohmann::ordered_json o;
    o["pairs"] = std::to_string(runs[k].N) + "/" + std::to_string(runs[k + 1].N) +
                 " vs " + std::to_string(runs[k + 1].N) + "/" +
                 std::to_string(runs[k + 2].N);
    const char* field[3] = {"rho", "u", "r"};
    for (int f = 0; f < 3; ++f) {
      monotone &= e[k + 1][f] < e[k][f];
      o[field[f]] = std::log2(e[k][f] / e[k + 1][f]);
    }
    orders.push_back(o);
  }

  nlohmann::ordered_json report = report_base(spec);
  report["verdicts"] = {{"all_runs_completed", all_completed},
                        {"errors_decrease_monotonically", monotone},
                        {"assumptions", validation_to_json(spec.validation)}};
  report["series"] = {{"errors", errors}, {"orders", orders}};
  nlohmann::ordered_json term;
  term["reason"] = all_completed ? "completed" : "sub-run terminated early";
  nlohmann::ordered_json subruns = nlohmann::ordered_json::array();
  for (const MeshRun& mr : runs) subruns.push_back(run_entry(mr.N, mr.result));
  term["runs"] = subruns;
  report["termination"] = term;
  write_json(out_path(spec, "report.json"), report);

  if (!spec.quiet) {
    for (size_t k = 0; k < e.size(); ++k)
      std::cout << "converge: e(" << runs[k].N << "," << runs[k + 1].N
                << ") rho=" << format_double(e[k][0])
                << " u=" << format_double(e[k][1])
                << " r=" << format_double(e[k][2]) << "\n";
  }
  if (!all_completed) return kExitGuard;
  return monotone ? kExitOk : kExitGuard;
}

int cmd_perturb(const RunSpec& spec) {
  print_warnings(spec);
  std::filesystem::create_directories(spec.out_dir);

  // Both twins pass through the same perturbation wrappers so that eps = 0
  // reproduces the base run bit for bit.
  InitialData base = spec.init;
  base.rho0 = bump_perturbed(spec.init.rho0, 0.0);
  base.u0 = wave_perturbed(spec.init.u0, 0.0);
  InitialData shifted = spec.init;
  shifted.rho0 = bump_perturbed(spec.init.rho0, spec.epsilon);
  shifted.u0 = wave_perturbed(spec.init.u0, spec.epsilon);

  const GridState b0 = make_initial_state(spec.params, base, spec.N);
  const GridState p0 = make_initial_state(spec.params, shifted, spec.N);
  const RunResult br =
      run(b0, spec.run_config, spec.controller, spec.force, spec.params);
  const RunResult pr =
      run(p0, spec.run_config, spec.controller, spec.force, spec.params);
  const bool completed = br.reason == TerminationReason::completed &&
                         pr.reason == TerminationReason::completed;

  DistanceSeries series;
  const size_t K = std::min(br.trajectory.size(), pr.trajectory.size());
  for (size_t k = 0; k < K; ++k) {
    series.times.push_back(br.trajectory[k].t);
    series.D.push_back(weighted_distance(br.trajectory[k], pr.trajectory[k],
                                         spec.params.theta));
  }
  write_distance_csv(out_path(spec, "distance.csv"), series);

  const GronwallFit fit = gronwall_fit(series);
  bool bound_pass = true;
  if (!fit.identical_start) {
    for (size_t k = 0; k < K; ++k) {
      const double bound =
          2.0 * std::exp(fit.C_hat * (series.times[k] - series.times[0])) *
          series.D[0];
      bound_pass &= series.D[k] <= bound;
    }
  }

  nlohmann::ordered_json report = report_base(spec);
  report["verdicts"] = {
      {"epsilon", spec.epsilon},
      {"seed", spec.seed},
      {"D0", series.D.empty() ? 0.0 : series.D[0]},
      {"C_hat", fit.C_hat},
      {"identical_start", fit.identical_start},
      {"uniqueness_pass", fit.uniqueness_pass},
      {"growth_bound_pass", bound_pass},
      {"assumptions", validation_to_json(spec.validation)}};
  report["series"] = {{"times", series.times}, {"D", series.D}};
  nlohmann::ordered_json term;
  term["reason"] = completed ? "completed" : "sub-run terminated early";
  term["runs"] = {run_entry(spec.N, br), run_entry(spec.N, pr)};
  report["termination"] = term;
  write_json(out_path(spec, "report.json"), report);

  note(spec, "perturb: eps = " + format_double(spec.epsilon) + ", C_hat = " +
                 format_double(fit.C_hat));
  if (!completed) return kExitGuard;
  if (fit.identical_start && !fit.uniqueness_pass) return kExitGuard;
  return kExitOk;
}

int cmd_audit(const RunSpec& spec) {
  print_warnings(spec);
  std::filesystem::create_directories(spec.out_dir);
  const std::string source =
      spec.audit_csv.empty() ? out_path(spec, "snapshots.csv") : spec.audit_csv;
  const std::vector<Snapshot> traj = read_snapshots_csv(source);

  const EstimateReport est =
      evaluate_estimates(traj, spec.params, spec.init, spec.force);
  nlohmann::ordered_json report = report_base(spec);
  attach_estimates(report, spec, est);
  report["termination"] = {{"reason", "audit"},
                           {"detail", source},
                           {"snapshots", traj.size()}};
  write_json(out_path(spec, "report.json"), report);

  note(spec, "audit: " + std::to_string(traj.size()) + " snapshots from " +
                 source);
  return kExitOk;
}

int dispatch(const RunSpec& spec) {
  switch (spec.mode) {
    case RunMode::run: return cmd_run(spec);
    case RunMode::converge: return cmd_converge(spec);
    case RunMode::perturb: return cmd_perturb(spec);
    case RunMode::audit: return cmd_audit(spec);
  }
  return kExitUsage;
}

}  // namespace vacns
