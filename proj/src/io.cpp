#include "vacns/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace vacns {

std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

namespace {

std::string row_col(size_t row, const std::string& col) {
  return "row " + std::to_string(row) + ", column " + col;
}

double parse_field(const std::string& field, size_t row,
                   const std::string& col) {
  const char* b = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(b, &end);
  if (field.empty() || end == b || *end != '\0')
    throw SchemaError(row_col(row, col) + ": expected a number, got '" +
                      field + "'");
  return v;
}

long parse_index(const std::string& field, size_t row,
                 const std::string& col) {
  const char* b = field.c_str();
  char* end = nullptr;
  const long v = std::strtol(b, &end, 10);
  if (field.empty() || end == b || *end != '\0')
    throw SchemaError(row_col(row, col) + ": expected an integer, got '" +
                      field + "'");
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_snapshots_csv(const std::string& path,
                         const std::vector<Snapshot>& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot open '" + path + "' for writing");
  out << "t,j,x,rho,u,r\n";
  for (const Snapshot& s : traj) {
    const std::string t = format_double(s.t);
    for (int j = 0; j <= s.N; ++j) {
      out << t << ',' << j << ',' << format_double(j * s.h) << ','
          << format_double(s.rho[j]) << ',' << format_double(s.u[j]) << ','
          << format_double(s.r[j]) << '\n';
    }
    out << t << ',' << s.N + 1 << ",,," << format_double(s.u_ghost) << ','
        << format_double(s.r[s.N + 1]) << '\n';
  }
  if (!out.flush()) throw SchemaError("write to '" + path + "' failed");
}

std::vector<Snapshot> read_snapshots_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw SchemaError("empty file: expected header t,j,x,rho,u,r");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t,j,x,rho,u,r")
    throw SchemaError("row 1: expected header t,j,x,rho,u,r, got '" + line +
                      "'");

  std::vector<Snapshot> out;
  Snapshot cur;
  std::vector<double> xs;
  bool in_block = false;
  long expected_j = 0;
  size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 6)
      throw SchemaError("row " + std::to_string(row) + ": expected 6 fields, got " +
                        std::to_string(f.size()));
    const double t = parse_field(f[0], row, "t");
    const long j = parse_index(f[1], row, "j");
    if (!in_block) {
      if (j != 0)
        throw SchemaError(row_col(row, "j") +
                          ": expected j = 0 starting a time block, got " +
                          std::to_string(j));
      cur = Snapshot{};
      xs.clear();
      cur.t = t;
      in_block = true;
      expected_j = 0;
    } else if (t != cur.t) {
      throw SchemaError(row_col(row, "t") + ": time changes mid-block");
    }
    if (j != expected_j)
      throw SchemaError(row_col(row, "j") + ": expected " +
                        std::to_string(expected_j) + ", got " +
                        std::to_string(j));

    const bool ghost = f[2].empty() && f[3].empty();
    if (ghost) {
      if (j < 3)
        throw SchemaError(row_col(row, "j") +
                          ": ghost row needs at least 2 cells before it");
      cur.u_ghost = parse_field(f[4], row, "u");
      const double r = parse_field(f[5], row, "r");
      if (!cur.r.empty() && r <= cur.r.back())
        throw SchemaError(row_col(row, "r") + ": radii must increase strictly");
      cur.r.push_back(r);
      cur.N = int(j) - 1;
      cur.h = 1.0 / cur.N;
      for (size_t k = 0; k < xs.size(); ++k) {
        if (std::abs(xs[k] - double(k) / cur.N) > 1e-9)
          throw SchemaError("time block ending at row " + std::to_string(row) +
                            ", column x: node " + std::to_string(k) +
                            " must sit at j/N");
      }
      out.push_back(cur);
      in_block = false;
      expected_j = 0;
      continue;
    }
    if (f[2].empty() || f[3].empty())
      throw SchemaError(row_col(row, f[2].empty() ? "x" : "rho") +
                        ": empty field");
    xs.push_back(parse_field(f[2], row, "x"));
    const double rho = parse_field(f[3], row, "rho");
    if (rho <= 0.0)
      throw SchemaError("row " + std::to_string(row) +
                        ": vacuum collapse in input (rho = " + f[3] + ")");
    cur.rho.push_back(rho);
    cur.u.push_back(parse_field(f[4], row, "u"));
    const double r = parse_field(f[5], row, "r");
    if (!cur.r.empty() && r <= cur.r.back())
      throw SchemaError(row_col(row, "r") + ": radii must increase strictly");
    cur.r.push_back(r);
    ++expected_j;
  }
  if (in_block)
    throw SchemaError("unexpected end of file: time block missing its ghost row");
  if (out.empty()) throw SchemaError("no data rows");
  return out;
}

namespace {

nlohmann::ordered_json series_json(const std::vector<double>& v) {
  return nlohmann::ordered_json(v);
}

double safe_trend(const std::vector<double>& times,
                  const std::vector<double>& values) {
  if (times.size() < 2 || values.size() != times.size()) return 1.0;
  return trend_ratio(times, values);
}

}  // namespace

nlohmann::ordered_json spec_to_json(const RunSpec& spec) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(spec.mode);
  j["physics"] = {{"n", spec.params.n},         {"a", spec.params.a},
                  {"gamma", spec.params.gamma}, {"theta", spec.params.theta},
                  {"c1", spec.params.c1},       {"c2", spec.params.c2},
                  {"beta", spec.params.beta()}};
  j["initial"] = {{"rho0", spec.init.rho0 ? spec.init.rho0->describe() : ""},
                  {"u0", spec.init.u0 ? spec.init.u0->describe() : ""},
                  {"alpha", spec.init.alpha},
                  {"A", spec.init.A},
                  {"B", spec.init.B},
                  {"alpha0", spec.init.alpha0},
                  {"lambda0", spec.init.lambda0},
                  {"m", spec.init.m},
                  {"epsilon", spec.epsilon},
                  {"seed", spec.seed}};
  j["force"] = {{"kind", spec.force.kind}};
  j["mesh"] = {{"N", spec.N}, {"refinements", spec.refinements}};
  j["integrator"] = {{"rel_tol", spec.controller.rel_tol},
                     {"abs_tol", spec.controller.abs_tol},
                     {"safety", spec.controller.safety},
                     {"dt_min", spec.controller.dt_min},
                     {"dt_max", spec.controller.dt_max},
                     {"cfl", spec.controller.cfl},
                     {"t_final", spec.run_config.t_final},
                     {"max_velocity", spec.run_config.max_velocity},
                     {"sandwich_factor", spec.run_config.sandwich_factor},
                     {"max_energy_growth", spec.run_config.max_energy_growth}};
  j["output"] = {{"out_dir", spec.out_dir},
                 {"snapshot_interval", spec.run_config.snapshot_interval},
                 {"audit_csv", spec.audit_csv}};
  j["warnings"] = spec.warnings;
  return j;
}

nlohmann::ordered_json validation_to_json(const ValidationReport& report) {
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const Check& c : report.checks) {
    checks.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"lhs", c.lhs},
                      {"rhs", c.rhs},
                      {"note", c.note}});
  }
  return {{"ok", report.ok()}, {"checks", checks}};
}

nlohmann::ordered_json estimates_to_json(const EstimateReport& report) {
  nlohmann::ordered_json verdicts;
  verdicts["energy_inequality"] = report.energy.pass ? "pass" : "fail";
  verdicts["energy_worst_margin"] = report.energy.worst_margin;
  verdicts["sandwich_loose"] = {
      {"pass", report.sandwich.loose_pass},
      {"first_violation", report.sandwich.loose_first_violation},
      {"cell", report.sandwich.loose_cell}};
  verdicts["sandwich_tight"] = {
      {"pass", report.sandwich.tight_pass},
      {"first_violation", report.sandwich.tight_first_violation},
      {"cell", report.sandwich.tight_cell}};
  verdicts["lagrangian_mass"] = report.lagrangian_mass;
  verdicts["eulerian_mass_drift"] = report.eulerian_mass_drift;
  verdicts["finite_speed"] = {{"pass", report.speed.pass},
                              {"worst_slack", report.speed.worst_slack},
                              {"sup_u", report.speed.sup_u}};
  verdicts["rdot_drift_max"] = report.rdot_drift_max;

  nlohmann::ordered_json trends;
  nlohmann::ordered_json moment_trends = nlohmann::ordered_json::array();
  for (const auto& series : report.moments)
    moment_trends.push_back(safe_trend(report.times, series));
  trends["moments"] = moment_trends;
  trends["weighted_rho_norm"] = safe_trend(report.times, report.weighted_rho_norm);
  trends["visc_flux_sup"] = safe_trend(report.times, report.visc_flux_sup);
  trends["mass_flux_sup"] = safe_trend(report.times, report.mass_flux_sup);
  trends["tv_rho"] = safe_trend(report.times, report.tv_rho);
  trends["du_lambda0"] = safe_trend(report.times, report.du_lambda0);
  verdicts["trend_ratios"] = trends;

  nlohmann::ordered_json series;
  series["times"] = series_json(report.times);
  series["energy"] = series_json(report.energy.energy);
  series["kinetic"] = series_json(report.energy.kinetic);
  series["potential"] = series_json(report.energy.potential);
  series["dissipation_cum"] = series_json(report.energy.dissipation_cum);
  series["energy_margin"] = series_json(report.energy.margin);
  nlohmann::ordered_json moments = nlohmann::ordered_json::array();
  for (const auto& m : report.moments) moments.push_back(series_json(m));
  series["moments"] = moments;
  series["weighted_rho_norm"] = series_json(report.weighted_rho_norm);
  series["visc_flux_sup"] = series_json(report.visc_flux_sup);
  series["mass_flux_sup"] = series_json(report.mass_flux_sup);
  series["tv_rho"] = series_json(report.tv_rho);
  series["du_lambda0"] = series_json(report.du_lambda0);
  series["ut_l2"] = series_json(report.ut_l2);
  series["free_boundary_radius"] = series_json(report.free_boundary_radius);
  series["eulerian_mass"] = series_json(report.eulerian_mass);

  return {{"verdicts", verdicts}, {"series", series}};
}

nlohmann::ordered_json termination_to_json(const RunResult& result) {
  return {{"reason", to_string(result.reason)},
          {"detail", result.detail},
          {"steps", result.steps},
          {"rejected", result.rejected},
          {"snapshots", result.trajectory.size()},
          {"max_boundary_residual", result.max_boundary_residual},
          {"max_radius_residual", result.max_radius_residual}};
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out.flush()) throw SchemaError("write to '" + path + "' failed");
}

void write_distance_csv(const std::string& path,
                        const DistanceSeries& series) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot open '" + path + "' for writing");
  out << "t,D\n";
  for (size_t k = 0; k < series.times.size(); ++k)
    out << format_double(series.times[k]) << ','
        << format_double(series.D[k]) << '\n';
  if (!out.flush()) throw SchemaError("write to '" + path + "' failed");
}

}  // namespace vacns
