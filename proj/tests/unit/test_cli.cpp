#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "vacns/driver.hpp"
#include "vacns/io.hpp"

using namespace vacns;
namespace fs = std::filesystem;

namespace {

template <class E, class F>
std::string thrown_message(F&& f) {
  try {
    f();
  } catch (const E& e) {
    return e.what();
  }
  return "<no exception>";
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

std::string scratch(const std::string& name) {
  const fs::path dir = fs::path("cli_scratch") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

nlohmann::json parse_json_file(const std::string& path) {
  return nlohmann::json::parse(slurp(path));
}

constexpr const char* kGoodCsv =
    "t,j,x,rho,u,r\n"
    "0,0,0,1,0,1\n"
    "0,1,0.5,1,0.25,1.4142135623730951\n"
    "0,2,1,1,0.5,1.7320508075688772\n"
    "0,3,,,0.7,2\n";

}  // namespace

TEST_CASE("mode names round-trip") {
  for (RunMode m : {RunMode::run, RunMode::converge, RunMode::perturb,
                    RunMode::audit})
    CHECK(run_mode_from_string(to_string(m)) == m);
  CHECK(contains(thrown_message<ConfigError>(
                     [] { return run_mode_from_string("simulate"); }),
                 "expected run, converge, perturb or audit"));
}

TEST_CASE("empty config text yields the documented defaults") {
  const RunSpec spec = parse_config("", RunMode::run, "out", false);
  CHECK(spec.N == 64);
  CHECK(spec.params.n == 2);
  CHECK(spec.params.gamma == 2.0);
  CHECK(spec.init.alpha == 0.4);
  CHECK(spec.init.alpha0 == doctest::Approx(0.6));    // window midpoint
  CHECK(spec.init.lambda0 == doctest::Approx(1.125)); // window midpoint
  CHECK(spec.init.m == 3);
  CHECK(spec.run_config.t_final == 1.0);
  CHECK(spec.out_dir == "out");
  CHECK(spec.validation.ok());
  CHECK(spec.warnings.empty());
  CHECK(spec.init.rho0);
  CHECK(spec.init.u0);
}

TEST_CASE("the template parses in every mode and matches the defaults") {
  const std::string text = config_template();
  for (RunMode m : {RunMode::run, RunMode::converge, RunMode::perturb,
                    RunMode::audit}) {
    const RunSpec spec = parse_config(text, m, ".", true);
    CHECK(spec.N == 64);
    CHECK(spec.refinements == std::vector<int>{32, 64, 128});
    CHECK(spec.epsilon == 0.0);
    CHECK(spec.seed == 0);
    CHECK(spec.validation.ok());
  }
}

TEST_CASE("config rejections name the offending location") {
  auto parse = [](const std::string& text, RunMode mode = RunMode::run) {
    return parse_config(text, mode, ".", true);
  };

  CHECK(contains(
      thrown_message<ConfigError>([&] { parse("[physics]\ngamma = 0.9"); }),
      "gamma > 1"));
  CHECK(contains(
      thrown_message<ConfigError>([&] { parse("[physics]\nzz = 1"); }),
      "unknown key"));
  CHECK(contains(
      thrown_message<ConfigError>([&] { parse("[physics]\nzz = 1"); }),
      "line 2"));
  CHECK(contains(
      thrown_message<ConfigError>([&] { parse("[windtunnel]\nx = 1"); }),
      "unknown section [windtunnel]"));
  CHECK(contains(thrown_message<ConfigError>([&] { parse("n = 2"); }),
                 "before any section header"));
  CHECK(contains(
      thrown_message<ConfigError>([&] { parse("[physics]\nn is 2"); }),
      "expected key = value"));
  CHECK(contains(
      thrown_message<ConfigError>([&] { parse("[physics]\na = abc"); }),
      "expected a number"));
  CHECK(contains(
      thrown_message<ConfigError>(
          [&] { parse("[physics]\nc1 = 1\nc2 = -2"); }),
      "2*c1 + n*c2 > 0"));
  CHECK(contains(thrown_message<ConfigError>([&] {
                   parse("[integrator]\ndt_min = 1e-2\ndt_max = 1e-6");
                 }),
                 "dt_max >= dt_min"));
}

TEST_CASE("profile grammar failures carry the key location") {
  auto parse = [](const std::string& text) {
    return parse_config(text, RunMode::run, ".", true);
  };
  const std::string two_args =
      thrown_message<ConfigError>([&] { parse("[initial]\nrho0 = power 1.0"); });
  CHECK(contains(two_args, "[initial] rho0"));
  CHECK(contains(two_args, "power takes two arguments"));
  CHECK(contains(
      thrown_message<ConfigError>(
          [&] { parse("[initial]\nu0 = spline 1 2"); }),
      "unknown profile kind 'spline'"));
  CHECK(contains(
      thrown_message<ConfigError>(
          [&] { parse("[initial]\nrho0 = table 0:1 0.5:2"); }),
      "[initial] rho0"));
  CHECK(contains(
      thrown_message<ConfigError>(
          [&] { parse("[initial]\nrho0 = table 0:1 x:2"); }),
      "expected a number"));
}

TEST_CASE("mode-specific requirements") {
  CHECK(contains(thrown_message<ConfigError>([] {
                   parse_config("", RunMode::converge, ".", true);
                 }),
                 "converge mode needs [mesh] refinements"));
  CHECK(contains(thrown_message<ConfigError>([] {
                   parse_config("", RunMode::perturb, ".", true);
                 }),
                 "perturb mode needs [initial] epsilon"));
  CHECK(contains(thrown_message<ConfigError>([] {
                   parse_config("[initial]\nepsilon = 1e-3", RunMode::perturb,
                                ".", true);
                 }),
                 "perturb mode needs [initial] seed"));
  CHECK_NOTHROW(parse_config("[initial]\nepsilon = 1e-3\nseed = 7",
                             RunMode::perturb, ".", true));
}

TEST_CASE("window violations warn in run mode and reject strict modes") {
  const std::string text = "[initial]\nalpha = 0.6\n[mesh]\nrefinements = 4 8";
  const RunSpec spec = parse_config(text, RunMode::run, ".", true);
  CHECK_FALSE(spec.validation.ok());
  REQUIRE_FALSE(spec.warnings.empty());
  CHECK(contains(spec.warnings.front(), "assumption not satisfied"));
  CHECK(contains(thrown_message<ConfigError>([&] {
                   parse_config(text, RunMode::converge, ".", true);
                 }),
                 "assumption not satisfied"));
}

TEST_CASE("doubles print in shortest round-trip form") {
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.1) == "0.1");
  for (double v : {0.0, 1.0, 0.1, 1.0 / 3.0, 1e-300, 1e300, -2.5e-7,
                   123456789.123, 2.0000000000000004}) {
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("snapshot CSV round-trips bitwise") {
  const std::string dir = scratch("roundtrip");
  const PhysicalParameters p;
  InitialData data;
  data.rho0 = power_profile(1.0, 0.4);
  data.u0 = polynomial_profile({0.0, 0.1});
  RunConfig cfg;
  cfg.t_final = 0.01;
  cfg.snapshot_interval = 0.005;
  const RunResult res = run(make_initial_state(p, data, 8), cfg,
                            StepController{}, ForceModel::zero(), p);
  REQUIRE(res.reason == TerminationReason::completed);

  const std::string first = dir + "/snap.csv";
  const std::string second = dir + "/snap2.csv";
  write_snapshots_csv(first, res.trajectory);
  const std::vector<Snapshot> back = read_snapshots_csv(first);
  REQUIRE(back.size() == res.trajectory.size());
  for (size_t k = 0; k < back.size(); ++k) {
    CHECK(back[k].t == res.trajectory[k].t);
    CHECK(back[k].N == res.trajectory[k].N);
    CHECK(back[k].h == res.trajectory[k].h);
    CHECK(back[k].rho == res.trajectory[k].rho);
    CHECK(back[k].u == res.trajectory[k].u);
    CHECK(back[k].r == res.trajectory[k].r);
    CHECK(back[k].u_ghost == res.trajectory[k].u_ghost);
  }
  write_snapshots_csv(second, back);
  CHECK(slurp(first) == slurp(second));
}

TEST_CASE("snapshot CSV schema violations") {
  const std::string dir = scratch("schema");
  auto reject = [&](const std::string& name, const std::string& body) {
    const std::string path = dir + "/" + name + ".csv";
    write_text(path, body);
    return thrown_message<SchemaError>([&] { read_snapshots_csv(path); });
  };

  CHECK(contains(reject("ok_then_empty", ""), "empty file"));
  CHECK(contains(reject("header_only", "t,j,x,rho,u,r\n"), "no data rows"));
  CHECK(contains(reject("bad_header", "time,j,x,rho,u,r\n0,0,0,1,0,1\n"),
                 "expected header"));
  CHECK(contains(reject("bad_start",
                        "t,j,x,rho,u,r\n"
                        "0,1,0.5,1,0,1.5\n"),
                 "expected j = 0 starting a time block"));
  CHECK(contains(reject("bad_order",
                        "t,j,x,rho,u,r\n"
                        "0,0,0,1,0,1\n"
                        "0,2,1,1,0,1.7\n"),
                 "expected 1, got 2"));
  CHECK(contains(reject("five_fields",
                        "t,j,x,rho,u,r\n"
                        "0,0,0,1,0\n"),
                 "expected 6 fields, got 5"));
  CHECK(contains(reject("vacuum",
                        "t,j,x,rho,u,r\n"
                        "0,0,0,1,0,1\n"
                        "0,1,0.5,0,0,1.5\n"),
                 "vacuum collapse in input"));
  CHECK(contains(reject("shrinking",
                        "t,j,x,rho,u,r\n"
                        "0,0,0,1,0,1\n"
                        "0,1,0.5,1,0,1\n"),
                 "radii must increase strictly"));
  CHECK(contains(reject("time_jump",
                        "t,j,x,rho,u,r\n"
                        "0,0,0,1,0,1\n"
                        "0.5,1,0.5,1,0,1.5\n"),
                 "time changes mid-block"));
  CHECK(contains(reject("early_ghost",
                        "t,j,x,rho,u,r\n"
                        "0,0,0,1,0,1\n"
                        "0,1,0.5,1,0,1.5\n"
                        "0,2,,,0.1,2\n"),
                 "ghost row needs at least 2 cells"));
  CHECK(contains(reject("missing_ghost",
                        "t,j,x,rho,u,r\n"
                        "0,0,0,1,0,1\n"
                        "0,1,0.5,1,0,1.5\n"
                        "0,2,1,1,0,1.8\n"),
                 "missing its ghost row"));
  CHECK(contains(reject("shifted_x",
                        "t,j,x,rho,u,r\n"
                        "0,0,0,1,0,1\n"
                        "0,1,0.4,1,0,1.4\n"
                        "0,2,1,1,0,1.7\n"
                        "0,3,,,0.1,2\n"),
                 "must sit at j/N"));

  const std::string good = dir + "/good.csv";
  write_text(good, kGoodCsv);
  const std::vector<Snapshot> traj = read_snapshots_csv(good);
  REQUIRE(traj.size() == 1);
  CHECK(traj[0].N == 2);
  CHECK(traj[0].h == 0.5);
  CHECK(traj[0].u_ghost == 0.7);
  CHECK(traj[0].r.size() == 4);
}

TEST_CASE("run command writes its artifacts and succeeds") {
  const std::string dir = scratch("cmd_run");
  const RunSpec spec = parse_config(
      "[mesh]\nN = 8\n[integrator]\nt_final = 0.02\n"
      "[output]\nsnapshot_interval = 0.01\n",
      RunMode::run, dir, true);
  CHECK(cmd_run(spec) == kExitOk);
  REQUIRE(fs::exists(dir + "/snapshots.csv"));
  REQUIRE(fs::exists(dir + "/report.json"));

  const nlohmann::json report = parse_json_file(dir + "/report.json");
  CHECK(report["params"]["mode"] == "run");
  CHECK(report["params"]["physics"]["beta"] == 1.0);
  CHECK(report["termination"]["reason"] == "completed");
  CHECK(report["verdicts"]["energy_inequality"] == "pass");
  CHECK(report["verdicts"]["lagrangian_mass"] == 1.0);
  CHECK(report["verdicts"]["assumptions"]["ok"] == true);
  CHECK(report["series"]["times"].size() == 3);
}

TEST_CASE("audit reproduces the run report") {
  const std::string dir = scratch("cmd_audit");
  const std::string body =
      "[mesh]\nN = 8\n[integrator]\nt_final = 0.02\n"
      "[output]\nsnapshot_interval = 0.01\n";
  REQUIRE(cmd_run(parse_config(body, RunMode::run, dir, true)) == kExitOk);
  const nlohmann::json run_report = parse_json_file(dir + "/report.json");

  REQUIRE(cmd_audit(parse_config(body, RunMode::audit, dir, true)) == kExitOk);
  const nlohmann::json audit_report = parse_json_file(dir + "/report.json");

  CHECK(audit_report["params"]["mode"] == "audit");
  CHECK(audit_report["termination"]["reason"] == "audit");
  CHECK(audit_report["termination"]["snapshots"] == 3);
  // the CSV round-trip is exact, so the recomputed estimates match bitwise
  CHECK(audit_report["series"] == run_report["series"]);
  CHECK(audit_report["verdicts"] == run_report["verdicts"]);
}

TEST_CASE("audit honors an explicit input path") {
  const std::string dir = scratch("cmd_audit_path");
  const std::string csv = dir + "/external.csv";
  write_text(csv, kGoodCsv);
  const RunSpec spec = parse_config("[output]\naudit_csv = " + csv + "\n",
                                    RunMode::audit, dir, true);
  CHECK(cmd_audit(spec) == kExitOk);
  const nlohmann::json report = parse_json_file(dir + "/report.json");
  CHECK(report["termination"]["detail"] == csv);
  CHECK(report["termination"]["snapshots"] == 1);
}

TEST_CASE("perturb at zero amplitude asserts determinism") {
  const std::string dir = scratch("cmd_perturb");
  const RunSpec spec = parse_config(
      "[initial]\nepsilon = 0.0\nseed = 11\n[mesh]\nN = 8\n"
      "[integrator]\nt_final = 0.02\n[output]\nsnapshot_interval = 0.01\n",
      RunMode::perturb, dir, true);
  CHECK(cmd_perturb(spec) == kExitOk);
  REQUIRE(fs::exists(dir + "/distance.csv"));

  const nlohmann::json report = parse_json_file(dir + "/report.json");
  CHECK(report["verdicts"]["identical_start"] == true);
  CHECK(report["verdicts"]["uniqueness_pass"] == true);
  CHECK(report["verdicts"]["D0"] == 0.0);
  for (const auto& d : report["series"]["D"]) CHECK(d.get<double>() == 0.0);

  const std::string csv = slurp(dir + "/distance.csv");
  CHECK(contains(csv, "t,D\n"));
  CHECK(contains(csv, ",0\n"));
}

TEST_CASE("perturb at a small amplitude fits a finite growth rate") {
  const std::string dir = scratch("cmd_perturb_eps");
  const RunSpec spec = parse_config(
      "[initial]\nepsilon = 1e-3\nseed = 11\n[mesh]\nN = 8\n"
      "[integrator]\nt_final = 0.02\n[output]\nsnapshot_interval = 0.01\n",
      RunMode::perturb, dir, true);
  CHECK(cmd_perturb(spec) == kExitOk);
  const nlohmann::json report = parse_json_file(dir + "/report.json");
  CHECK(report["verdicts"]["identical_start"] == false);
  CHECK(report["verdicts"]["D0"].get<double>() > 0.0);
  CHECK(report["verdicts"]["growth_bound_pass"] == true);
  CHECK(std::isfinite(report["verdicts"]["C_hat"].get<double>()));
}

TEST_CASE("converge reports monotone refinement errors") {
  const std::string dir = scratch("cmd_converge");
  const RunSpec spec = parse_config(
      "[mesh]\nrefinements = 8, 16, 32\n[integrator]\nt_final = 0.05\n"
      "[output]\nsnapshot_interval = 0.05\n",
      RunMode::converge, dir, true);
  CHECK(cmd_converge(spec) == kExitOk);

  const nlohmann::json report = parse_json_file(dir + "/report.json");
  CHECK(report["verdicts"]["all_runs_completed"] == true);
  CHECK(report["verdicts"]["errors_decrease_monotonically"] == true);
  REQUIRE(report["series"]["errors"].size() == 2);
  REQUIRE(report["series"]["orders"].size() == 1);
  CHECK(report["series"]["errors"][0]["coarse"] == 8);
  CHECK(report["series"]["errors"][0]["fine"] == 16);
  for (const char* field : {"rho", "u", "r"}) {
    const double e0 = report["series"]["errors"][0][field].get<double>();
    const double e1 = report["series"]["errors"][1][field].get<double>();
    CHECK(e0 > e1);
  }
  CHECK(report["termination"]["runs"].size() == 3);
}

TEST_CASE("a compressive run trips the sandwich guard and exits 2") {
  const std::string dir = scratch("cmd_run_guard");
  const RunSpec spec = parse_config(
      "[initial]\nu0 = poly 0 -2\n[mesh]\nN = 8\n"
      "[integrator]\nt_final = 2.0\nsandwich_factor = 1.05\n"
      "[output]\nsnapshot_interval = 0.1\n",
      RunMode::run, dir, true);
  CHECK(cmd_run(spec) == kExitGuard);
  const nlohmann::json report = parse_json_file(dir + "/report.json");
  CHECK(report["termination"]["reason"] == "sandwich-violated");
  CHECK(report["termination"]["detail"] != "");
}
