#include "vacns/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <vector>

namespace vacns {

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::run: return "run";
    case RunMode::converge: return "converge";
    case RunMode::perturb: return "perturb";
    case RunMode::audit: return "audit";
  }
  return "run";
}

RunMode run_mode_from_string(const std::string& s) {
  if (s == "run") return RunMode::run;
  if (s == "converge") return RunMode::converge;
  if (s == "perturb") return RunMode::perturb;
  if (s == "audit") return RunMode::audit;
  throw ConfigError("unknown mode '" + s +
                    "' (expected run, converge, perturb or audit)");
}

namespace {

struct Entry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string where(const Entry& e) {
  return "[" + e.section + "] " + e.key + " (line " +
         std::to_string(e.line) + ")";
}

std::vector<Entry> tokenize(const std::string& text) {
  std::vector<Entry> out;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const size_t cut = raw.find_first_of("#;");
    if (cut != std::string::npos) raw.erase(cut);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']')
        throw ConfigError("line " + std::to_string(line) +
                          ": malformed section header '" + s + "'");
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty())
        throw ConfigError("line " + std::to_string(line) + ": empty section name");
      continue;
    }
    const size_t eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line) +
                        ": expected key = value, got '" + s + "'");
    Entry e;
    e.section = section;
    e.key = trim(s.substr(0, eq));
    e.value = trim(s.substr(eq + 1));
    e.line = line;
    if (e.key.empty())
      throw ConfigError("line " + std::to_string(line) + ": empty key");
    if (e.section.empty())
      throw ConfigError("line " + std::to_string(line) + ": key '" + e.key +
                        "' appears before any section header");
    out.push_back(std::move(e));
  }
  return out;
}

double to_double(const Entry& e) {
  const char* b = e.value.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(b, &end);
  if (end == b || *end != '\0' || !std::isfinite(v))
    throw ConfigError(where(e) + ": expected a number, got '" + e.value + "'");
  return v;
}

long to_long(const Entry& e) {
  const char* b = e.value.c_str();
  char* end = nullptr;
  errno = 0;
  const long v = std::strtol(b, &end, 10);
  if (end == b || *end != '\0' || errno == ERANGE)
    throw ConfigError(where(e) + ": expected an integer, got '" + e.value + "'");
  return v;
}

int to_int(const Entry& e) {
  const long v = to_long(e);
  if (v < -1000000000L || v > 1000000000L)
    throw ConfigError(where(e) + ": integer out of range");
  return int(v);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double token_to_double(const Entry& e, const std::string& tok) {
  const char* b = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(b, &end);
  if (end == b || *end != '\0' || !std::isfinite(v))
    throw ConfigError(where(e) + ": expected a number, got '" + tok + "'");
  return v;
}

/// Grammar: "power C ALPHA" | "poly c0 c1 ..." | "table x0:v0 x1:v1 ...".
ProfilePtr parse_profile(const Entry& e) {
  const auto toks = split_ws(e.value);
  if (toks.empty())
    throw ConfigError(where(e) + ": empty profile expression");
  try {
    if (toks[0] == "power") {
      if (toks.size() != 3)
        throw ConfigError(where(e) + ": power takes two arguments: coef alpha");
      return power_profile(token_to_double(e, toks[1]),
                           token_to_double(e, toks[2]));
    }
    if (toks[0] == "poly") {
      if (toks.size() < 2)
        throw ConfigError(where(e) + ": poly needs at least one coefficient");
      std::vector<double> c;
      for (size_t k = 1; k < toks.size(); ++k)
        c.push_back(token_to_double(e, toks[k]));
      return polynomial_profile(std::move(c));
    }
    if (toks[0] == "table") {
      std::vector<double> xs, vals;
      for (size_t k = 1; k < toks.size(); ++k) {
        const size_t colon = toks[k].find(':');
        if (colon == std::string::npos)
          throw ConfigError(where(e) + ": table entries are x:value pairs");
        xs.push_back(token_to_double(e, toks[k].substr(0, colon)));
        vals.push_back(token_to_double(e, toks[k].substr(colon + 1)));
      }
      return table_profile(std::move(xs), std::move(vals));
    }
  } catch (const std::invalid_argument& bad) {
    throw ConfigError(where(e) + ": " + bad.what());
  }
  throw ConfigError(where(e) + ": unknown profile kind '" + toks[0] +
                    "' (expected power, poly or table)");
}

void require(bool ok, const Entry& e, const std::string& constraint) {
  if (!ok)
    throw ConfigError(where(e) + " = " + e.value + ": " + constraint +
                      " required");
}

}  // namespace

RunSpec parse_config(const std::string& text, RunMode mode,
                     const std::string& out_dir, bool quiet) {
  RunSpec spec;
  spec.mode = mode;
  spec.out_dir = out_dir;
  spec.quiet = quiet;

  bool seen_alpha0 = false, seen_lambda0 = false, seen_m = false;
  bool seen_epsilon = false, seen_seed = false, seen_refinements = false;
  std::string force_kind = "zero";
  double force_amplitude = 0.0, force_decay = 0.0;

  for (const Entry& e : tokenize(text)) {
    if (e.section == "physics") {
      if (e.key == "n") {
        spec.params.n = to_int(e);
        require(spec.params.n >= 2, e, "n >= 2");
      } else if (e.key == "a") {
        spec.params.a = to_double(e);
        require(spec.params.a > 0.0, e, "a > 0");
      } else if (e.key == "gamma") {
        spec.params.gamma = to_double(e);
        require(spec.params.gamma > 1.0, e, "gamma > 1");
      } else if (e.key == "theta") {
        spec.params.theta = to_double(e);
        require(spec.params.theta > 0.0, e, "theta > 0");
      } else if (e.key == "c1") {
        spec.params.c1 = to_double(e);
        require(spec.params.c1 > 0.0, e, "c1 > 0");
      } else if (e.key == "c2") {
        spec.params.c2 = to_double(e);
      } else {
        throw ConfigError(where(e) + ": unknown key");
      }
    } else if (e.section == "initial") {
      if (e.key == "rho0") {
        spec.init.rho0 = parse_profile(e);
      } else if (e.key == "u0") {
        spec.init.u0 = parse_profile(e);
      } else if (e.key == "alpha") {
        spec.init.alpha = to_double(e);
        require(spec.init.alpha > 0.0, e, "alpha > 0");
      } else if (e.key == "A") {
        spec.init.A = to_double(e);
        require(spec.init.A > 0.0, e, "A > 0");
      } else if (e.key == "B") {
        spec.init.B = to_double(e);
        require(spec.init.B > 0.0, e, "B > 0");
      } else if (e.key == "alpha0") {
        spec.init.alpha0 = to_double(e);
        seen_alpha0 = true;
      } else if (e.key == "lambda0") {
        spec.init.lambda0 = to_double(e);
        seen_lambda0 = true;
      } else if (e.key == "m") {
        spec.init.m = to_int(e);
        require(spec.init.m >= 1, e, "m >= 1");
        seen_m = true;
      } else if (e.key == "epsilon") {
        spec.epsilon = to_double(e);
        require(spec.epsilon >= 0.0, e, "epsilon >= 0");
        seen_epsilon = true;
      } else if (e.key == "seed") {
        spec.seed = to_long(e);
        seen_seed = true;
      } else {
        throw ConfigError(where(e) + ": unknown key");
      }
    } else if (e.section == "force") {
      if (e.key == "kind") {
        if (e.value != "zero" && e.value != "radial")
          throw ConfigError(where(e) + ": unknown force kind '" + e.value +
                            "' (expected zero or radial)");
        force_kind = e.value;
      } else if (e.key == "amplitude") {
        force_amplitude = to_double(e);
      } else if (e.key == "decay") {
        force_decay = to_double(e);
        require(force_decay >= 0.0, e, "decay >= 0");
      } else {
        throw ConfigError(where(e) + ": unknown key");
      }
    } else if (e.section == "mesh") {
      if (e.key == "N") {
        spec.N = to_int(e);
        require(spec.N >= 2, e, "N >= 2");
      } else if (e.key == "refinements") {
        std::string normalized = e.value;
        for (char& c : normalized)
          if (c == ',') c = ' ';
        spec.refinements.clear();
        for (const std::string& tok : split_ws(normalized)) {
          Entry sub = e;
          sub.value = tok;
          const int nk = to_int(sub);
          require(nk >= 2, sub, "each refinement N >= 2");
          spec.refinements.push_back(nk);
        }
        require(!spec.refinements.empty(), e, "a non-empty mesh list");
        seen_refinements = true;
      } else {
        throw ConfigError(where(e) + ": unknown key");
      }
    } else if (e.section == "integrator") {
      if (e.key == "rel_tol") {
        spec.controller.rel_tol = to_double(e);
        require(spec.controller.rel_tol > 0.0, e, "rel_tol > 0");
      } else if (e.key == "abs_tol") {
        spec.controller.abs_tol = to_double(e);
        require(spec.controller.abs_tol > 0.0, e, "abs_tol > 0");
      } else if (e.key == "safety") {
        spec.controller.safety = to_double(e);
        require(spec.controller.safety > 0.0 && spec.controller.safety <= 1.0,
                e, "0 < safety <= 1");
      } else if (e.key == "dt_min") {
        spec.controller.dt_min = to_double(e);
        require(spec.controller.dt_min > 0.0, e, "dt_min > 0");
      } else if (e.key == "dt_max") {
        spec.controller.dt_max = to_double(e);
        require(spec.controller.dt_max > 0.0, e, "dt_max > 0");
      } else if (e.key == "cfl") {
        spec.controller.cfl = to_double(e);
        require(spec.controller.cfl > 0.0, e, "cfl > 0");
      } else if (e.key == "t_final") {
        spec.run_config.t_final = to_double(e);
        require(spec.run_config.t_final >= 0.0, e, "t_final >= 0");
      } else if (e.key == "max_velocity") {
        spec.run_config.max_velocity = to_double(e);
        require(spec.run_config.max_velocity > 0.0, e, "max_velocity > 0");
      } else if (e.key == "sandwich_factor") {
        spec.run_config.sandwich_factor = to_double(e);
        require(spec.run_config.sandwich_factor > 1.0, e,
                "sandwich_factor > 1");
      } else if (e.key == "max_energy_growth") {
        spec.run_config.max_energy_growth = to_double(e);
        require(spec.run_config.max_energy_growth > 1.0, e,
                "max_energy_growth > 1");
      } else {
        throw ConfigError(where(e) + ": unknown key");
      }
    } else if (e.section == "output") {
      if (e.key == "snapshot_interval") {
        spec.run_config.snapshot_interval = to_double(e);
        require(spec.run_config.snapshot_interval > 0.0, e,
                "snapshot_interval > 0");
      } else if (e.key == "audit_csv") {
        spec.audit_csv = e.value;
      } else {
        throw ConfigError(where(e) + ": unknown key");
      }
    } else {
      throw ConfigError("line " + std::to_string(e.line) +
                        ": unknown section [" + e.section + "]");
    }
  }

  if (spec.controller.dt_max < spec.controller.dt_min)
    throw ConfigError("[integrator] dt_max: dt_max >= dt_min required");
  if (2.0 * spec.params.c1 + spec.params.n * spec.params.c2 <= 0.0)
    throw ConfigError("[physics] c2: 2*c1 + n*c2 > 0 required");
  if (spec.params.theta >= spec.params.gamma)
    throw ConfigError("[physics] theta: theta < gamma required");
  if (spec.init.A > spec.init.B)
    throw ConfigError("[initial] B: A <= B required");

  if (!spec.init.rho0)
    spec.init.rho0 = power_profile(1.0, spec.init.alpha);
  if (!spec.init.u0) spec.init.u0 = polynomial_profile({0.0, 0.1});

  // Unspecified derived exponents fall back to the admissible-window
  // midpoints for this (gamma, theta, alpha); an empty window keeps the
  // struct defaults and surfaces through the validation report instead.
  if (!seen_alpha0 || !seen_lambda0 || !seen_m) {
    try {
      const ExponentWindows w = derived_exponents(
          spec.params, spec.init.alpha, seen_m ? spec.init.m : -1);
      if (!seen_m) spec.init.m = w.m_min;
      if (!seen_alpha0) spec.init.alpha0 = w.alpha0_default;
      if (!seen_lambda0) spec.init.lambda0 = w.lambda0_default;
    } catch (const std::domain_error&) {
    }
  }

  if (force_kind == "radial")
    spec.force = ForceModel::radial(force_amplitude, force_decay, spec.params.a);
  else
    spec.force = ForceModel::zero();

  if (mode == RunMode::converge && !seen_refinements)
    throw ConfigError("converge mode needs [mesh] refinements");
  if (mode == RunMode::perturb && !seen_epsilon)
    throw ConfigError("perturb mode needs [initial] epsilon");
  if (mode == RunMode::perturb && !seen_seed)
    throw ConfigError("perturb mode needs [initial] seed");

  spec.validation = validate_assumptions(spec.params, spec.init, spec.force);
  for (const Check& c : spec.validation.checks) {
    if (c.pass) continue;
    const std::string msg = "assumption not satisfied: " + c.name +
                            (c.note.empty() ? "" : " (" + c.note + ")");
    if (mode == RunMode::converge || mode == RunMode::perturb)
      throw ConfigError(msg);
    spec.warnings.push_back(msg);
  }
  return spec;
}

std::string config_template() {
  return R"(# Spherically symmetric flow with density-degenerate viscosity around a
# solid core, bounded by a vacuum free boundary. Every key is optional and
# shown at its default value.

[physics]
n = 2                       # spatial dimension (>= 2)
a = 1.0                     # solid core radius (> 0)
gamma = 2.0                 # pressure exponent, P = rho^gamma (> 1)
theta = 1.0                 # viscosity exponent, mu = c1 rho^theta (0 < theta < gamma)
c1 = 1.0                    # shear viscosity coefficient (> 0)
c2 = 0.0                    # bulk viscosity coefficient (2 c1 + n c2 > 0)

[initial]
rho0 = power 1.0 0.4        # "power C ALPHA" -> C (1-x)^ALPHA;
u0 = poly 0.0 0.1           # "poly c0 c1 ..." -> sum c_k x^k; "table x:v ..."
alpha = 0.4                 # vacuum decay exponent of rho0 near x = 1
A = 1.0                     # lower sandwich constant: A (1-x)^alpha <= rho0
B = 1.0                     # upper sandwich constant: rho0 <= B (1-x)^alpha
alpha0 = 0.6                # density-derivative weight exponent (default: window midpoint)
lambda0 = 1.125             # velocity-difference norm exponent (default: window midpoint)
m = 3                       # half the number of tracked velocity moments
epsilon = 0.0               # perturb mode amplitude
seed = 0                    # perturb mode provenance tag

[force]
kind = zero                 # zero | radial
amplitude = 0.0             # radial: f(r,t) = amplitude exp(-decay t) a / r
decay = 0.0

[mesh]
N = 64                      # number of mass cells
refinements = 32, 64, 128   # converge mode mesh list

[integrator]
rel_tol = 1e-8
abs_tol = 1e-10
safety = 0.9
dt_min = 1e-12
dt_max = 1e-2
cfl = 0.9                   # fraction of the parabolic stability limit
t_final = 1.0
max_velocity = 50.0         # guard: stop when max |u| exceeds this
sandwich_factor = 3.0       # guard: stop when rho_i / rho_i(0) leaves [1/f, f]
max_energy_growth = 10.0    # guard: stop when E(t) / E(0) exceeds this

[output]
snapshot_interval = 0.05
audit_csv =                 # audit mode input; empty -> <out>/snapshots.csv
)";
}

}  // namespace vacns
