#include "vacns/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace vacns {

double rho_pow(double rho, double e) {
  if (rho < 0.0) throw std::domain_error("rho_pow: negative density");
  if (rho < 1e-300) return 0.0;
  return std::exp(e * std::log(rho));
}

double ipow(double base, int e) {
  double acc = 1.0;
  for (int i = 0; i < e; ++i) acc *= base;
  return acc;
}

double forward_difference(std::span<const double> w, int j, double h) {
  return (w[j + 1] - w[j]) / h;
}

std::vector<double> recompute_radii(std::span<const double> rho,
                                    const PhysicalParameters& p, double h) {
  const int cells = int(rho.size());
  std::vector<double> r(cells + 1);
  r[0] = p.a;
  double acc = ipow(p.a, p.n);
  for (int k = 0; k < cells; ++k) {
    if (!(rho[k] > 0.0)) {
      std::ostringstream os;
      os << "vacuum collapse: rho[" << k << "] = " << rho[k];
      throw VacuumCollapseError(os.str());
    }
    acc += p.n * h / rho[k];
    r[k + 1] = p.n == 2 ? std::sqrt(acc)
             : p.n == 3 ? std::cbrt(acc)
                        : std::exp(std::log(acc) / p.n);
  }
  return r;
}

namespace {

// d(r^{n-1} u)_j with the ghost value closing the j = N stencil.
double flux_difference(const GridState& s, int j, const PhysicalParameters& p) {
  const double lo = ipow(s.r[j], p.n - 1) * s.u[j];
  const double hi_u = j + 1 <= s.N ? s.u[j + 1] : s.u_ghost;
  const double hi = ipow(s.r[j + 1], p.n - 1) * hi_u;
  return (hi - lo) / s.h;
}

}  // namespace

double stress(const GridState& s, int j, const PhysicalParameters& p) {
  const double rho = s.rho[j - 1];
  return (2.0 * p.c1 + p.c2) * rho_pow(rho, p.theta + 1.0) *
             flux_difference(s, j - 1, p) -
         rho_pow(rho, p.gamma);
}

namespace {

// The closure is linear in the ghost velocity. With rho_N^theta factored
// out it reads coeff * u_ghost = rhs_term with
//   coeff = -(2c1+c2) rho_N r_{N+1}^{n-1} / h + 2c1(n-1) / r_{N+1}
//   rhs   = -rho_N^{gamma-theta} - (2c1+c2) rho_N r_N^{n-1} u_N / h
// which stays finite as rho_N -> 0 because theta < gamma.
struct ClosureParts {
  double coeff;
  double rhs;
  double scale;
};

ClosureParts closure_parts(const GridState& s, const PhysicalParameters& p) {
  const int N = s.N;
  const double rb = s.r[N + 1];
  const double visc = (2.0 * p.c1 + p.c2) * s.rho[N] / s.h;
  const double curv = 2.0 * p.c1 * (p.n - 1) / rb;
  ClosureParts parts;
  parts.coeff = -visc * ipow(rb, p.n - 1) + curv;
  parts.rhs = -rho_pow(s.rho[N], p.gamma - p.theta) -
              visc * ipow(s.r[N], p.n - 1) * s.u[N];
  parts.scale = std::abs(visc * ipow(rb, p.n - 1)) + std::abs(curv);
  return parts;
}

}  // namespace

double close_boundary(const GridState& s, const PhysicalParameters& p) {
  const ClosureParts parts = closure_parts(s, p);
  if (std::abs(parts.coeff) < 1e-14 * parts.scale || parts.scale == 0.0)
    throw DegenerateClosureError("degenerate boundary closure");
  return parts.rhs / parts.coeff;
}

double boundary_residual(const GridState& s, const PhysicalParameters& p) {
  const int N = s.N;
  return rho_pow(s.rho[N], p.gamma) -
         rho_pow(s.rho[N], 1.0 + p.theta) * (2.0 * p.c1 + p.c2) *
             flux_difference(s, N, p) +
         2.0 * p.c1 * (p.n - 1) * (s.u_ghost / s.r[N + 1]) *
             rho_pow(s.rho[N], p.theta);
}

double radius_law_residual(const GridState& s, const PhysicalParameters& p) {
  double acc = ipow(p.a, p.n);
  double worst = 0.0;
  for (int i = 0; i <= s.N; ++i) {
    acc += p.n * s.h / s.rho[i];
    const double defect = std::abs(ipow(s.r[i + 1], p.n) - acc) / acc;
    worst = std::max(worst, defect);
  }
  return worst;
}

void refresh_geometry(GridState& s, const PhysicalParameters& p) {
  s.r = recompute_radii(s.rho, p, s.h);
  s.u_ghost = close_boundary(s, p);
}

RhsVector assemble_rhs(const GridState& s, const ForceModel& force,
                       const PhysicalParameters& p) {
  const int N = s.N;
  RhsVector rhs;
  rhs.drho.resize(N + 1);
  rhs.du.resize(N);

  for (int i = 0; i <= N; ++i) {
    rhs.drho[i] = -s.rho[i] * s.rho[i] * flux_difference(s, i, p);
  }

  // Stresses sigma_1..sigma_{N+1}; sigma_{j} lives on cell j-1.
  std::vector<double> sigma(N + 2);
  for (int j = 1; j <= N + 1; ++j) sigma[j] = stress(s, j, p);

  for (int j = 1; j <= N; ++j) {
    const double dvisc =
        (rho_pow(s.rho[j], p.theta) - rho_pow(s.rho[j - 1], p.theta)) / s.h;
    rhs.du[j - 1] = ipow(s.r[j], p.n - 1) * (sigma[j + 1] - sigma[j]) / s.h -
                    2.0 * p.c1 * (p.n - 1) * ipow(s.r[j], p.n - 2) * s.u[j] *
                        dvisc +
                    force(s.r[j], s.t);
  }
  return rhs;
}

GridState make_initial_state(const PhysicalParameters& p,
                             const InitialData& data, int N) {
  if (N < 2) throw std::invalid_argument("initial state needs N >= 2");
  if (!data.rho0 || !data.u0)
    throw std::invalid_argument("initial state needs rho0 and u0 profiles");
  GridState s;
  s.N = N;
  s.h = 1.0 / N;
  s.t = 0.0;
  s.rho.resize(N + 1);
  s.u.resize(N + 1);
  for (int j = 1; j <= N; ++j) {
    const double x0 = (j - 1) * s.h;
    const double x1 = j * s.h;
    s.rho[j] = data.rho0->mean(x0, x1);
    s.u[j] = data.u0->mean(x0, x1);
    if (!(s.rho[j] > 0.0)) {
      std::ostringstream os;
      os << "vacuum collapse: initial cell " << j << " mean density "
         << s.rho[j];
      throw VacuumCollapseError(os.str());
    }
  }
  s.rho[0] = s.rho[1];
  s.u[0] = 0.0;
  refresh_geometry(s, p);
  return s;
}

double grid_energy(std::span<const double> rho, std::span<const double> u,
                   double h, double gamma) {
  double acc = 0.0;
  for (size_t j = 0; j < rho.size(); ++j) {
    acc += 0.5 * u[j] * u[j] + rho_pow(rho[j], gamma - 1.0) / (gamma - 1.0);
  }
  return acc * h;
}

}  // namespace vacns
