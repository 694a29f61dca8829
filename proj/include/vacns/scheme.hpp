#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "vacns/model.hpp"

namespace vacns {

/// Raised when a density reaches zero or below during assembly or stepping.
class VacuumCollapseError : public std::runtime_error {
 public:
  explicit VacuumCollapseError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Raised when the ghost-velocity closure becomes numerically singular.
class DegenerateClosureError : public std::runtime_error {
 public:
  explicit DegenerateClosureError(const std::string& what)
      : std::runtime_error(what) {}
};

/// rho^e computed as exp(e*log(rho)); maps rho < 1e-300 to 0 and rejects
/// negative rho. Integer exponents of radii use ipow instead.
double rho_pow(double rho, double e);
/// Integer power by repeated multiplication; e >= 0.
double ipow(double base, int e);

/// Discrete Lagrangian state on the uniform mass grid x_j = j*h, N*h = 1.
/// Cell values rho_0..rho_N and u_0..u_N live at the nodes, with rho_0
/// duplicating the core boundary cell and u_0 pinned to the no-slip core.
/// The radii r_0..r_{N+1} follow from the radius law, and u_ghost is the
/// ghost velocity u_{N+1} that closes the free-boundary stress balance.
struct GridState {
  int N = 0;
  double h = 0.0;
  double t = 0.0;
  std::vector<double> rho;  ///< size N+1
  std::vector<double> u;    ///< size N+1, u[0] == 0
  double u_ghost = 0.0;
  std::vector<double> r;    ///< size N+2, r[0] == a
};

/// Time derivatives of the evolved unknowns: drho_0..drho_N and du_1..du_N.
struct RhsVector {
  std::vector<double> drho;  ///< size N+1
  std::vector<double> du;    ///< size N
};

/// (w[j+1] - w[j]) / h.
double forward_difference(std::span<const double> w, int j, double h);

/// Radii from the radius law r_{i+1}^n = a^n + n * sum_{k<=i} h/rho_k,
/// r_0 = a. Returns N+2 radii. Throws VacuumCollapseError when any
/// rho_k <= 0.
std::vector<double> recompute_radii(std::span<const double> rho,
                                    const PhysicalParameters& p, double h);

/// Stress sigma_j for 1 <= j <= N+1, built from cell j-1:
/// sigma_j = (2c1+c2) * rho_{j-1}^{theta+1} * d(r^{n-1}u)_{j-1} - rho_{j-1}^gamma.
/// j = N+1 uses the ghost velocity.
double stress(const GridState& s, int j, const PhysicalParameters& p);

/// Ghost velocity u_{N+1} solving the free-boundary stress balance
///   rho_N^gamma - (2c1+c2) rho_N^{1+theta} d(r^{n-1}u)_N
///     + 2c1(n-1) (u_{N+1}/r_{N+1}) rho_N^theta = 0,
/// evaluated in a form with rho_N^theta factored out so the vacuum limit
/// rho_N -> 0 stays finite. Throws DegenerateClosureError when the linear
/// coefficient vanishes relative to its parts.
double close_boundary(const GridState& s, const PhysicalParameters& p);

/// Residual of the free-boundary stress balance at the state's u_ghost.
double boundary_residual(const GridState& s, const PhysicalParameters& p);

/// Worst relative defect of the radius law across i = 0..N.
double radius_law_residual(const GridState& s, const PhysicalParameters& p);

/// Recomputes radii from rho and re-closes the ghost velocity in place.
void refresh_geometry(GridState& s, const PhysicalParameters& p);

/// Right-hand side of the semi-discrete system at the given state:
///   drho_i = -rho_i^2 * d(r^{n-1}u)_i                    (i = 0..N)
///   du_j   = r_j^{n-1} d(sigma)_j
///            - 2c1(n-1) r_j^{n-2} u_j d(rho^theta)_{j-1}
///            + f(r_j, t)                                  (j = 1..N)
/// Expects radii and ghost already consistent (see refresh_geometry).
RhsVector assemble_rhs(const GridState& s, const ForceModel& force,
                       const PhysicalParameters& p);

/// Initial state from cell averages of the profiles: rho_j and u_j average
/// over ((j-1)h, jh] for j = 1..N, rho_0 duplicates rho_1, u_0 = 0, radii
/// and ghost follow from the geometry refresh.
GridState make_initial_state(const PhysicalParameters& p,
                             const InitialData& data, int N);

/// sum_j (u_j^2/2 + rho_j^{gamma-1}/(gamma-1)) * h over j = 0..N.
double grid_energy(std::span<const double> rho, std::span<const double> u,
                   double h, double gamma);

}  // namespace vacns
